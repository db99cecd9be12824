"""Seeded generator of labeled synthetic advice documents.

Sentences come from per-class template banks whose trigger vocabulary is
disjoint at noise 0; the noise rate injects distractor sentences that reuse
trigger words under a "neither/other" label, which is what makes the
acceptance thresholds meaningful. Intended ratings are not asserted by
profile name: every document's ground truth is computed by running the same
rule cascades the pipeline uses, on the generated content with its true
labels. Generator and evaluator therefore agree by construction, and any
disagreement seen later is attributable to classifier error alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable

from .assess import assess_from_labels
from .kris import DocumentLabels, KriPolicy, load_policy
from .model import Paragraph, Section, SoaDocument, Table, enumerate_units, split_sentences
from .tables import AssetTaxonomy, load_taxonomy

TASKS = ("goal_rec", "position", "balance_mention", "insurance")


@dataclass(frozen=True)
class PlannedSentence:
    text: str
    labels: dict[str, str]


def _sentence(
    text: str,
    goal_rec: str = "neither",
    position: str = "other",
    balance: str = "other",
    insurance: str = "other",
) -> PlannedSentence:
    return PlannedSentence(
        text=text,
        labels={
            "goal_rec": goal_rec,
            "position": position,
            "balance_mention": balance,
            "insurance": insurance,
        },
    )


@dataclass(frozen=True)
class PlannedTable:
    table: Table
    table_type: str
    balance_label: str = "other"


# --- sentence banks ---------------------------------------------------------

GOAL_FRAMES = ("I would like to {x}.", "I want to {x}.", "My goal is to {x}.", "I wish to {x}.")
REC_FRAMES = ("We recommend a plan to {x}.", "We recommend a strategy to {x}.")

# Matched pairs share a full phrase, one topic, and the same numbers, which
# keeps their pair score in the green band. Index = topic identity.
MATCHED_PHRASES: tuple[Callable[[random.Random], str], ...] = (
    lambda rng: "retire at age {} with a comfortable annual income of ${:,}".format(
        rng.randrange(58, 68), rng.randrange(45, 76) * 1000
    ),
    lambda rng: "travel overseas each year on a holiday budget of ${:,}".format(
        rng.randrange(12, 25) * 1000
    ),
    lambda rng: "pay off the mortgage on our family home within {} years".format(
        rng.randrange(5, 12)
    ),
    lambda rng: "repay the investment loan of ${:,} ahead of schedule".format(
        rng.randrange(15, 60) * 1000
    ),
    lambda rng: "leave a bequest of ${:,} to each of our beneficiaries".format(
        rng.randrange(25, 100) * 1000
    ),
)

# Weak pairs share a topic but no numbers and little vocabulary: the score
# lands in the amber band.
WEAK_PAIRS = (
    (
        "grow our long term investment portfolio steadily",
        "We recommend an annual review of your investment portfolio allocation.",
    ),
    (
        "make better use of our superannuation arrangements",
        "We recommend an annual contribution review within your superannuation fund.",
    ),
    (
        "keep our household spending within a sensible budget",
        "We recommend a quarterly budget review to track your spending habits.",
    ),
)

INSURANCE_BANK = {
    "recommend": (
        "We recommend income protection insurance and additional life cover for you both.",
        "We recommend trauma insurance and TPD cover funded through your existing policies.",
    ),
    "defer": (
        "We will defer the insurance discussion until our next annual review.",
        "Insurance needs will be deferred and revisited at our review meeting next year.",
    ),
    "scope_out": (
        "Insurance advice has been scoped out of this engagement at your request.",
        "You asked that insurance cover be scoped out of the advice we prepared.",
    ),
}

POSITIVE_POSITION = (
    "Following our advice your cash flow position will improve by ${:,} each year.",
    "The strategy should improve your overall cash flow position by ${:,} annually.",
)
MISSTATED_POSITION = (
    "Following our advice your cash flow position will improve by -${:,} each year.",
)
ACKNOWLEDGED_POSITION = (
    "You will have a reduced cash flow position of -${:,} each year, but the plan remains affordable.",
    "Your cash flow position will be reduced by -${:,} annually, a shortfall we believe is manageable.",
)

BALANCE_SENTENCES = (
    "Your current superannuation balance is ${:,}.",
    "Your combined superannuation balance currently stands at ${:,}.",
)

FILLERS = (
    "This document is confidential and prepared for the persons named above.",
    "Please read the product disclosure statement before acting on this advice.",
    "Fees and charges are set out in the attached fee schedule.",
    "Our office will contact you to arrange implementation of the agreed steps.",
    "This advice is based on the information you provided during our meetings.",
    "Past performance is not a reliable indicator of future performance.",
)

# Distractors reuse trigger vocabulary under an all-default label, so a noisy
# corpus genuinely stresses the classifiers.
DISTRACTORS = (
    "The glossary at the back of this document explains terms such as goal and recommendation.",
    "General information about insurance cover options is available in the product guide.",
    "Market commentary about cash flow position trends is general in nature only.",
    "Industry averages for the typical super balance are shown for comparison only.",
)

ASSET_DISPLAY = (
    "Cash",
    "Fixed interest",
    "Australian equities",
    "International equities",
    "Listed property",
    "Alternatives",
)
ALLOCATION_SPLITS = ((40, 30, 20, 10), (35, 30, 20, 15), (45, 25, 20, 10), (50, 20, 20, 10))


@dataclass(frozen=True)
class CorpusProfile:
    """Knobs for one document archetype. Intended ratings are never stored
    here; they are derived from the generated content."""

    name: str
    matched_pairs: int = 2
    weak_pairs: int = 0
    unmatched_goals: int = 0
    insurance: str = "recommend"  # recommend | defer | scope_out | none
    include_asset_table: bool = True
    single_asset: bool = False
    include_projection_table: bool = True
    projection_years: int = 11
    include_cashflow_table: bool = True
    cashflow_net: str = "positive"  # positive | negative
    acknowledge_negative: bool = True
    include_position_sentences: bool = True
    misstatement: bool = False
    balance_low: int = 260_000
    balance_high: int = 420_000
    extra_filler: int = 0
    noise: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class GroundTruth:
    document_id: str
    profile: str
    unit_labels: dict[str, dict[str, str]]  # task -> unit_id -> label
    table_types: dict[str, str]
    intended_kri: dict[str, str]
    intended_overall: str


def truth_to_dict(truth: GroundTruth) -> dict:
    return {
        "document_id": truth.document_id,
        "profile": truth.profile,
        "unit_labels": truth.unit_labels,
        "table_types": truth.table_types,
        "intended_kri": truth.intended_kri,
        "intended_overall": truth.intended_overall,
    }


def truth_from_dict(data: dict) -> GroundTruth:
    return GroundTruth(
        document_id=data["document_id"],
        profile=data["profile"],
        unit_labels=data["unit_labels"],
        table_types=data["table_types"],
        intended_kri=data["intended_kri"],
        intended_overall=data["intended_overall"],
    )


# --- table builders ---------------------------------------------------------


def _money(v: int) -> str:
    return f"-${-v:,}" if v < 0 else f"${v:,}"


def _asset_table(rng: random.Random, single: bool) -> Table:
    if single:
        rows = (("Cash", "100"),)
    else:
        names = rng.sample(ASSET_DISPLAY, 4)
        shares = rng.choice(ALLOCATION_SPLITS)
        rows = tuple((name, str(share)) for name, share in zip(names, shares))
    return Table(
        caption="Recommended asset allocation",
        header=("Asset class", "Allocation %"),
        rows=rows,
    )


def _projection_table(rng: random.Random, years: int, start_balance: int) -> Table:
    start_year = 2025
    values = [int(start_balance * (1.04**i)) for i in range(years)]
    return Table(
        caption="Projected superannuation growth",
        header=("Year",) + tuple(str(start_year + i) for i in range(years)),
        rows=(("Balance",) + tuple(_money(v) for v in values),),
    )


def _cashflow_table(rng: random.Random, net: int) -> Table:
    income = rng.randrange(70, 96) * 1000 + rng.randrange(0, 10) * 100
    expenses = income - net
    return Table(
        caption="Post advice cash flow analysis",
        header=("Item", "Annual amount"),
        rows=(
            ("Income", _money(income)),
            ("Expenses", _money(-expenses)),
            ("Net position", _money(net)),
        ),
    )


def _balance_table(amount: int) -> Table:
    return Table(
        caption="Current superannuation balance",
        header=("Account", "Balance"),
        rows=(("Accumulation account", _money(amount)),),
    )


def _notes_table() -> Table:
    return Table(
        caption="Important notes",
        header=("Notes",),
        rows=(
            ("Advice is based on the information you provided.",),
            ("Please review each section before implementation.",),
        ),
    )


# --- document assembly ------------------------------------------------------


def _apply_noise(
    rng: random.Random, sentences: list[PlannedSentence], noise: float
) -> list[PlannedSentence]:
    if noise <= 0:
        return sentences
    out = []
    for s in sentences:
        out.append(s)
        if rng.random() < noise:
            out.append(_sentence(rng.choice(DISTRACTORS)))
    return out


def generate_document(profile: CorpusProfile, seed: int) -> tuple[SoaDocument, GroundTruth]:
    """Deterministic per (profile, seed); ground truth computed, not asserted."""
    rng = random.Random(f"{profile.name}:{profile.seed}:{seed}")
    doc_id = f"soa-{seed % 10**8:08d}"

    matched_idx = rng.sample(range(len(MATCHED_PHRASES)), profile.matched_pairs)
    pool = [i for i in range(len(MATCHED_PHRASES)) if i not in matched_idx]
    unmatched_idx = rng.sample(pool, profile.unmatched_goals)
    weak_idx = rng.sample(range(len(WEAK_PAIRS)), profile.weak_pairs)

    goals: list[PlannedSentence] = []
    recs: list[PlannedSentence] = []
    for i in matched_idx:
        phrase = MATCHED_PHRASES[i](rng)
        goals.append(_sentence(rng.choice(GOAL_FRAMES).format(x=phrase), goal_rec="goal"))
        recs.append(_sentence(rng.choice(REC_FRAMES).format(x=phrase), goal_rec="recommendation"))
    for i in weak_idx:
        goal_phrase, rec_text = WEAK_PAIRS[i]
        goals.append(_sentence(rng.choice(GOAL_FRAMES).format(x=goal_phrase), goal_rec="goal"))
        recs.append(_sentence(rec_text, goal_rec="recommendation"))
    for i in unmatched_idx:
        phrase = MATCHED_PHRASES[i](rng)
        goals.append(_sentence(rng.choice(GOAL_FRAMES).format(x=phrase), goal_rec="goal"))
    rng.shuffle(goals)
    rng.shuffle(recs)

    position: list[PlannedSentence] = []
    net = rng.randrange(10, 51) * 100
    if profile.cashflow_net == "negative":
        net = -net
    if profile.include_position_sentences:
        position.append(
            _sentence(
                rng.choice(POSITIVE_POSITION).format(rng.randrange(20, 61) * 100),
                position="position",
            )
        )
        if profile.misstatement:
            position.append(
                _sentence(
                    rng.choice(MISSTATED_POSITION).format(rng.randrange(20, 61) * 100),
                    position="position",
                )
            )
        if profile.cashflow_net == "negative" and profile.acknowledge_negative:
            position.append(
                _sentence(
                    rng.choice(ACKNOWLEDGED_POSITION).format(-net), position="position"
                )
            )
        rng.shuffle(position)

    balance_amount = rng.randrange(profile.balance_low, profile.balance_high + 1, 1000)
    balance_para = [
        _sentence(rng.choice(BALANCE_SENTENCES).format(balance_amount), balance="balance")
    ]

    insurance_para = []
    if profile.insurance != "none":
        bank = INSURANCE_BANK[profile.insurance]
        count = rng.randrange(1, len(bank) + 1)
        goal_rec = "recommendation" if profile.insurance == "recommend" else "neither"
        for text in rng.sample(bank, count):
            insurance_para.append(_sentence(text, goal_rec=goal_rec, insurance=profile.insurance))

    intro = [rng.choice(FILLERS), rng.choice(FILLERS)]
    outro = [rng.choice(FILLERS), rng.choice(FILLERS)]
    outro += [rng.choice(FILLERS) for _ in range(profile.extra_filler)]

    sections: list[tuple[str, list]] = []

    def paragraph(sentences: list[PlannedSentence]) -> list[PlannedSentence]:
        return _apply_noise(rng, sentences, profile.noise)

    sections.append(("About this advice", [paragraph([_sentence(t) for t in intro])]))
    if goals:
        sections.append(("Your goals", [paragraph(goals)]))
    if recs:
        sections.append(("Our recommendations", [paragraph(recs)]))
    if profile.include_asset_table:
        sections.append(
            (
                "Investment strategy",
                [PlannedTable(_asset_table(rng, profile.single_asset), "asset_class")],
            )
        )
    financial_blocks: list = []
    if position:
        financial_blocks.append(paragraph(position))
    if profile.include_projection_table:
        financial_blocks.append(
            PlannedTable(
                _projection_table(rng, profile.projection_years, balance_amount), "projections"
            )
        )
    if profile.include_cashflow_table:
        financial_blocks.append(PlannedTable(_cashflow_table(rng, net), "cashflow"))
    if financial_blocks:
        sections.append(("Your financial position", financial_blocks))
    sections.append(
        (
            "Your superannuation",
            [
                paragraph(balance_para),
                PlannedTable(_balance_table(balance_amount), "other", balance_label="balance"),
            ],
        )
    )
    if insurance_para:
        sections.append(("Insurance", [paragraph(insurance_para)]))
    sections.append(
        (
            "Important information",
            [PlannedTable(_notes_table(), "other"), paragraph([_sentence(t) for t in outro])],
        )
    )

    plan_grid: dict[tuple[int, int], object] = {}
    model_sections = []
    for si, (heading, blocks) in enumerate(sections):
        model_blocks = []
        for bi, block in enumerate(blocks):
            plan_grid[(si, bi)] = block
            if isinstance(block, PlannedTable):
                model_blocks.append(block.table)
            else:
                text = " ".join(s.text for s in block)
                assert split_sentences(text) == [s.text for s in block], text
                model_blocks.append(Paragraph(text=text))
        model_sections.append(Section(heading=heading, blocks=tuple(model_blocks)))
    doc = SoaDocument(
        id=doc_id,
        title=f"Statement of Advice {doc_id}",
        sections=tuple(model_sections),
    )

    unit_labels: dict[str, dict[str, str]] = {task: {} for task in TASKS}
    table_types: dict[str, str] = {}
    for unit in enumerate_units(doc):
        plan = plan_grid[(unit.section, unit.block)]
        if unit.kind == "table":
            assert isinstance(plan, PlannedTable)
            table_types[unit.unit_id] = plan.table_type
            unit_labels["balance_mention"][unit.unit_id] = plan.balance_label
        else:
            planned = plan[unit.sentence]
            assert planned.text == unit.text
            for task in TASKS:
                unit_labels[task][unit.unit_id] = planned.labels[task]

    truth = GroundTruth(
        document_id=doc_id,
        profile=profile.name,
        unit_labels=unit_labels,
        table_types=table_types,
        intended_kri={},
        intended_overall="",
    )
    intended_kri, intended_overall = derive_intended_ratings(doc, truth)
    truth = replace(truth, intended_kri=intended_kri, intended_overall=intended_overall)
    return doc, truth


_DEFAULT_POLICY: KriPolicy | None = None
_DEFAULT_TAXONOMY: AssetTaxonomy | None = None


def _defaults() -> tuple[KriPolicy, AssetTaxonomy]:
    global _DEFAULT_POLICY, _DEFAULT_TAXONOMY
    if _DEFAULT_POLICY is None:
        _DEFAULT_POLICY = load_policy()
        _DEFAULT_TAXONOMY = load_taxonomy()
    return _DEFAULT_POLICY, _DEFAULT_TAXONOMY


def derive_intended_ratings(doc: SoaDocument, truth: GroundTruth) -> tuple[dict[str, str], str]:
    """Run the shared rule cascades over the true labels under default policy."""
    policy, taxonomy = _defaults()
    labels = DocumentLabels(unit_labels=truth.unit_labels, table_types=truth.table_types)
    _, results, assessment = assess_from_labels(doc, labels, policy, taxonomy)
    return {r.kri_id: r.rating.value for r in results}, assessment.overall.value


def default_mix(noise: float = 0.0) -> list[tuple[CorpusProfile, float]]:
    def p(**kwargs) -> CorpusProfile:
        return CorpusProfile(noise=noise, **kwargs)

    return [
        (p(name="all_green"), 4.0),
        (p(name="weak_match", weak_pairs=1), 2.0),
        (p(name="unmatched_goal", unmatched_goals=1), 2.0),
        (p(name="no_goals", matched_pairs=0), 1.0),
        (p(name="single_asset", single_asset=True), 1.0),
        (p(name="no_asset_table", include_asset_table=False), 1.0),
        (p(name="misstatement", misstatement=True), 1.0),
        (p(name="short_horizon", projection_years=5), 1.0),
        (p(name="neg_cashflow_acknowledged", cashflow_net="negative"), 1.0),
        (p(name="neg_cashflow_silent", cashflow_net="negative", acknowledge_negative=False), 1.0),
        (p(name="no_cashflow_table", include_cashflow_table=False), 1.0),
        (p(name="low_balance", balance_low=150_000, balance_high=195_000), 1.0),
        (p(name="mid_balance", balance_low=205_000, balance_high=245_000), 1.0),
        (p(name="insurance_deferred", insurance="defer"), 1.0),
        (p(name="insurance_scoped", insurance="scope_out"), 1.0),
        (p(name="insurance_none", insurance="none"), 1.0),
        (p(name="no_position", include_position_sentences=False, include_projection_table=False), 1.0),
        # Several moderate deviations at once: lands the overall score in the
        # amber band without tripping the high-significance override.
        (p(name="mixed_deviation", single_asset=True, insurance="defer", cashflow_net="negative"), 1.0),
    ]


def generate_corpus(
    n: int,
    mix: list[tuple[CorpusProfile, float]] | None = None,
    seed: int = 0,
    noise: float = 0.0,
) -> list[tuple[SoaDocument, GroundTruth]]:
    """n documents drawn from the profile mix, fully determined by seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if mix is None:
        mix = default_mix(noise)
    profiles = [p for p, _ in mix]
    weights = [w for _, w in mix]
    if not profiles or any(w < 0 for w in weights) or sum(weights) <= 0:
        raise ValueError("degenerate profile mix")
    chooser = random.Random(f"corpus:{seed}")
    out = []
    for index in range(n):
        profile = chooser.choices(profiles, weights=weights)[0]
        doc_seed = seed * 1_000_003 + index
        out.append(generate_document(profile, doc_seed))
    return out


__all__ = [
    "CorpusProfile",
    "GroundTruth",
    "truth_to_dict",
    "truth_from_dict",
    "generate_document",
    "generate_corpus",
    "derive_intended_ratings",
    "default_mix",
    "DISTRACTORS",
    "FILLERS",
]
