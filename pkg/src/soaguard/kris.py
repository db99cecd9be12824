"""KRI 2-6 evaluators and the risk policy.

Every evaluator is split in two layers. The rule cascade operates on a
DocumentLabels bundle (per-unit task labels and table types) so that it can
run against classifier output in production and against ground-truth labels
when the synthetic corpus derives its intended ratings - same cascade code,
no second implementation to drift. The spec-shaped wrappers (model arguments)
do one labeling pass and delegate.

Evidence items carry the extracted facts each rule consumed as "key=value"
strings; a rating must be re-derivable from its own evidence.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from pathlib import Path

from .classifier import TrainedTextModel, predict_label
from .errors import ModelTaskError, PolicyError
from .goals import MatchThresholds
from .model import DataUnit, SoaDocument, enumerate_units, flatten_table_text
from .quantities import balance_statistics, extract_money
from .ratings import KRI_IDS, EvidenceItem, KriResult, RiskRating
from .sentiment import SentimentLexicon, score_sentiment
from .tables import (
    AssetTaxonomy,
    TrainedTableModel,
    cashflow_outcome,
    check_diversification,
    classify_table,
    projection_horizon,
)

INSURANCE_KINDS = ("recommend", "defer", "scope_out")

# Table 1 names the product lines reviewers expect to see discussed.
INSURANCE_TERMS = {
    "life": ("life",),
    "trauma": ("trauma",),
    "tpd": ("tpd",),
    "income_protection": ("income protection",),
}


@dataclass(frozen=True)
class KriPolicy:
    balance_red_below: Decimal = Decimal(200000)
    balance_amber_below: Decimal = Decimal(250000)
    horizon_years_min: int = 10
    thresholds: MatchThresholds = field(default_factory=MatchThresholds)
    weights: tuple[tuple[str, float], ...] = tuple((k, 1.0) for k in KRI_IDS)
    high_significance: frozenset[str] = frozenset({"goal_advice", "starting_balance"})
    amber_cutoff: float = 0.25
    red_cutoff: float = 0.60

    def __post_init__(self):
        if self.balance_red_below >= self.balance_amber_below:
            raise PolicyError("balance_red_below must be below balance_amber_below")
        weight_map = dict(self.weights)
        if set(weight_map) != set(KRI_IDS):
            raise PolicyError(f"weights must cover exactly {sorted(KRI_IDS)}")
        if any(w < 0 for w in weight_map.values()):
            raise PolicyError("weights must be nonnegative")
        if all(w == 0 for w in weight_map.values()):
            raise PolicyError("weights must not all be zero")
        if not self.high_significance <= set(KRI_IDS):
            raise PolicyError("high_significance must be a subset of the KRI ids")
        if not (0 < self.amber_cutoff <= self.red_cutoff <= 1):
            raise PolicyError("need 0 < amber_cutoff <= red_cutoff <= 1")

    def weight(self, kri_id: str) -> float:
        return dict(self.weights)[kri_id]

    def to_dict(self) -> dict:
        return {
            "balance_red_below": str(self.balance_red_below),
            "balance_amber_below": str(self.balance_amber_below),
            "horizon_years_min": self.horizon_years_min,
            "green_min": self.thresholds.green_min,
            "amber_min": self.thresholds.amber_min,
            "weights": dict(self.weights),
            "high_significance": sorted(self.high_significance),
            "amber_cutoff": self.amber_cutoff,
            "red_cutoff": self.red_cutoff,
        }

    @property
    def policy_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def policy_from_dict(data: dict) -> KriPolicy:
    defaults = KriPolicy()
    weights = data.get("weights")
    return KriPolicy(
        balance_red_below=Decimal(str(data.get("balance_red_below", defaults.balance_red_below))),
        balance_amber_below=Decimal(
            str(data.get("balance_amber_below", defaults.balance_amber_below))
        ),
        horizon_years_min=int(data.get("horizon_years_min", defaults.horizon_years_min)),
        thresholds=MatchThresholds(
            green_min=float(data.get("green_min", 0.75)),
            amber_min=float(data.get("amber_min", 0.40)),
        ),
        weights=tuple(weights.items()) if weights else defaults.weights,
        high_significance=frozenset(data.get("high_significance", defaults.high_significance)),
        amber_cutoff=float(data.get("amber_cutoff", defaults.amber_cutoff)),
        red_cutoff=float(data.get("red_cutoff", defaults.red_cutoff)),
    )


def load_policy(path: str | Path | None = None) -> KriPolicy:
    if path is None:
        raw = resources.files("soaguard.data").joinpath("default_policy.json").read_text("utf-8")
    else:
        raw = Path(path).read_text(encoding="utf-8")
    return policy_from_dict(json.loads(raw))


# ---------------------------------------------------------------------------
# Labeling


@dataclass(frozen=True)
class DocumentLabels:
    """Per-unit labels for every classifier task plus table types.

    unit_labels: task -> unit_id -> label. balance_mention covers sentence
    and table units (tables judged on caption + header text); the other
    sentence tasks cover sentence units only.
    """

    unit_labels: dict[str, dict[str, str]]
    table_types: dict[str, str]


def label_sentences(doc: SoaDocument, model: TrainedTextModel, task: str) -> dict[str, str]:
    if model.task != task:
        raise ModelTaskError(f"expected a {task} model, got '{model.task}'")
    out = {}
    for unit in enumerate_units(doc):
        if unit.kind == "sentence":
            out[unit.unit_id] = predict_label(model, unit.text)
        elif task == "balance_mention":
            out[unit.unit_id] = predict_label(model, flatten_table_text(unit.table))
    return out


def label_tables(doc: SoaDocument, model: TrainedTableModel) -> dict[str, str]:
    return {
        unit.unit_id: classify_table(model, unit.table)[0]
        for unit in enumerate_units(doc)
        if unit.kind == "table"
    }


def _units_by_id(doc: SoaDocument) -> list[DataUnit]:
    return list(enumerate_units(doc))


# ---------------------------------------------------------------------------
# KRI 2: diversification


def rate_diversification_from_labels(
    doc: SoaDocument, labels: DocumentLabels, taxonomy: AssetTaxonomy
) -> KriResult:
    """No asset table AMBER; diversified GREEN; dominated allocation AMBER;
    fewer than two classes RED. Worst rating across asset tables wins."""
    evidence = []
    ratings = []
    for unit in _units_by_id(doc):
        if unit.kind != "table" or labels.table_types.get(unit.unit_id) != "asset_class":
            continue
        finding = check_diversification(unit.table, taxonomy)
        if finding.nonzero_classes >= 2:
            if finding.max_share is not None and finding.max_share > 0.9:
                rating = RiskRating.AMBER
                note = "allocation dominated by one class"
            else:
                rating = RiskRating.GREEN
                note = "diversified allocation"
        else:
            rating = RiskRating.RED
            note = "allocation is not diversified"
        ratings.append(rating)
        max_share = "absent" if finding.max_share is None else f"{finding.max_share:.4f}"
        evidence.append(
            EvidenceItem(
                unit_id=unit.unit_id,
                note=note,
                values=(
                    f"nonzero_classes={finding.nonzero_classes}",
                    f"max_share={max_share}",
                    f"classes={'+'.join(sorted(finding.classes_found))}",
                ),
            )
        )
    if not ratings:
        return KriResult(
            kri_id="diversification",
            rating=RiskRating.AMBER,
            evidence=(EvidenceItem(unit_id="", note="no asset class table found"),),
        )
    return KriResult(
        kri_id="diversification", rating=RiskRating.worst(ratings), evidence=tuple(evidence)
    )


def rate_diversification(
    doc: SoaDocument, table_model: TrainedTableModel, taxonomy: AssetTaxonomy
) -> KriResult:
    labels = DocumentLabels(unit_labels={}, table_types=label_tables(doc, table_model))
    return rate_diversification_from_labels(doc, labels, taxonomy)


# ---------------------------------------------------------------------------
# KRI 3: client position


def rate_client_position_from_labels(
    doc: SoaDocument,
    labels: DocumentLabels,
    policy: KriPolicy,
    lexicon: SentimentLexicon | None = None,
) -> KriResult:
    """Ordered cascade over position sentences and projection tables.

    (a) neither position sentences nor a projections table -> RED;
    (b) upbeat sentence quoting a negative amount -> RED (misstatement);
    (c) downbeat sentence disclosing its negative amount -> GREEN;
    (d) projections present but horizon under the policy minimum -> AMBER;
    (e) otherwise GREEN.
    """
    position_labels = labels.unit_labels.get("position", {})
    sentences = []  # (unit_id, polarity, negatives, positives)
    horizons = []  # (unit_id, years)
    evidence = []
    for unit in _units_by_id(doc):
        if unit.kind == "sentence" and position_labels.get(unit.unit_id) == "position":
            score = score_sentiment(unit.text, lexicon)
            amounts = extract_money(unit.text)
            negatives = sum(1 for a in amounts if a.sign == "negative")
            positives = len(amounts) - negatives
            sentences.append((unit.unit_id, score.polarity, negatives, positives))
            evidence.append(
                EvidenceItem(
                    unit_id=unit.unit_id,
                    note="client position statement",
                    values=(
                        f"polarity={score.polarity:.4f}",
                        f"negative_amounts={negatives}",
                        f"positive_amounts={positives}",
                    ),
                )
            )
        elif unit.kind == "table" and labels.table_types.get(unit.unit_id) == "projections":
            years = projection_horizon(unit.table)
            horizons.append((unit.unit_id, years))
            evidence.append(
                EvidenceItem(
                    unit_id=unit.unit_id,
                    note="capital projections table",
                    values=(f"horizon_years={years}",),
                )
            )

    if not sentences and not horizons:
        return KriResult(
            kri_id="client_position",
            rating=RiskRating.RED,
            evidence=(EvidenceItem(unit_id="", note="no discussion of client position found"),),
        )
    if any(polarity > 0 and negatives >= 1 for _, polarity, negatives, _ in sentences):
        rating = RiskRating.RED
    elif any(polarity < 0 and negatives >= 1 for _, polarity, negatives, _ in sentences):
        rating = RiskRating.GREEN
    elif horizons and max(years for _, years in horizons) < policy.horizon_years_min:
        rating = RiskRating.AMBER
    else:
        rating = RiskRating.GREEN
    return KriResult(kri_id="client_position", rating=rating, evidence=tuple(evidence))


def rate_client_position(
    doc: SoaDocument,
    position_model: TrainedTextModel,
    table_model: TrainedTableModel,
    policy: KriPolicy,
    lexicon: SentimentLexicon | None = None,
) -> KriResult:
    labels = DocumentLabels(
        unit_labels={"position": label_sentences(doc, position_model, "position")},
        table_types=label_tables(doc, table_model),
    )
    return rate_client_position_from_labels(doc, labels, policy, lexicon)


# ---------------------------------------------------------------------------
# KRI 4: cashflow


def rate_cashflow_from_labels(
    doc: SoaDocument,
    labels: DocumentLabels,
    lexicon: SentimentLexicon | None = None,
) -> KriResult:
    """Missing analysis RED; net positive GREEN; net negative AMBER when some
    position sentence acknowledges the downside (negative polarity), else RED;
    unreadable net AMBER. Worst across cashflow tables."""
    position_labels = labels.unit_labels.get("position", {})
    acknowledgments = []
    for unit in _units_by_id(doc):
        if unit.kind == "sentence" and position_labels.get(unit.unit_id) == "position":
            score = score_sentiment(unit.text, lexicon)
            if score.polarity < 0:
                acknowledgments.append((unit.unit_id, score.polarity))
    acknowledged = bool(acknowledgments)

    evidence = []
    ratings = []
    for unit in _units_by_id(doc):
        if unit.kind != "table" or labels.table_types.get(unit.unit_id) != "cashflow":
            continue
        net_sign, net_value = cashflow_outcome(unit.table)
        if net_sign == "positive":
            rating = RiskRating.GREEN
            note = "post-advice cash flow is positive"
        elif net_sign == "negative":
            rating = RiskRating.AMBER if acknowledged else RiskRating.RED
            note = (
                "negative cash flow, downside acknowledged"
                if acknowledged
                else "negative cash flow with no acknowledgment"
            )
        else:
            rating = RiskRating.AMBER
            note = "cash flow outcome could not be read"
        ratings.append(rating)
        evidence.append(
            EvidenceItem(
                unit_id=unit.unit_id,
                note=note,
                values=(
                    f"net_sign={net_sign}",
                    f"net_value={'absent' if net_value is None else net_value}",
                    f"acknowledged={str(acknowledged).lower()}",
                ),
            )
        )
    if not ratings:
        return KriResult(
            kri_id="cashflow",
            rating=RiskRating.RED,
            evidence=(EvidenceItem(unit_id="", note="no cash flow analysis found"),),
        )
    for unit_id, polarity in acknowledgments:
        evidence.append(
            EvidenceItem(
                unit_id=unit_id,
                note="downside acknowledged here",
                values=(f"polarity={polarity:.4f}",),
            )
        )
    return KriResult(kri_id="cashflow", rating=RiskRating.worst(ratings), evidence=tuple(evidence))


def rate_cashflow(
    doc: SoaDocument,
    position_model: TrainedTextModel,
    table_model: TrainedTableModel,
    lexicon: SentimentLexicon | None = None,
) -> KriResult:
    labels = DocumentLabels(
        unit_labels={"position": label_sentences(doc, position_model, "position")},
        table_types=label_tables(doc, table_model),
    )
    return rate_cashflow_from_labels(doc, labels, lexicon)


# ---------------------------------------------------------------------------
# KRI 5: starting balance


def rate_starting_balance_from_labels(
    doc: SoaDocument, labels: DocumentLabels, policy: KriPolicy
) -> KriResult:
    """Aggregate the median over every balance-mention unit's amounts."""
    balance_labels = labels.unit_labels.get("balance_mention", {})
    evidence = []
    all_amounts = []
    for unit in _units_by_id(doc):
        if balance_labels.get(unit.unit_id) != "balance":
            continue
        if unit.kind == "sentence":
            amounts = extract_money(unit.text)
        else:
            texts = [flatten_table_text(unit.table)] + [
                cell for row in unit.table.rows for cell in row
            ]
            amounts = [a for t in texts for a in extract_money(t)]
        all_amounts.extend(amounts)
        stats = balance_statistics(amounts)
        if stats is None:
            evidence.append(
                EvidenceItem(unit_id=unit.unit_id, note="balance mention without amounts")
            )
        else:
            evidence.append(
                EvidenceItem(
                    unit_id=unit.unit_id,
                    note="balance amounts found",
                    values=(
                        f"count={stats.count}",
                        f"median={stats.median}",
                        f"mean={stats.mean}",
                        f"min={stats.min}",
                        f"max={stats.max}",
                    ),
                )
            )

    aggregate_stats = balance_statistics(all_amounts)
    if aggregate_stats is None:
        return KriResult(
            kri_id="starting_balance",
            rating=RiskRating.RED,
            evidence=tuple(evidence)
            or (EvidenceItem(unit_id="", note="no starting balance found"),),
        )
    if aggregate_stats.median < policy.balance_red_below:
        rating = RiskRating.RED
    elif aggregate_stats.median < policy.balance_amber_below:
        rating = RiskRating.AMBER
    else:
        rating = RiskRating.GREEN
    return KriResult(
        kri_id="starting_balance",
        rating=rating,
        evidence=tuple(evidence),
        statistics=aggregate_stats,
    )


def rate_starting_balance(
    doc: SoaDocument, balance_model: TrainedTextModel, policy: KriPolicy
) -> KriResult:
    labels = DocumentLabels(
        unit_labels={"balance_mention": label_sentences(doc, balance_model, "balance_mention")},
        table_types={},
    )
    return rate_starting_balance_from_labels(doc, labels, policy)


# ---------------------------------------------------------------------------
# KRI 6: insurance


def rate_insurance_from_labels(doc: SoaDocument, labels: DocumentLabels) -> KriResult:
    """Category presence with precedence recommend > defer > scope_out > none."""
    insurance_labels = labels.unit_labels.get("insurance", {})
    evidence = []
    present = set()
    for unit in _units_by_id(doc):
        if unit.kind != "sentence":
            continue
        label = insurance_labels.get(unit.unit_id)
        if label not in INSURANCE_KINDS:
            continue
        present.add(label)
        text_lower = unit.text.lower()
        terms = sorted(
            name
            for name, needles in INSURANCE_TERMS.items()
            if any(n in text_lower for n in needles)
        )
        evidence.append(
            EvidenceItem(
                unit_id=unit.unit_id,
                note=f"insurance consideration: {label}",
                values=(f"label={label}", f"terms={'+'.join(terms)}"),
            )
        )
    if "recommend" in present:
        rating = RiskRating.GREEN
    elif "defer" in present:
        rating = RiskRating.AMBER
    elif "scope_out" in present:
        rating = RiskRating.AMBER
    else:
        return KriResult(
            kri_id="insurance",
            rating=RiskRating.RED,
            evidence=(EvidenceItem(unit_id="", note="no insurance consideration found"),),
        )
    return KriResult(kri_id="insurance", rating=rating, evidence=tuple(evidence))


def rate_insurance(doc: SoaDocument, insurance_model: TrainedTextModel) -> KriResult:
    labels = DocumentLabels(
        unit_labels={"insurance": label_sentences(doc, insurance_model, "insurance")},
        table_types={},
    )
    return rate_insurance_from_labels(doc, labels)


__all__ = [
    "KriPolicy",
    "policy_from_dict",
    "load_policy",
    "DocumentLabels",
    "label_sentences",
    "label_tables",
    "rate_diversification",
    "rate_diversification_from_labels",
    "rate_client_position",
    "rate_client_position_from_labels",
    "rate_cashflow",
    "rate_cashflow_from_labels",
    "rate_starting_balance",
    "rate_starting_balance_from_labels",
    "rate_insurance",
    "rate_insurance_from_labels",
    "INSURANCE_KINDS",
    "INSURANCE_TERMS",
]
