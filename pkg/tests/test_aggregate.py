"""Weighted aggregation, the high-significance override, and triage ranking."""

import random

import pytest
from hypothesis import given, strategies as st

from soaguard.aggregate import (
    RATING_VALUES,
    aggregate,
    assessment_from_dict,
    assessment_to_dict,
    rank_documents,
)
from soaguard.errors import AggregationError
from soaguard.kris import KriPolicy
from soaguard.ratings import KRI_IDS, KriResult, RiskRating

POLICY = KriPolicy()


def _results(**ratings):
    """Six KriResults, GREEN unless overridden by keyword."""
    return [
        KriResult(kri_id=k, rating=RiskRating(ratings.get(k, "GREEN")), evidence=())
        for k in KRI_IDS
    ]


def test_all_green_scores_zero():
    assessment = aggregate("d", _results(), POLICY)
    assert assessment.score == 0.0
    assert assessment.overall is RiskRating.GREEN
    assert assessment.red_count == 0


def test_score_is_weighted_mean_of_rating_values():
    # Equal weights: one AMBER and one RED among six gives (0.5 + 1) / 6.
    assessment = aggregate("d", _results(cashflow="AMBER", insurance="RED"), POLICY)
    assert assessment.score == pytest.approx(1.5 / 6)
    assert assessment.overall is RiskRating.AMBER


def test_single_low_significance_red_stays_green_overall():
    assessment = aggregate("d", _results(insurance="RED"), POLICY)
    assert assessment.score == pytest.approx(1 / 6)
    assert assessment.overall is RiskRating.GREEN


def test_high_significance_red_forces_overall_red():
    for kri in POLICY.high_significance:
        assessment = aggregate("d", _results(**{kri: "RED"}), POLICY)
        assert assessment.overall is RiskRating.RED, kri


def test_cutoffs_are_half_open():
    policy = KriPolicy(amber_cutoff=0.25, red_cutoff=0.5)
    # Score exactly 0.25: three AMBERs out of six.
    at_amber = aggregate(
        "d", _results(cashflow="AMBER", insurance="AMBER", diversification="AMBER"), policy
    )
    assert at_amber.score == pytest.approx(0.25)
    assert at_amber.overall is RiskRating.AMBER
    # Score exactly 0.5: six AMBERs.
    at_red = aggregate("d", _results(**{k: "AMBER" for k in KRI_IDS}), policy)
    assert at_red.score == pytest.approx(0.5)
    assert at_red.overall is RiskRating.RED


def test_weights_redistribute_the_score():
    weights = tuple((k, 3.0 if k == "insurance" else 1.0) for k in KRI_IDS)
    policy = KriPolicy(weights=weights)
    assessment = aggregate("d", _results(insurance="RED"), policy)
    assert assessment.score == pytest.approx(3 / 8)
    assert assessment.overall is RiskRating.AMBER


def test_scaling_all_weights_changes_nothing():
    scaled = KriPolicy(weights=tuple((k, 7.0) for k in KRI_IDS))
    a = aggregate("d", _results(cashflow="RED", insurance="AMBER"), POLICY)
    b = aggregate("d", _results(cashflow="RED", insurance="AMBER"), scaled)
    assert a.score == pytest.approx(b.score)
    assert a.overall is b.overall


def test_duplicate_missing_and_unknown_kris_rejected():
    results = _results()
    with pytest.raises(AggregationError, match="duplicate"):
        aggregate("d", results + [results[0]], POLICY)
    with pytest.raises(AggregationError, match="missing"):
        aggregate("d", results[:5], POLICY)
    bad = results[:5] + [KriResult(kri_id="styling", rating=RiskRating.GREEN, evidence=())]
    with pytest.raises(AggregationError, match="unknown"):
        aggregate("d", bad, POLICY)


def test_results_are_reordered_into_canonical_order():
    shuffled = _results(goal_advice="AMBER")
    random.Random(0).shuffle(shuffled)
    assessment = aggregate("d", shuffled, POLICY)
    assert tuple(r.kri_id for r in assessment.kri_results) == KRI_IDS


ratings_strategy = st.lists(
    st.sampled_from([RiskRating.GREEN, RiskRating.AMBER, RiskRating.RED]),
    min_size=6,
    max_size=6,
)


def _random_policy(rng):
    amber = rng.uniform(0.05, 0.6)
    return KriPolicy(
        weights=tuple((k, rng.uniform(0.1, 5.0)) for k in KRI_IDS),
        high_significance=frozenset(rng.sample(KRI_IDS, rng.randint(0, 3))),
        amber_cutoff=amber,
        red_cutoff=rng.uniform(amber, 1.0),
    )


def test_override_and_monotonicity_fuzz():
    """High-significance RED always dominates; worsening one KRI never
    improves the overall rating. Deterministic 2,000-case sweep."""
    rng = random.Random(99)
    options = [RiskRating.GREEN, RiskRating.AMBER, RiskRating.RED]
    for _ in range(2000):
        policy = _random_policy(rng)
        ratings = {k: rng.choice(options) for k in KRI_IDS}
        assessment = aggregate("d", _results(**{k: r.value for k, r in ratings.items()}), policy)
        if any(ratings[k] is RiskRating.RED for k in policy.high_significance):
            assert assessment.overall is RiskRating.RED
        # Worsen one KRI a step and compare.
        victim = rng.choice(KRI_IDS)
        if ratings[victim] is not RiskRating.RED:
            worse = dict(ratings)
            worse[victim] = options[options.index(ratings[victim]) + 1]
            worse_assessment = aggregate(
                "d", _results(**{k: r.value for k, r in worse.items()}), policy
            )
            assert worse_assessment.overall.severity >= assessment.overall.severity
            assert worse_assessment.score >= assessment.score - 1e-12


@given(ratings_strategy)
def test_score_matches_hand_arithmetic(ratings):
    results = [
        KriResult(kri_id=k, rating=r, evidence=()) for k, r in zip(KRI_IDS, ratings)
    ]
    assessment = aggregate("d", results, POLICY)
    expected = sum(RATING_VALUES[r] for r in ratings) / 6
    assert assessment.score == pytest.approx(expected)


def test_rank_orders_by_severity_then_score_then_reds_then_id():
    def make(doc_id, **ratings):
        return aggregate(doc_id, _results(**ratings), POLICY)

    worst = make("z-high", goal_advice="RED")  # overall RED via override
    amber = make("m-amber", cashflow="AMBER", insurance="AMBER", diversification="AMBER")
    green_one_red = make("a-green", insurance="RED")
    clean = make("b-clean")
    ranked = rank_documents([clean, amber, green_one_red, worst])
    assert [a.document_id for a in ranked] == ["z-high", "m-amber", "a-green", "b-clean"]


def test_rank_ties_break_by_document_id():
    a = aggregate("beta", _results(), POLICY)
    b = aggregate("alpha", _results(), POLICY)
    assert [x.document_id for x in rank_documents([a, b])] == ["alpha", "beta"]


def test_rank_matches_sort_oracle_on_random_batches():
    rng = random.Random(31)
    options = ["GREEN", "AMBER", "RED"]
    batch = [
        aggregate(f"doc-{i:03d}", _results(**{k: rng.choice(options) for k in KRI_IDS}), POLICY)
        for i in range(40)
    ]
    ranked = rank_documents(batch)
    expected = sorted(
        batch, key=lambda a: (-a.overall.severity, -a.score, -a.red_count, a.document_id)
    )
    assert [a.document_id for a in ranked] == [a.document_id for a in expected]


def test_assessment_round_trips_through_dict():
    assessment = aggregate("d", _results(cashflow="RED"), POLICY)
    assert assessment_from_dict(assessment_to_dict(assessment)) == assessment
