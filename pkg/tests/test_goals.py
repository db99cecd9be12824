"""Goal-to-recommendation scoring, mapping, and the completeness rating."""

import random

import pytest
from hypothesis import given, strategies as st

from soaguard.errors import PolicyError
from soaguard.goals import (
    GoalLink,
    MatchThresholds,
    map_goals,
    rate_goal_advice,
    score_pair,
)
from soaguard.ratings import RiskRating

THRESHOLDS = MatchThresholds()

GOAL = "I would like to retire at age 62 with a comfortable annual income of $60,000."
MATCHED = "We recommend a plan to retire at age 62 with a comfortable annual income of $60,000."
UNRELATED = "The weather bureau forecasts rain for the long weekend."


def test_identical_texts_score_one():
    assert score_pair(GOAL, GOAL) == pytest.approx(1.0)


def test_matched_template_lands_in_the_green_band():
    assert score_pair(GOAL, MATCHED) >= THRESHOLDS.green_min


def test_unrelated_text_scores_below_amber():
    assert score_pair(GOAL, UNRELATED) < THRESHOLDS.amber_min


def test_score_is_deterministic_and_bounded():
    first = score_pair(GOAL, MATCHED)
    assert first == score_pair(GOAL, MATCHED)
    assert 0.0 <= first <= 1.0


def test_no_shared_numbers_still_partially_scores():
    weak = "We recommend a strategy to consolidate your superannuation arrangements."
    goal = "I want to simplify my superannuation arrangements."
    score = score_pair(goal, weak)
    assert THRESHOLDS.amber_min <= score < THRESHOLDS.green_min


def _oracle_map(goals, recommendations, thresholds):
    """Brute-force restatement: per goal, the argmax link above amber_min."""
    links = []
    for goal_id, goal_text in goals:
        scored = [
            (score_pair(goal_text, rec_text), rec_id) for rec_id, rec_text in recommendations
        ]
        if not scored:
            continue
        # Ties keep the first recommendation in document order, matching the
        # strict > comparison in map_goals.
        best_score = max(s for s, _ in scored)
        best_id = next(rid for s, rid in scored if s == best_score)
        if best_score >= thresholds.amber_min:
            links.append((goal_id, best_id, best_score))
    return links


PHRASES = [
    "retire at age 62 with an annual income of $58,000",
    "pay off the mortgage within 8 years",
    "travel overseas on a budget of $15,000",
    "leave a bequest of $40,000",
    "consolidate superannuation accounts",
]


def test_map_goals_matches_brute_force_oracle():
    rng = random.Random(5)
    for _ in range(200):
        goals = [
            (f"g{i}", f"I would like to {rng.choice(PHRASES)}.")
            for i in range(rng.randint(0, 3))
        ]
        recommendations = [
            (f"r{i}", f"We recommend a plan to {rng.choice(PHRASES)}.")
            for i in range(rng.randint(0, 3))
        ]
        advice_map = map_goals(goals, recommendations, THRESHOLDS)
        expected = _oracle_map(goals, recommendations, THRESHOLDS)
        got = [(l.goal_id, l.recommendation_id, l.confidence) for l in advice_map.links]
        assert got == expected


def test_map_keeps_all_candidates_above_amber():
    goals = [("g0", GOAL)]
    recommendations = [("r0", MATCHED), ("r1", UNRELATED)]
    advice_map = map_goals(goals, recommendations, THRESHOLDS)
    assert [l.recommendation_id for l in advice_map.links] == ["r0"]
    assert all(l.confidence >= THRESHOLDS.amber_min for l in advice_map.candidates)
    assert ("g0", "r1") not in {(l.goal_id, l.recommendation_id) for l in advice_map.candidates}


def test_unmatched_goal_has_no_link():
    advice_map = map_goals([("g0", GOAL)], [("r0", UNRELATED)], THRESHOLDS)
    assert advice_map.links == ()
    assert advice_map.goals == (("g0", GOAL),)


def test_rating_is_worst_band_across_goals():
    links = (
        GoalLink("g0", "r0", 0.9),
        GoalLink("g1", "r1", 0.5),
    )
    from soaguard.goals import GoalAdviceMap

    advice_map = GoalAdviceMap(
        goals=(("g0", "a"), ("g1", "b"), ("g2", "c")),
        recommendations=(("r0", "x"), ("r1", "y")),
        links=links,
        candidates=links,
    )
    result = rate_goal_advice(advice_map, THRESHOLDS)
    assert result.rating is RiskRating.RED  # g2 is unlinked
    bands = [e.values[-1] for e in result.evidence if e.values]
    assert bands == ["band=GREEN", "band=AMBER", "band=RED"]


def test_all_goals_green_when_every_link_clears_green_min():
    from soaguard.goals import GoalAdviceMap

    links = (GoalLink("g0", "r0", 0.8),)
    advice_map = GoalAdviceMap(
        goals=(("g0", "a"),), recommendations=(("r0", "x"),), links=links, candidates=links
    )
    assert rate_goal_advice(advice_map, THRESHOLDS).rating is RiskRating.GREEN


def test_zero_goals_rates_red():
    advice_map = map_goals([], [("r0", MATCHED)], THRESHOLDS)
    result = rate_goal_advice(advice_map, THRESHOLDS)
    assert result.rating is RiskRating.RED
    assert result.evidence[0].note == "no goals identified"


@given(
    green=st.floats(min_value=0.05, max_value=1.0, exclude_min=True),
    amber_frac=st.floats(min_value=0.1, max_value=0.9),
    confidence=st.floats(min_value=0.0, max_value=1.0),
)
def test_band_is_monotone_in_confidence(green, amber_frac, confidence):
    """Raising confidence never worsens the per-goal band."""
    from soaguard.goals import GoalAdviceMap

    thresholds = MatchThresholds(green_min=green, amber_min=green * amber_frac)

    def band(conf):
        links = (GoalLink("g0", "r0", conf),) if conf >= thresholds.amber_min else ()
        advice_map = GoalAdviceMap(
            goals=(("g0", "a"),), recommendations=(("r0", "x"),), links=links, candidates=links
        )
        return rate_goal_advice(advice_map, thresholds).rating

    lower = band(confidence)
    higher = band(min(1.0, confidence + 0.25))
    order = {RiskRating.GREEN: 0, RiskRating.AMBER: 1, RiskRating.RED: 2}
    assert order[higher] <= order[lower]


def test_threshold_validation():
    with pytest.raises(PolicyError):
        MatchThresholds(green_min=0.4, amber_min=0.5)
    with pytest.raises(PolicyError):
        MatchThresholds(green_min=1.2, amber_min=0.4)
    with pytest.raises(PolicyError):
        MatchThresholds(green_min=0.5, amber_min=0.0)
