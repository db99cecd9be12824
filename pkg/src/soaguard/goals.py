"""Goal-to-recommendation mapping and the completeness rating (KRI 1).

The pair scorer is deliberately transparent: a weighted blend of tf-idf
cosine over the pair, shared financial-topic categories, and shared numbers.
Each component is explainable to an auditor from the evidence alone, and the
whole scorer sits behind score_pair so a stronger matcher can replace it.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .classifier import TrainedTextModel, predict_label
from .errors import ModelTaskError, PolicyError
from .model import SoaDocument, enumerate_units
from .ratings import EvidenceItem, KriResult, RiskRating
from .tokenization import tokenize

COSINE_WEIGHT = 0.5
TOPIC_WEIGHT = 0.3
ENTITY_WEIGHT = 0.2


@dataclass(frozen=True)
class MatchThresholds:
    green_min: float = 0.75
    amber_min: float = 0.40

    def __post_init__(self):
        if not (0 < self.amber_min < self.green_min <= 1):
            raise PolicyError(
                f"need 0 < amber_min < green_min <= 1, got {self.amber_min}, {self.green_min}"
            )


@dataclass(frozen=True)
class GoalLink:
    goal_id: str
    recommendation_id: str
    confidence: float


@dataclass(frozen=True)
class GoalAdviceMap:
    goals: tuple[tuple[str, str], ...]  # (unit_id, text)
    recommendations: tuple[tuple[str, str], ...]
    links: tuple[GoalLink, ...]  # best link per goal, confidence >= amber_min
    candidates: tuple[GoalLink, ...]  # every link >= amber_min, kept as evidence


_TOPICS: dict[str, frozenset[str]] | None = None


def _topics() -> dict[str, frozenset[str]]:
    global _TOPICS
    if _TOPICS is None:
        raw = resources.files("soaguard.data").joinpath("topic_lexicon.json").read_text("utf-8")
        _TOPICS = {
            topic: frozenset(" ".join(tokenize(term).tokens) for term in terms)
            for topic, terms in json.loads(raw).items()
        }
    return _TOPICS


@lru_cache(maxsize=8192)
def _text_profile(text: str) -> tuple[tuple[tuple[str, int], ...], frozenset[str], frozenset[str]]:
    """(token counts, topics, numeric entities) for one text."""
    tokens = tokenize(text).tokens
    grams = set(tokens) | {f"{a} {b}" for a, b in zip(tokens, tokens[1:])}
    topics = frozenset(topic for topic, terms in _topics().items() if grams & terms)
    entities = frozenset(t for t in tokens if t[0].isdigit())
    counts = tuple(sorted(Counter(tokens).items()))
    return counts, topics, entities


def _jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    union = a | b
    return len(a & b) / len(union)


def score_pair(goal: str, recommendation: str) -> float:
    """Confidence in [0, 1] that the recommendation addresses the goal.

    0.5 * tf-idf cosine (idf smoothed over just the pair, so identical texts
    score exactly 1) + 0.3 * topic-category overlap + 0.2 * shared-number
    overlap. Deterministic and symmetric in fact, though symmetry is not
    part of the contract.
    """
    g_counts, g_topics, g_entities = _text_profile(goal)
    r_counts, r_topics, r_entities = _text_profile(recommendation)
    g = dict(g_counts)
    r = dict(r_counts)

    dot = g_norm = r_norm = 0.0
    for term, count in g.items():
        idf = 1.0 + math.log(2.0 / (1.0 + (2 if term in r else 1)))
        w = count * idf
        g_norm += w * w
        if term in r:
            dot += w * (r[term] * idf)
    for term, count in r.items():
        idf = 1.0 + math.log(2.0 / (1.0 + (2 if term in g else 1)))
        w = count * idf
        r_norm += w * w
    cosine = dot / math.sqrt(g_norm * r_norm) if g_norm and r_norm else 0.0

    score = (
        COSINE_WEIGHT * cosine
        + TOPIC_WEIGHT * _jaccard(g_topics, r_topics)
        + ENTITY_WEIGHT * _jaccard(g_entities, r_entities)
    )
    return min(1.0, max(0.0, score))


def label_goal_rec(model: TrainedTextModel, doc: SoaDocument) -> dict[str, str]:
    """Label every sentence unit as goal / recommendation / neither."""
    if model.task != "goal_rec":
        raise ModelTaskError(f"expected a goal_rec model, got '{model.task}'")
    return {
        unit.unit_id: predict_label(model, unit.text)
        for unit in enumerate_units(doc)
        if unit.kind == "sentence"
    }


def map_goals(
    goals: list[tuple[str, str]],
    recommendations: list[tuple[str, str]],
    thresholds: MatchThresholds,
) -> GoalAdviceMap:
    """Link each goal to its argmax-confidence recommendation above amber_min."""
    links = []
    candidates = []
    for goal_id, goal_text in goals:
        best: GoalLink | None = None
        for rec_id, rec_text in recommendations:
            confidence = score_pair(goal_text, rec_text)
            if confidence >= thresholds.amber_min:
                candidates.append(GoalLink(goal_id, rec_id, confidence))
            if best is None or confidence > best.confidence:
                best = GoalLink(goal_id, rec_id, confidence)
        if best is not None and best.confidence >= thresholds.amber_min:
            links.append(best)
    return GoalAdviceMap(
        goals=tuple(goals),
        recommendations=tuple(recommendations),
        links=tuple(links),
        candidates=tuple(candidates),
    )


def advice_map_from_labels(
    doc: SoaDocument, goal_rec_labels: dict[str, str], thresholds: MatchThresholds
) -> GoalAdviceMap:
    """Build the map from per-sentence goal_rec labels, in document order."""
    goals = []
    recommendations = []
    for unit in enumerate_units(doc):
        if unit.kind != "sentence":
            continue
        label = goal_rec_labels.get(unit.unit_id)
        if label == "goal":
            goals.append((unit.unit_id, unit.text))
        elif label == "recommendation":
            recommendations.append((unit.unit_id, unit.text))
    return map_goals(goals, recommendations, thresholds)


def rate_goal_advice(advice_map: GoalAdviceMap, thresholds: MatchThresholds) -> KriResult:
    """Worst per-goal band: unlinked RED, below green_min AMBER, else GREEN."""
    if not advice_map.goals:
        return KriResult(
            kri_id="goal_advice",
            rating=RiskRating.RED,
            evidence=(EvidenceItem(unit_id="", note="no goals identified"),),
        )
    best_by_goal = {link.goal_id: link for link in advice_map.links}
    evidence = []
    ratings = []
    for goal_id, _ in advice_map.goals:
        link = best_by_goal.get(goal_id)
        if link is None:
            rating = RiskRating.RED
            evidence.append(
                EvidenceItem(
                    unit_id=goal_id,
                    note="goal has no mapped recommendation",
                    values=("band=RED",),
                )
            )
        else:
            rating = RiskRating.GREEN if link.confidence >= thresholds.green_min else RiskRating.AMBER
            evidence.append(
                EvidenceItem(
                    unit_id=goal_id,
                    note=f"goal mapped to {link.recommendation_id}",
                    values=(
                        f"confidence={link.confidence:.6f}",
                        f"recommendation={link.recommendation_id}",
                        f"band={rating.value}",
                    ),
                )
            )
        ratings.append(rating)
    return KriResult(
        kri_id="goal_advice",
        rating=RiskRating.worst(ratings),
        evidence=tuple(evidence),
    )


__all__ = [
    "MatchThresholds",
    "GoalLink",
    "GoalAdviceMap",
    "score_pair",
    "label_goal_rec",
    "map_goals",
    "advice_map_from_labels",
    "rate_goal_advice",
]
