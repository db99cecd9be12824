"""Shared path from a labeled document to a full assessment.

Both the production pipeline (predicted labels) and the corpus generator
(true labels) call this, so the two can only disagree through labeling error,
never through divergent rule logic.
"""

from __future__ import annotations

from .aggregate import DocumentAssessment, aggregate
from .goals import GoalAdviceMap, advice_map_from_labels, rate_goal_advice
from .kris import (
    DocumentLabels,
    KriPolicy,
    rate_cashflow_from_labels,
    rate_client_position_from_labels,
    rate_diversification_from_labels,
    rate_insurance_from_labels,
    rate_starting_balance_from_labels,
)
from .model import SoaDocument
from .ratings import KriResult
from .sentiment import SentimentLexicon
from .tables import AssetTaxonomy


def assess_from_labels(
    doc: SoaDocument,
    labels: DocumentLabels,
    policy: KriPolicy,
    taxonomy: AssetTaxonomy,
    lexicon: SentimentLexicon | None = None,
) -> tuple[GoalAdviceMap, list[KriResult], DocumentAssessment]:
    advice_map = advice_map_from_labels(doc, labels.unit_labels["goal_rec"], policy.thresholds)
    results = [
        rate_goal_advice(advice_map, policy.thresholds),
        rate_diversification_from_labels(doc, labels, taxonomy),
        rate_client_position_from_labels(doc, labels, policy, lexicon=lexicon),
        rate_cashflow_from_labels(doc, labels, lexicon=lexicon),
        rate_starting_balance_from_labels(doc, labels, policy),
        rate_insurance_from_labels(doc, labels),
    ]
    assessment = aggregate(doc.id, results, policy)
    return advice_map, results, assessment


__all__ = ["assess_from_labels"]
