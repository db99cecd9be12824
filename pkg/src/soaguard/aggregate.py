"""Document-level aggregation of the six KRI results and corpus ranking."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AggregationError
from .kris import KriPolicy
from .ratings import KRI_IDS, KriResult, RiskRating, kri_result_from_dict, kri_result_to_dict

RATING_VALUES = {RiskRating.GREEN: 0.0, RiskRating.AMBER: 0.5, RiskRating.RED: 1.0}


@dataclass(frozen=True)
class DocumentAssessment:
    document_id: str
    kri_results: tuple[KriResult, ...]  # exactly six, in KRI_IDS order
    overall: RiskRating
    score: float  # weighted rating value in [0, 1]
    policy_hash: str

    def result(self, kri_id: str) -> KriResult:
        for r in self.kri_results:
            if r.kri_id == kri_id:
                return r
        raise KeyError(kri_id)

    @property
    def red_count(self) -> int:
        return sum(1 for r in self.kri_results if r.rating is RiskRating.RED)


def aggregate(document_id: str, results: list[KriResult], policy: KriPolicy) -> DocumentAssessment:
    """Weighted score with the high-significance override.

    Any high-significance KRI rated RED forces the document RED no matter
    what the other five say. Otherwise the score (GREEN 0, AMBER 0.5, RED 1,
    weighted) is cut at policy.amber_cutoff and policy.red_cutoff.
    """
    by_id = {}
    for result in results:
        if result.kri_id in by_id:
            raise AggregationError(f"duplicate KRI result '{result.kri_id}'")
        if result.kri_id not in KRI_IDS:
            raise AggregationError(f"unknown KRI id '{result.kri_id}'")
        by_id[result.kri_id] = result
    missing = [k for k in KRI_IDS if k not in by_id]
    if missing:
        raise AggregationError(f"missing KRI results: {missing}")

    ordered = tuple(by_id[k] for k in KRI_IDS)
    total_weight = sum(policy.weight(k) for k in KRI_IDS)
    score = sum(policy.weight(r.kri_id) * RATING_VALUES[r.rating] for r in ordered) / total_weight

    if any(r.rating is RiskRating.RED and r.kri_id in policy.high_significance for r in ordered):
        overall = RiskRating.RED
    elif score < policy.amber_cutoff:
        overall = RiskRating.GREEN
    elif score < policy.red_cutoff:
        overall = RiskRating.AMBER
    else:
        overall = RiskRating.RED
    return DocumentAssessment(
        document_id=document_id,
        kri_results=ordered,
        overall=overall,
        score=score,
        policy_hash=policy.policy_hash,
    )


def rank_documents(assessments: list[DocumentAssessment]) -> list[DocumentAssessment]:
    """Triage order: worst overall first, then score, RED count, and id."""
    return sorted(
        assessments,
        key=lambda a: (-a.overall.severity, -a.score, -a.red_count, a.document_id),
    )


def assessment_to_dict(assessment: DocumentAssessment) -> dict:
    return {
        "document_id": assessment.document_id,
        "overall": assessment.overall.value,
        "score": assessment.score,
        "policy_hash": assessment.policy_hash,
        "kri_results": [kri_result_to_dict(r) for r in assessment.kri_results],
    }


def assessment_from_dict(data: dict) -> DocumentAssessment:
    return DocumentAssessment(
        document_id=data["document_id"],
        kri_results=tuple(kri_result_from_dict(r) for r in data["kri_results"]),
        overall=RiskRating(data["overall"]),
        score=data["score"],
        policy_hash=data["policy_hash"],
    )


__all__ = [
    "RATING_VALUES",
    "DocumentAssessment",
    "aggregate",
    "rank_documents",
    "assessment_to_dict",
    "assessment_from_dict",
]
