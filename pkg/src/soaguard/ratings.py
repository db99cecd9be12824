"""Traffic-light ratings and per-KRI result containers."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Iterable

from .quantities import BalanceStatistics

KRI_IDS: tuple[str, ...] = (
    "goal_advice",
    "diversification",
    "client_position",
    "cashflow",
    "starting_balance",
    "insurance",
)


class RiskRating(str, Enum):
    GREEN = "GREEN"
    AMBER = "AMBER"
    RED = "RED"

    @property
    def severity(self) -> int:
        return {"GREEN": 0, "AMBER": 1, "RED": 2}[self.value]

    @staticmethod
    def worst(ratings: Iterable["RiskRating"]) -> "RiskRating":
        return max(ratings, key=lambda r: r.severity)


@dataclass(frozen=True)
class EvidenceItem:
    """One unit's contribution to a KRI rating.

    values are "key=value" strings carrying the extracted facts the rating
    rule consumed, so the rating can be re-derived from evidence alone.
    """

    unit_id: str
    note: str
    values: tuple[str, ...] = ()

    def value_map(self) -> dict[str, str]:
        return dict(v.split("=", 1) for v in self.values)


@dataclass(frozen=True)
class KriResult:
    kri_id: str
    rating: RiskRating
    evidence: tuple[EvidenceItem, ...]
    statistics: BalanceStatistics | None = None


def kri_result_to_dict(result: KriResult) -> dict:
    out: dict = {
        "kri_id": result.kri_id,
        "rating": result.rating.value,
        "evidence": [
            {"unit_id": e.unit_id, "note": e.note, "values": list(e.values)}
            for e in result.evidence
        ],
    }
    if result.statistics is not None:
        s = result.statistics
        out["statistics"] = {
            "count": s.count,
            "mean": str(s.mean),
            "median": str(s.median),
            "min": str(s.min),
            "max": str(s.max),
        }
    return out


def kri_result_from_dict(data: dict) -> KriResult:
    stats = None
    if "statistics" in data:
        s = data["statistics"]
        stats = BalanceStatistics(
            count=s["count"],
            mean=Decimal(s["mean"]),
            median=Decimal(s["median"]),
            min=Decimal(s["min"]),
            max=Decimal(s["max"]),
        )
    return KriResult(
        kri_id=data["kri_id"],
        rating=RiskRating(data["rating"]),
        evidence=tuple(
            EvidenceItem(unit_id=e["unit_id"], note=e["note"], values=tuple(e["values"]))
            for e in data["evidence"]
        ),
        statistics=stats,
    )


__all__ = [
    "KRI_IDS",
    "RiskRating",
    "EvidenceItem",
    "KriResult",
    "kri_result_to_dict",
    "kri_result_from_dict",
]
