"""Spreadsheet export of document assessments for auditors."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .aggregate import DocumentAssessment, rank_documents
from .ratings import KRI_IDS

CSV_HEADER = (
    "document_id,overall,goal_advice,diversification,client_position,"
    "cashflow,starting_balance,insurance"
)


def export_csv(assessments: list[DocumentAssessment]) -> str:
    """CSV with the fixed header, rows in triage order, one trailing newline.

    The column order matches KRI_IDS; rating cells are the literal strings
    GREEN, AMBER, or RED.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for assessment in rank_documents(assessments):
        row = [assessment.document_id, assessment.overall.value]
        row.extend(assessment.result(kri_id).rating.value for kri_id in KRI_IDS)
        writer.writerow(row)
    return buffer.getvalue()


def write_csv(assessments: list[DocumentAssessment], path: str | Path) -> None:
    Path(path).write_text(export_csv(assessments), encoding="utf-8")


__all__ = ["CSV_HEADER", "export_csv", "write_csv"]
