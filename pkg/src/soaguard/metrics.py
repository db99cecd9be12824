"""Agreement metrics between pipeline output and corpus ground truth."""

from __future__ import annotations

from dataclasses import dataclass

from .classifier import TASK_LABELS
from .pipeline import ModelBundle, analyze_document
from .ratings import KRI_IDS
from .tables import TABLE_TYPES

RATING_LABELS = ("GREEN", "AMBER", "RED")


def confusion_matrix(
    pairs: list[tuple[str, str]], labels: tuple[str, ...]
) -> dict[str, dict[str, int]]:
    """Nested counts: truth label -> predicted label -> count."""
    matrix = {t: {p: 0 for p in labels} for t in labels}
    for truth, predicted in pairs:
        matrix[truth][predicted] += 1
    return matrix


def per_label_f1(pairs: list[tuple[str, str]], labels: tuple[str, ...]) -> dict[str, float]:
    scores = {}
    for label in labels:
        tp = sum(1 for t, p in pairs if t == label and p == label)
        fp = sum(1 for t, p in pairs if t != label and p == label)
        fn = sum(1 for t, p in pairs if t == label and p != label)
        denominator = 2 * tp + fp + fn
        if denominator == 0:
            continue  # label absent from truth and predictions alike
        scores[label] = 2 * tp / denominator
    return scores


def macro_f1(pairs: list[tuple[str, str]], labels: tuple[str, ...]) -> float:
    """Mean F1 over labels that occur in truth or predictions.

    Labels with no support on either side carry no signal and are skipped
    rather than counted as zero.
    """
    scores = per_label_f1(pairs, labels)
    if not scores:
        return 0.0
    return sum(scores.values()) / len(scores)


@dataclass(frozen=True)
class TaskMetrics:
    accuracy: float
    macro_f1: float
    support: int
    confusion: dict[str, dict[str, int]]

    def to_dict(self) -> dict:
        return {
            "accuracy": round(self.accuracy, 6),
            "macro_f1": round(self.macro_f1, 6),
            "support": self.support,
            "confusion": self.confusion,
        }


def task_metrics(pairs: list[tuple[str, str]], labels: tuple[str, ...]) -> TaskMetrics:
    correct = sum(1 for t, p in pairs if t == p)
    return TaskMetrics(
        accuracy=correct / len(pairs) if pairs else 0.0,
        macro_f1=macro_f1(pairs, labels),
        support=len(pairs),
        confusion=confusion_matrix(pairs, labels),
    )


@dataclass(frozen=True)
class EvaluationReport:
    n_documents: int
    tasks: dict[str, TaskMetrics]  # four sentence tasks + "table"
    kris: dict[str, TaskMetrics]  # rating agreement per KRI
    overall: TaskMetrics

    def to_dict(self) -> dict:
        return {
            "n_documents": self.n_documents,
            "tasks": {k: v.to_dict() for k, v in self.tasks.items()},
            "kris": {k: v.to_dict() for k, v in self.kris.items()},
            "overall": self.overall.to_dict(),
        }


def evaluate_corpus(bundle: ModelBundle, corpus, policy=None, taxonomy=None) -> EvaluationReport:
    """Run the pipeline over (document, truth) pairs and score every layer.

    Classifier pairs compare unit labels; KRI and overall pairs compare
    ratings against the generator's intended ratings.
    """
    task_pairs: dict[str, list[tuple[str, str]]] = {task: [] for task in TASK_LABELS}
    task_pairs["table"] = []
    kri_pairs: dict[str, list[tuple[str, str]]] = {k: [] for k in KRI_IDS}
    overall_pairs: list[tuple[str, str]] = []
    n = 0
    for doc, truth in corpus:
        n += 1
        result = analyze_document(doc, bundle, policy=policy, taxonomy=taxonomy)
        for task in TASK_LABELS:
            predicted = result.labels.unit_labels[task]
            for unit_id, want in truth.unit_labels[task].items():
                task_pairs[task].append((want, predicted[unit_id]))
        for unit_id, want in truth.table_types.items():
            task_pairs["table"].append((want, result.labels.table_types[unit_id]))
        for r in result.kri_results:
            kri_pairs[r.kri_id].append((truth.intended_kri[r.kri_id], r.rating.value))
        overall_pairs.append((truth.intended_overall, result.assessment.overall.value))

    return EvaluationReport(
        n_documents=n,
        tasks={
            **{
                task: task_metrics(task_pairs[task], TASK_LABELS[task])
                for task in TASK_LABELS
            },
            "table": task_metrics(task_pairs["table"], TABLE_TYPES),
        },
        kris={k: task_metrics(kri_pairs[k], RATING_LABELS) for k in KRI_IDS},
        overall=task_metrics(overall_pairs, RATING_LABELS),
    )


__all__ = [
    "RATING_LABELS",
    "confusion_matrix",
    "per_label_f1",
    "macro_f1",
    "TaskMetrics",
    "task_metrics",
    "EvaluationReport",
    "evaluate_corpus",
]
