"""Training, persistence, and end-to-end analysis of advice documents."""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

from .aggregate import DocumentAssessment, assessment_to_dict
from .assess import assess_from_labels
from .classifier import (
    TASK_LABELS,
    TrainConfig,
    TrainedTextModel,
    load_text_model,
    save_text_model,
    train_classifier,
)
from .goals import GoalAdviceMap
from .kris import DocumentLabels, KriPolicy, label_sentences, label_tables, load_policy
from .model import SoaDocument, enumerate_units
from .ratings import KriResult, kri_result_to_dict
from .sentiment import SentimentLexicon
from .tables import (
    AssetTaxonomy,
    TableTrainConfig,
    TrainedTableModel,
    load_table_model,
    load_taxonomy,
    save_table_model,
    train_table_classifier,
)

MODEL_FILES: tuple[tuple[str, str], ...] = (
    ("goal_rec", "goal_rec.json"),
    ("position", "position.json"),
    ("balance_mention", "balance_mention.json"),
    ("insurance", "insurance.json"),
    ("table", "table_type.json"),
)


@dataclass(frozen=True)
class ModelBundle:
    goal_rec: TrainedTextModel
    position: TrainedTextModel
    balance_mention: TrainedTextModel
    insurance: TrainedTextModel
    table: TrainedTableModel

    def text_model(self, task: str) -> TrainedTextModel:
        return {
            "goal_rec": self.goal_rec,
            "position": self.position,
            "balance_mention": self.balance_mention,
            "insurance": self.insurance,
        }[task]

    def metrics(self) -> dict[str, float]:
        out = {task: self.text_model(task).held_out_accuracy for task in TASK_LABELS}
        out["table"] = self.table.held_out_accuracy
        return out


def collect_examples(corpus) -> tuple[dict[str, list[tuple[str, str]]], list]:
    """Flatten (document, truth) pairs into per-task training examples.

    Text examples use the unit text the pipeline itself will classify, so
    table units contribute their caption + header text to balance_mention.
    """
    text_examples: dict[str, list[tuple[str, str]]] = {task: [] for task in TASK_LABELS}
    table_examples = []
    for doc, truth in corpus:
        units = {u.unit_id: u for u in enumerate_units(doc)}
        for task in TASK_LABELS:
            for unit_id, label in truth.unit_labels[task].items():
                text_examples[task].append((units[unit_id].text, label))
        for unit_id, table_type in truth.table_types.items():
            table_examples.append((units[unit_id].table, table_type))
    return text_examples, table_examples


def train_models(corpus, seed: int = 0) -> ModelBundle:
    text_examples, table_examples = collect_examples(corpus)
    config = TrainConfig(seed=seed)
    return ModelBundle(
        goal_rec=train_classifier(text_examples["goal_rec"], "goal_rec", config),
        position=train_classifier(text_examples["position"], "position", config),
        balance_mention=train_classifier(
            text_examples["balance_mention"], "balance_mention", config
        ),
        insurance=train_classifier(text_examples["insurance"], "insurance", config),
        table=train_table_classifier(table_examples, TableTrainConfig(seed=seed)),
    )


def save_models(bundle: ModelBundle, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for attr, filename in MODEL_FILES:
        model = getattr(bundle, attr)
        if attr == "table":
            save_table_model(model, directory / filename)
        else:
            save_text_model(model, directory / filename)


def load_models(directory: str | Path) -> ModelBundle:
    directory = Path(directory)
    kwargs = {}
    for attr, filename in MODEL_FILES:
        path = directory / filename
        kwargs[attr] = load_table_model(path) if attr == "table" else load_text_model(path)
    return ModelBundle(**kwargs)


def model_checksums(bundle: ModelBundle) -> dict[str, str]:
    return {attr: getattr(bundle, attr).checksum for attr, _ in MODEL_FILES}


def label_document(doc: SoaDocument, bundle: ModelBundle) -> DocumentLabels:
    unit_labels = {
        task: label_sentences(doc, bundle.text_model(task), task) for task in TASK_LABELS
    }
    return DocumentLabels(unit_labels=unit_labels, table_types=label_tables(doc, bundle.table))


@dataclass(frozen=True)
class AnalysisResult:
    document: SoaDocument
    labels: DocumentLabels
    advice_map: GoalAdviceMap
    kri_results: tuple[KriResult, ...]
    assessment: DocumentAssessment
    elapsed_ms: float


def analyze_document(
    doc: SoaDocument,
    bundle: ModelBundle,
    policy: KriPolicy | None = None,
    taxonomy: AssetTaxonomy | None = None,
    lexicon: SentimentLexicon | None = None,
) -> AnalysisResult:
    started = time.perf_counter()
    policy = policy or load_policy()
    taxonomy = taxonomy or load_taxonomy()
    labels = label_document(doc, bundle)
    advice_map, results, assessment = assess_from_labels(doc, labels, policy, taxonomy, lexicon)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    return AnalysisResult(
        document=doc,
        labels=labels,
        advice_map=advice_map,
        kri_results=tuple(results),
        assessment=assessment,
        elapsed_ms=elapsed_ms,
    )


def advice_map_to_dict(advice_map: GoalAdviceMap) -> dict:
    def link(entry) -> dict:
        return {
            "goal_id": entry.goal_id,
            "recommendation_id": entry.recommendation_id,
            "confidence": round(entry.confidence, 6),
        }

    return {
        "goals": [{"unit_id": uid, "text": text} for uid, text in advice_map.goals],
        "recommendations": [
            {"unit_id": uid, "text": text} for uid, text in advice_map.recommendations
        ],
        "links": [link(ln) for ln in advice_map.links],
        "candidates": [link(ln) for ln in advice_map.candidates],
    }


def analysis_to_dict(result: AnalysisResult) -> dict:
    return {
        "assessment": assessment_to_dict(result.assessment),
        "kri_results": [kri_result_to_dict(r) for r in result.kri_results],
        "advice_map": advice_map_to_dict(result.advice_map),
        "elapsed_ms": round(result.elapsed_ms, 3),
    }


__all__ = [
    "ModelBundle",
    "MODEL_FILES",
    "collect_examples",
    "train_models",
    "save_models",
    "load_models",
    "model_checksums",
    "label_document",
    "AnalysisResult",
    "analyze_document",
    "advice_map_to_dict",
    "analysis_to_dict",
]
