"""Trainable text classification for the four sentence-level tasks.

The model is multinomial logistic regression over L2-normalized unigram+bigram
counts, trained by full-batch gradient descent with a fixed epoch count and
seed, so identical inputs produce bit-identical model files. Richer models can
replace it behind the same contract: fixed label sets, a probability
distribution out, deterministic training.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import sparse

from .errors import InsufficientDataError, LabelSetError, ModelChecksumError
from .features import build_vocabulary, featurize, ngram_counts
from .tokenization import tokenize

FORMAT_VERSION = 1

TASK_LABELS: dict[str, tuple[str, ...]] = {
    "goal_rec": ("goal", "recommendation", "neither"),
    "position": ("position", "other"),
    "balance_mention": ("balance", "other"),
    "insurance": ("recommend", "defer", "scope_out", "other"),
}

MIN_EXAMPLES_PER_LABEL = 10


@dataclass
class TrainConfig:
    seed: int = 0
    epochs: int = 60
    learning_rate: float = 2.0
    l2: float = 1e-4
    min_count: int = 1
    validation_fraction: float = 0.2


@dataclass
class TrainedTextModel:
    task: str
    labels: tuple[str, ...]
    vocabulary: dict[str, int]
    weights: np.ndarray  # (n_features, n_labels)
    biases: np.ndarray  # (n_labels,)
    held_out_accuracy: float
    train_examples: int
    seed: int
    format_version: int = FORMAT_VERSION
    extra: dict = field(default_factory=dict)

    def parameters_dict(self) -> dict:
        return {
            "weights": [[float(w) for w in row] for row in self.weights],
            "biases": [float(b) for b in self.biases],
        }

    @property
    def checksum(self) -> str:
        return _checksum(self.parameters_dict())


def _checksum(parameters: dict) -> str:
    canonical = json.dumps(parameters, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _vectorize(token_lists: list[tuple[str, ...]], vocabulary: dict[str, int]) -> sparse.csr_matrix:
    data, indices, indptr = [], [], [0]
    for tokens in token_lists:
        row = featurize(tokens, vocabulary)
        for feat, weight in row.items():
            indices.append(vocabulary[feat])
            data.append(weight)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(token_lists), len(vocabulary)),
    )


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def train_classifier(
    examples: list[tuple[str, str]], task: str, config: TrainConfig | None = None
) -> TrainedTextModel:
    """Train a sentence classifier for one of the fixed tasks.

    Deterministic given (examples, config.seed). Holds out the last 20% of the
    seeded shuffle for the reported accuracy.
    """
    if task not in TASK_LABELS:
        raise LabelSetError(f"unknown task '{task}'")
    config = config or TrainConfig()
    labels = TASK_LABELS[task]
    label_index = {lab: i for i, lab in enumerate(labels)}

    counts: dict[str, int] = {}
    for _, label in examples:
        if label not in label_index:
            raise LabelSetError(f"label '{label}' is not in task '{task}' label set {labels}")
        counts[label] = counts.get(label, 0) + 1
    if len(counts) < 2:
        raise InsufficientDataError(f"need >= 2 labels present, got {sorted(counts)}")
    for label, c in counts.items():
        if c < MIN_EXAMPLES_PER_LABEL:
            raise InsufficientDataError(
                f"label '{label}' has {c} examples, need >= {MIN_EXAMPLES_PER_LABEL}"
            )

    shuffled = list(examples)
    random.Random(config.seed).shuffle(shuffled)
    n_val = max(1, int(len(shuffled) * config.validation_fraction))
    train_rows, val_rows = shuffled[:-n_val], shuffled[-n_val:]

    train_tokens = [tokenize(text).tokens for text, _ in train_rows]
    vocabulary = build_vocabulary(train_tokens, min_count=config.min_count)
    x = _vectorize(train_tokens, vocabulary)
    y = np.array([label_index[label] for _, label in train_rows])
    y_onehot = np.zeros((len(train_rows), len(labels)))
    y_onehot[np.arange(len(train_rows)), y] = 1.0

    # Inverse-frequency example weights: the corpora are dominated by the
    # catch-all label, and an unweighted mean gradient starves the rare
    # classes this suite actually keys decisions off.
    train_counts = np.bincount(y, minlength=len(labels)).astype(float)
    present = train_counts > 0
    class_weight = np.zeros(len(labels))
    class_weight[present] = len(train_rows) / (present.sum() * train_counts[present])
    sample_weight = class_weight[y][:, np.newaxis]

    w = np.zeros((len(vocabulary), len(labels)))
    b = np.zeros(len(labels))
    n = max(1, x.shape[0])
    for _ in range(config.epochs):
        probs = _softmax(x @ w + b)
        grad = (probs - y_onehot) * sample_weight
        w -= config.learning_rate * ((x.T @ grad) / n + config.l2 * w)
        b -= config.learning_rate * grad.mean(axis=0)

    model = TrainedTextModel(
        task=task,
        labels=labels,
        vocabulary=vocabulary,
        weights=w,
        biases=b,
        held_out_accuracy=0.0,
        train_examples=len(train_rows),
        seed=config.seed,
    )
    correct = sum(1 for text, label in val_rows if predict_label(model, text) == label)
    model.held_out_accuracy = correct / len(val_rows)
    return model


def classify(model: TrainedTextModel, text: str) -> dict[str, float]:
    """Probability for each label; values sum to 1 within 1e-6.

    An empty or fully out-of-vocabulary input reduces to the biases alone, so
    a zero-bias model yields the uniform distribution.
    """
    row = featurize(tokenize(text).tokens, model.vocabulary)
    z = model.biases.copy()
    for feat, weight in row.items():
        z = z + weight * model.weights[model.vocabulary[feat]]
    probs = _softmax(z.reshape(1, -1))[0]
    return {label: float(p) for label, p in zip(model.labels, probs)}


def predict_label(model: TrainedTextModel, text: str) -> str:
    """Argmax label; ties break toward the earlier label in the label set."""
    probs = classify(model, text)
    return max(model.labels, key=lambda lab: (probs[lab], -model.labels.index(lab)))


def model_to_dict(model: TrainedTextModel) -> dict:
    parameters = model.parameters_dict()
    return {
        "format_version": model.format_version,
        "task": model.task,
        "labels": list(model.labels),
        "vocabulary": model.vocabulary,
        "parameters": parameters,
        "checksum": _checksum(parameters),
        "metrics": {
            "held_out_accuracy": model.held_out_accuracy,
            "train_examples": model.train_examples,
            "seed": model.seed,
        },
    }


def save_text_model(model: TrainedTextModel, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_text_model(path: str | Path) -> TrainedTextModel:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    parameters = data["parameters"]
    if _checksum(parameters) != data["checksum"]:
        raise ModelChecksumError(f"checksum mismatch in {path}")
    metrics = data.get("metrics", {})
    return TrainedTextModel(
        task=data["task"],
        labels=tuple(data["labels"]),
        vocabulary={k: int(v) for k, v in data["vocabulary"].items()},
        weights=np.array(parameters["weights"], dtype=float).reshape(
            len(data["vocabulary"]), len(data["labels"])
        ),
        biases=np.array(parameters["biases"], dtype=float),
        held_out_accuracy=metrics.get("held_out_accuracy", 0.0),
        train_examples=metrics.get("train_examples", 0),
        seed=metrics.get("seed", 0),
        format_version=data["format_version"],
    )


__all__ = [
    "TASK_LABELS",
    "TrainConfig",
    "TrainedTextModel",
    "train_classifier",
    "classify",
    "predict_label",
    "save_text_model",
    "load_text_model",
    "ngram_counts",
]
