"""Small random-forest ensemble over dense numeric feature rows.

Trees are plain nested dicts (JSON-ready): internal nodes {"f", "t", "l", "r"}
split on feature f at threshold t; leaves {"leaf": [per-label counts]}.
Training is deterministic for a fixed seed: per-tree seeds are derived from
the base seed, bootstrap rows and candidate features come from each tree's own
random.Random, and split ties resolve toward the first candidate considered.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 8
    min_leaf: int = 1
    features_per_split: int | None = None  # None: ceil(sqrt(n_features))
    seed: int = 0


def _tree_seed(base_seed: int, index: int) -> int:
    return (base_seed * 1_000_003 + index) & 0xFFFFFFFF


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - (p * p).sum())


def _leaf(y: np.ndarray, rows: np.ndarray, n_labels: int) -> dict:
    counts = np.bincount(y[rows], minlength=n_labels)
    return {"leaf": [int(c) for c in counts]}


def _best_split(
    x: np.ndarray, y: np.ndarray, rows: np.ndarray, candidates: list[int], n_labels: int
) -> tuple[int, float] | None:
    best: tuple[float, int, float] | None = None
    parent = np.bincount(y[rows], minlength=n_labels)
    n = len(rows)
    for f in candidates:
        order = rows[np.argsort(x[rows, f], kind="stable")]
        values = x[order, f]
        left = np.zeros(n_labels)
        right = parent.astype(float).copy()
        for i in range(n - 1):
            lab = y[order[i]]
            left[lab] += 1
            right[lab] -= 1
            if values[i] == values[i + 1]:
                continue
            k = i + 1
            impurity = (k * _gini(left) + (n - k) * _gini(right)) / n
            if best is None or impurity < best[0] - 1e-12:
                threshold = (values[i] + values[i + 1]) / 2.0
                best = (impurity, f, float(threshold))
    if best is None:
        return None
    return best[1], best[2]


def _build(
    x: np.ndarray,
    y: np.ndarray,
    rows: np.ndarray,
    depth: int,
    rng: random.Random,
    config: ForestConfig,
    n_labels: int,
) -> dict:
    labels_here = np.unique(y[rows])
    if depth >= config.max_depth or len(rows) <= config.min_leaf or len(labels_here) == 1:
        return _leaf(y, rows, n_labels)
    k = config.features_per_split or int(np.ceil(np.sqrt(x.shape[1])))
    k = min(k, x.shape[1])
    candidates = sorted(rng.sample(range(x.shape[1]), k))
    split = _best_split(x, y, rows, candidates, n_labels)
    if split is None:
        return _leaf(y, rows, n_labels)
    f, t = split
    mask = x[rows, f] <= t
    left_rows, right_rows = rows[mask], rows[~mask]
    if len(left_rows) == 0 or len(right_rows) == 0:
        return _leaf(y, rows, n_labels)
    return {
        "f": f,
        "t": t,
        "l": _build(x, y, left_rows, depth + 1, rng, config, n_labels),
        "r": _build(x, y, right_rows, depth + 1, rng, config, n_labels),
    }


def train_forest(x: np.ndarray, y: np.ndarray, n_labels: int, config: ForestConfig) -> list[dict]:
    """Grow config.n_trees trees on bootstrap samples of (x, y)."""
    trees = []
    n = x.shape[0]
    for i in range(config.n_trees):
        rng = random.Random(_tree_seed(config.seed, i))
        rows = np.array([rng.randrange(n) for _ in range(n)], dtype=np.int64)
        trees.append(_build(x, y, rows, 0, rng, config, n_labels))
    return trees


def tree_predict(tree: dict, row: np.ndarray) -> int:
    """Label index this tree votes for; leaf ties go to the lower label index."""
    node = tree
    while "leaf" not in node:
        node = node["l"] if row[node["f"]] <= node["t"] else node["r"]
    counts = node["leaf"]
    return max(range(len(counts)), key=lambda j: (counts[j], -j))


def forest_votes(trees: list[dict], row: np.ndarray, n_labels: int) -> list[int]:
    """Per-label vote counts; sums to len(trees)."""
    votes = [0] * n_labels
    for tree in trees:
        votes[tree_predict(tree, row)] += 1
    return votes


__all__ = ["ForestConfig", "train_forest", "tree_predict", "forest_votes"]
