"""Unigram + bigram featurization over token sequences."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Sequence


def ngram_counts(tokens: Sequence[str]) -> Counter:
    """Raw unigram and bigram counts. Bigram feature ids join tokens with '_'."""
    counts = Counter(tokens)
    for a, b in zip(tokens, tokens[1:]):
        counts[f"{a}_{b}"] += 1
    return counts


def build_vocabulary(token_lists: Iterable[Sequence[str]], min_count: int = 1) -> dict[str, int]:
    """Feature id -> column index, in first-seen order, pruned by min_count."""
    totals: Counter = Counter()
    order: list[str] = []
    for tokens in token_lists:
        for feat, c in ngram_counts(tokens).items():
            if feat not in totals:
                order.append(feat)
            totals[feat] += c
    return {feat: i for i, feat in enumerate(f for f in order if totals[f] >= min_count)}


def featurize(tokens: Sequence[str], vocabulary: dict[str, int]) -> dict[str, float]:
    """L2-normalized in-vocabulary n-gram weights; out-of-vocabulary dropped.

    The returned map is sparse; its L2 norm is 1, or 0 for an all-OOV input.
    """
    counts = {f: c for f, c in ngram_counts(tokens).items() if f in vocabulary}
    norm = math.sqrt(sum(c * c for c in counts.values()))
    if norm == 0:
        return {}
    return {f: c / norm for f, c in counts.items()}
