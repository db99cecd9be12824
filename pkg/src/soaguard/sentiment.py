"""Lexicon sentiment scoring for position and cashflow statements.

Polarity is (positive hits - negative hits) / max(1, total hits) over the
token stream, with a negation window: a negator token flips the orientation of
any sentiment term within the next three tokens. The lexicons live in
data/ as plain term-per-line files so compliance staff can review and extend
them without code changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .tokenization import tokenize

NEGATION_WINDOW = 3


@dataclass(frozen=True)
class SentimentLexicon:
    positive: frozenset[str]
    negative: frozenset[str]
    negators: frozenset[str]


def _load_terms(name: str) -> frozenset[str]:
    text = resources.files("soaguard.data").joinpath(name).read_text(encoding="utf-8")
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


def load_lexicon(directory: str | Path | None = None) -> SentimentLexicon:
    """Load the packaged lexicon, or one from a directory of the same files."""
    if directory is None:
        return SentimentLexicon(
            positive=_load_terms("sentiment_positive.txt"),
            negative=_load_terms("sentiment_negative.txt"),
            negators=_load_terms("sentiment_negators.txt"),
        )
    directory = Path(directory)

    def read(name: str) -> frozenset[str]:
        lines = (directory / name).read_text(encoding="utf-8").splitlines()
        return frozenset(line.strip().lower() for line in lines if line.strip())

    return SentimentLexicon(
        positive=read("sentiment_positive.txt"),
        negative=read("sentiment_negative.txt"),
        negators=read("sentiment_negators.txt"),
    )


_DEFAULT: SentimentLexicon | None = None


def default_lexicon() -> SentimentLexicon:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_lexicon()
    return _DEFAULT


@dataclass(frozen=True)
class SentimentScore:
    polarity: float  # in [-1, 1]
    positive_hits: int
    negative_hits: int

    @property
    def total_hits(self) -> int:
        return self.positive_hits + self.negative_hits


def score_sentiment(text: str, lexicon: SentimentLexicon | None = None) -> SentimentScore:
    """Score one sentence. No sentiment terms at all gives polarity 0.0."""
    lexicon = lexicon or default_lexicon()
    tokens = tokenize(text).tokens
    pos = neg = 0
    negate_until = -1
    for i, tok in enumerate(tokens):
        if tok in lexicon.negators:
            negate_until = i + NEGATION_WINDOW
            continue
        hit = 0
        if tok in lexicon.positive:
            hit = 1
        elif tok in lexicon.negative:
            hit = -1
        if hit == 0:
            continue
        if i <= negate_until:
            hit = -hit
        if hit > 0:
            pos += 1
        else:
            neg += 1
    total = pos + neg
    return SentimentScore(polarity=(pos - neg) / max(1, total), positive_hits=pos, negative_hits=neg)


__all__ = [
    "NEGATION_WINDOW",
    "SentimentLexicon",
    "SentimentScore",
    "load_lexicon",
    "default_lexicon",
    "score_sentiment",
]
