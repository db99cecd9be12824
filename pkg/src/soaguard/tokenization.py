"""Deterministic word/number tokenizer with source spans."""

from __future__ import annotations

import re
from dataclasses import dataclass

TOKEN_RE = re.compile(
    r"\$"
    r"|[+\-−]"
    r"|\d{1,3}(?:,\d{3})+(?:\.\d+)?"
    r"|\d+(?:\.\d+)?"
    r"|[A-Za-z][A-Za-z']*"
)


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    spans: tuple[tuple[int, int], ...]  # non-overlapping, increasing


def tokenize(text: str) -> TokenSequence:
    """Lowercased word and number tokens; '$' and signs kept as tokens.

    Numbers drop thousands separators ("5,000" -> "5000"); each span maps back
    to the exact source substring that produced the token.
    """
    tokens: list[str] = []
    spans: list[tuple[int, int]] = []
    for m in TOKEN_RE.finditer(text):
        tok = m.group(0)
        if tok == "−":
            tok = "-"
        elif tok[0].isdigit():
            tok = tok.replace(",", "")
        else:
            tok = tok.lower()
        tokens.append(tok)
        spans.append((m.start(), m.end()))
    return TokenSequence(tokens=tuple(tokens), spans=tuple(spans))
