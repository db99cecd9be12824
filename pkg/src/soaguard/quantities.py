"""Grammar-based extraction of monetary amounts, years, and signed numbers.

Money is '$'-prefixed (interpreted as AUD) and kept in exact decimal cents;
negatives are marked by a leading '-'/'−' or by accounting parentheses that
wrap the whole amount. Everything here is a pure function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

CENTS = Decimal("0.01")

_DIGITS = r"(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?"

# Two alternatives: accounting-negative "($1,200.50)" and signed "-$3,500".
# A bare trailing ')' (prose parenthesis) is never consumed.
MONEY_RE = re.compile(
    rf"(?P<paren>\(\s*\$\s*(?P<pdigits>{_DIGITS})\s*\))"
    rf"|(?:(?P<sign>[-−])\s*)?\$\s*(?P<digits>{_DIGITS})"
)

# Bare numbers (no '$'): used for positive/negative counting and year scanning.
# Must not abut letters/digits, so "col1" or "A2024" contribute nothing.
NUMBER_RE = re.compile(
    rf"(?P<paren>\(\s*\$?\s*(?P<pdigits>{_DIGITS})\s*\))"
    rf"|(?:(?P<sign>[-−])\s*)?\$?(?<![A-Za-z0-9.])(?P<digits>{_DIGITS})(?![A-Za-z0-9])"
)

YEAR_MIN = 1900
YEAR_MAX = 2100


@dataclass(frozen=True)
class MonetaryAmount:
    """A dollar amount with its sign carried separately. value >= 0."""

    value: Decimal  # quantized to two fraction digits
    sign: str  # "positive" | "negative"
    span: tuple[int, int]

    @property
    def signed_value(self) -> Decimal:
        return -self.value if self.sign == "negative" else self.value


@dataclass(frozen=True)
class YearSeries:
    years: tuple[int, ...]  # strictly increasing
    consecutive: bool  # step is exactly 1 throughout

    @property
    def span_years(self) -> int:
        return self.years[-1] - self.years[0] + 1


@dataclass(frozen=True)
class BalanceStatistics:
    count: int
    mean: Decimal
    median: Decimal
    min: Decimal
    max: Decimal


def extract_money(text: str) -> list[MonetaryAmount]:
    """All '$' amounts in order of appearance."""
    out = []
    for m in MONEY_RE.finditer(text):
        if m.group("paren"):
            digits, negative = m.group("pdigits"), True
        else:
            digits, negative = m.group("digits"), m.group("sign") is not None
        value = Decimal(digits.replace(",", "")).quantize(CENTS)
        out.append(
            MonetaryAmount(
                value=value,
                sign="negative" if negative else "positive",
                span=(m.start(), m.end()),
            )
        )
    return out


def _cell_year(cell: str) -> int | None:
    s = cell.strip()
    if re.fullmatch(r"\d{4}", s):
        y = int(s)
        if YEAR_MIN <= y <= YEAR_MAX:
            return y
    return None


def extract_year_series(cells: list[str]) -> list[YearSeries]:
    """Maximal runs of >= 2 strictly increasing years across consecutive cells."""
    series: list[YearSeries] = []
    run: list[int] = []

    def flush():
        if len(run) >= 2:
            steps = [b - a for a, b in zip(run, run[1:])]
            series.append(YearSeries(years=tuple(run), consecutive=all(s == 1 for s in steps)))

    for cell in cells:
        year = _cell_year(cell)
        if year is None:
            flush()
            run = []
        elif run and year <= run[-1]:
            flush()
            run = [year]
        else:
            run.append(year)
    flush()
    return series


def extract_years(text: str) -> list[int]:
    """Standalone 4-digit years in [1900, 2100], in order of appearance."""
    years = []
    for m in re.finditer(r"(?<![\d.])(\d{4})(?!\d)(?!\.\d)(?!,\d)", text):
        y = int(m.group(1))
        if YEAR_MIN <= y <= YEAR_MAX:
            years.append(y)
    return years


def _iter_number_signs(text: str):
    for m in NUMBER_RE.finditer(text):
        if m.group("paren"):
            yield "negative"
        else:
            yield "negative" if m.group("sign") else "positive"


def extract_signed_numbers(text: str) -> list[Decimal]:
    """Signed values of every numeric token (monetary or bare), in order.

    Unlike extract_money this does not quantize; bare numbers keep whatever
    precision they were written with.
    """
    out = []
    for m in NUMBER_RE.finditer(text):
        if m.group("paren"):
            digits, negative = m.group("pdigits"), True
        else:
            digits, negative = m.group("digits"), m.group("sign") is not None
        value = Decimal(digits.replace(",", ""))
        out.append(-value if negative else value)
    return out


def count_signed_numbers(source) -> tuple[int, int]:
    """(positives, negatives) over every numeric token, monetary or bare.

    Accepts a string or a Table; for tables, header and row cells are scanned.
    """
    texts: list[str]
    if isinstance(source, str):
        texts = [source]
    else:
        texts = list(source.header) + [cell for row in source.rows for cell in row]
    pos = neg = 0
    for text in texts:
        for sign in _iter_number_signs(text):
            if sign == "positive":
                pos += 1
            else:
                neg += 1
    return pos, neg


def balance_statistics(amounts: list[MonetaryAmount]) -> BalanceStatistics | None:
    """Exact cent-precision statistics; None when there are no amounts.

    Median of an even count is the mean of the two middle values; mean and
    median are quantized to cents (banker's rounding).
    """
    if not amounts:
        return None
    values = sorted(a.signed_value for a in amounts)
    n = len(values)
    if n % 2:
        median = values[n // 2]
    else:
        median = ((values[n // 2 - 1] + values[n // 2]) / 2).quantize(CENTS, ROUND_HALF_EVEN)
    mean = (sum(values) / n).quantize(CENTS, ROUND_HALF_EVEN)
    return BalanceStatistics(count=n, mean=mean, median=median, min=values[0], max=values[-1])
