"""Table features, table-type classification, and the table-level rules.

Covers four table types (asset_class, projections, cashflow, other), the
diversification check against a configurable asset taxonomy, the net cash-flow
outcome, and the projection horizon. Feature extraction is pure; the type
classifier is a seeded random forest over a fixed 13-slot numeric vector.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from decimal import Decimal
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import InsufficientDataError, LabelSetError, ModelChecksumError
from .forest import ForestConfig, forest_votes, train_forest
from .model import Table
from .quantities import (
    count_signed_numbers,
    extract_money,
    extract_signed_numbers,
    extract_year_series,
)
from .tokenization import tokenize

FORMAT_VERSION = 1

TABLE_TYPES: tuple[str, ...] = ("asset_class", "projections", "cashflow", "other")

FEATURE_NAMES: tuple[str, ...] = (
    "monetary_count",
    "year_series_count",
    "longest_year_series_len",
    "positive_count",
    "negative_count",
    "row_count",
    "column_count",
    "header_asset_hits",
    "header_cashflow_hits",
    "header_projection_hits",
    "caption_asset_hits",
    "caption_cashflow_hits",
    "caption_projection_hits",
)


def _load_terms(name: str) -> frozenset[str]:
    """Lexicon file -> set of normalized one- or two-token phrases."""
    text = resources.files("soaguard.data").joinpath(name).read_text(encoding="utf-8")
    terms = set()
    for line in text.splitlines():
        line = line.strip()
        if line:
            terms.add(" ".join(tokenize(line).tokens))
    return frozenset(terms)


_LEXICONS: dict[str, frozenset[str]] | None = None


def _lexicons() -> dict[str, frozenset[str]]:
    global _LEXICONS
    if _LEXICONS is None:
        _LEXICONS = {
            "asset": _load_terms("table_asset_terms.txt"),
            "cashflow": _load_terms("table_cashflow_terms.txt"),
            "projection": _load_terms("table_projection_terms.txt"),
            "net": _load_terms("table_net_terms.txt"),
        }
    return _LEXICONS


def _grams(text: str) -> list[str]:
    toks = tokenize(text).tokens
    return list(toks) + [f"{a} {b}" for a, b in zip(toks, toks[1:])]


def count_lexicon_hits(text: str, terms: frozenset[str]) -> int:
    """Occurrences of lexicon terms among the text's unigrams and bigrams."""
    return sum(1 for g in _grams(text) if g in terms)


@dataclass(frozen=True)
class LexiconHits:
    asset: int
    cashflow: int
    projection: int


@dataclass(frozen=True)
class TableFeatureVector:
    monetary_count: int
    year_series_count: int
    longest_year_series_len: int
    positive_count: int
    negative_count: int
    row_count: int
    column_count: int
    header_bigram_hits: LexiconHits
    caption_bigram_hits: LexiconHits

    def to_array(self) -> np.ndarray:
        """Fixed slot order given by FEATURE_NAMES."""
        h, c = self.header_bigram_hits, self.caption_bigram_hits
        return np.array(
            [
                self.monetary_count,
                self.year_series_count,
                self.longest_year_series_len,
                self.positive_count,
                self.negative_count,
                self.row_count,
                self.column_count,
                h.asset,
                h.cashflow,
                h.projection,
                c.asset,
                c.cashflow,
                c.projection,
            ],
            dtype=float,
        )


def table_features(table: Table) -> TableFeatureVector:
    lex = _lexicons()
    cell_texts = list(table.header) + [cell for row in table.rows for cell in row]
    monetary = sum(len(extract_money(t)) for t in cell_texts)
    pos, neg = count_signed_numbers(table)

    series = extract_year_series(list(table.header))
    for row in table.rows:
        series.extend(extract_year_series(list(row)))
    longest = max((len(s.years) for s in series), default=0)

    header_text = " ".join(table.header)
    return TableFeatureVector(
        monetary_count=monetary,
        year_series_count=len(series),
        longest_year_series_len=longest,
        positive_count=pos,
        negative_count=neg,
        row_count=table.row_count,
        column_count=table.column_count,
        header_bigram_hits=LexiconHits(
            asset=count_lexicon_hits(header_text, lex["asset"]),
            cashflow=count_lexicon_hits(header_text, lex["cashflow"]),
            projection=count_lexicon_hits(header_text, lex["projection"]),
        ),
        caption_bigram_hits=LexiconHits(
            asset=count_lexicon_hits(table.caption, lex["asset"]),
            cashflow=count_lexicon_hits(table.caption, lex["cashflow"]),
            projection=count_lexicon_hits(table.caption, lex["projection"]),
        ),
    )


# ---------------------------------------------------------------------------
# Table-type classifier


@dataclass
class TableTrainConfig:
    seed: int = 0
    n_trees: int = 100
    max_depth: int = 8
    min_leaf: int = 1
    features_per_split: int | None = None
    validation_fraction: float = 0.2


@dataclass
class TrainedTableModel:
    labels: tuple[str, ...]
    trees: list[dict]
    config: TableTrainConfig
    held_out_accuracy: float
    train_examples: int
    format_version: int = FORMAT_VERSION

    def parameters_dict(self) -> dict:
        return {"trees": self.trees}

    @property
    def checksum(self) -> str:
        return _checksum(self.parameters_dict())


def _checksum(parameters: dict) -> str:
    canonical = json.dumps(parameters, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def train_table_classifier(
    examples: list[tuple[Table, str]], config: TableTrainConfig | None = None
) -> TrainedTableModel:
    """Train the four-way table-type forest. All four labels must be present."""
    config = config or TableTrainConfig()
    label_index = {lab: i for i, lab in enumerate(TABLE_TYPES)}
    for _, label in examples:
        if label not in label_index:
            raise LabelSetError(f"unknown table type '{label}'")
    present = {label for _, label in examples}
    if present != set(TABLE_TYPES):
        missing = sorted(set(TABLE_TYPES) - present)
        raise InsufficientDataError(f"missing table types in training data: {missing}")

    shuffled = list(examples)
    random.Random(config.seed).shuffle(shuffled)
    n_val = max(1, int(len(shuffled) * config.validation_fraction))
    train_rows, val_rows = shuffled[:-n_val], shuffled[-n_val:]

    x = np.stack([table_features(t).to_array() for t, _ in train_rows])
    y = np.array([label_index[label] for _, label in train_rows], dtype=np.int64)
    trees = train_forest(
        x,
        y,
        len(TABLE_TYPES),
        ForestConfig(
            n_trees=config.n_trees,
            max_depth=config.max_depth,
            min_leaf=config.min_leaf,
            features_per_split=config.features_per_split,
            seed=config.seed,
        ),
    )
    model = TrainedTableModel(
        labels=TABLE_TYPES,
        trees=trees,
        config=config,
        held_out_accuracy=0.0,
        train_examples=len(train_rows),
    )
    correct = sum(1 for t, label in val_rows if classify_table(model, t)[0] == label)
    model.held_out_accuracy = correct / len(val_rows)
    return model


def classify_table(model: TrainedTableModel, table: Table) -> tuple[str, float]:
    """(type, confidence) where confidence is the winner's vote fraction."""
    row = table_features(table).to_array()
    votes = forest_votes(model.trees, row, len(model.labels))
    winner = max(range(len(model.labels)), key=lambda j: (votes[j], -j))
    return model.labels[winner], votes[winner] / len(model.trees)


def table_model_to_dict(model: TrainedTableModel) -> dict:
    parameters = model.parameters_dict()
    return {
        "format_version": model.format_version,
        "task": "table_type",
        "labels": list(model.labels),
        "feature_names": list(FEATURE_NAMES),
        "config": {
            "seed": model.config.seed,
            "n_trees": model.config.n_trees,
            "max_depth": model.config.max_depth,
            "min_leaf": model.config.min_leaf,
            "features_per_split": model.config.features_per_split,
            "validation_fraction": model.config.validation_fraction,
        },
        "parameters": parameters,
        "checksum": _checksum(parameters),
        "metrics": {
            "held_out_accuracy": model.held_out_accuracy,
            "train_examples": model.train_examples,
        },
    }


def save_table_model(model: TrainedTableModel, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(table_model_to_dict(model), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_table_model(path: str | Path) -> TrainedTableModel:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    parameters = data["parameters"]
    if _checksum(parameters) != data["checksum"]:
        raise ModelChecksumError(f"checksum mismatch in {path}")
    cfg = data["config"]
    metrics = data.get("metrics", {})
    return TrainedTableModel(
        labels=tuple(data["labels"]),
        trees=parameters["trees"],
        config=TableTrainConfig(
            seed=cfg["seed"],
            n_trees=cfg["n_trees"],
            max_depth=cfg["max_depth"],
            min_leaf=cfg["min_leaf"],
            features_per_split=cfg["features_per_split"],
            validation_fraction=cfg["validation_fraction"],
        ),
        held_out_accuracy=metrics.get("held_out_accuracy", 0.0),
        train_examples=metrics.get("train_examples", 0),
        format_version=data["format_version"],
    )


# ---------------------------------------------------------------------------
# Asset taxonomy and diversification


@dataclass(frozen=True)
class AssetTaxonomy:
    """Ordered asset classes, each with synonyms folded onto the class name."""

    classes: tuple[str, ...]
    synonym_to_class: dict[str, str]

    def match(self, cell: str) -> str | None:
        return self.synonym_to_class.get(" ".join(tokenize(cell).tokens))


def taxonomy_from_entries(entries: list[dict]) -> AssetTaxonomy:
    names = []
    lookup: dict[str, str] = {}
    for entry in entries:
        name = entry["name"]
        if name in names:
            raise ValueError(f"duplicate asset class '{name}'")
        names.append(name)
        for syn in [name, *entry.get("synonyms", [])]:
            lookup[" ".join(tokenize(syn).tokens)] = name
    if len(names) < 2:
        raise ValueError("taxonomy needs at least two asset classes")
    return AssetTaxonomy(classes=tuple(names), synonym_to_class=lookup)


def load_taxonomy(path: str | Path | None = None) -> AssetTaxonomy:
    if path is None:
        raw = resources.files("soaguard.data").joinpath("asset_taxonomy.json").read_text("utf-8")
    else:
        raw = Path(path).read_text(encoding="utf-8")
    return taxonomy_from_entries(json.loads(raw))


@dataclass(frozen=True)
class DiversificationFinding:
    classes_found: frozenset[str]
    nonzero_classes: int
    max_share: float | None  # absent when no readable allocation column


def _parse_share(cell: str) -> Decimal | None:
    values = extract_signed_numbers(cell)
    if len(values) != 1:
        return None
    return values[0]


def check_diversification(table: Table, taxonomy: AssetTaxonomy) -> DiversificationFinding:
    """Match first-column labels to the taxonomy and read the allocation column.

    Shares are taken from the first column (left to right, excluding the label
    column) where every matched row is numeric and the matched total is 1 +/- 0.05
    or 100 +/- 5. Rows not matching the taxonomy (totals, notes) are ignored.
    """
    matches: list[tuple[int, str]] = []
    for ri, row in enumerate(table.rows):
        name = taxonomy.match(row[0])
        if name is not None:
            matches.append((ri, name))
    classes_found = frozenset(name for _, name in matches)
    if not matches:
        return DiversificationFinding(frozenset(), 0, None)

    shares_by_class: dict[str, Decimal] | None = None
    for ci in range(1, table.column_count):
        values = []
        for ri, name in matches:
            v = _parse_share(table.rows[ri][ci])
            if v is None:
                values = None
                break
            values.append((name, v))
        if not values:
            continue
        total = sum(v for _, v in values)
        if abs(total - 1) <= Decimal("0.05"):
            scale = Decimal(1)
        elif abs(total - 100) <= 5:
            scale = Decimal(100)
        else:
            continue
        shares_by_class = {}
        for name, v in values:
            shares_by_class[name] = shares_by_class.get(name, Decimal(0)) + v / scale
        break

    if shares_by_class is None:
        return DiversificationFinding(classes_found, len(classes_found), None)
    nonzero = sum(1 for share in shares_by_class.values() if share > 0)
    max_share = max(shares_by_class.values())
    return DiversificationFinding(classes_found, nonzero, float(max_share))


# ---------------------------------------------------------------------------
# Cashflow and projection rules


def _row_signed_value(cells: tuple[str, ...]) -> Decimal | None:
    """Rightmost signed numeric value in the given cells."""
    for cell in reversed(cells):
        values = extract_signed_numbers(cell)
        if values:
            return values[-1]
    return None


def cashflow_outcome(table: Table) -> tuple[str, Decimal | None]:
    """(net_sign, net_value) for a cashflow table.

    Prefers a row whose label matches the net lexicon, scanning bottom-up
    because net rows close the analysis; otherwise sums the last numeric
    column. A net of exactly zero counts as positive (the client is not worse
    off). No numeric cells at all gives ("unknown", None).
    """
    net_terms = _lexicons()["net"]
    for row in reversed(table.rows):
        if any(g in net_terms for g in _grams(row[0])):
            value = _row_signed_value(row[1:])
            if value is not None:
                return ("negative" if value < 0 else "positive", value)

    for ci in reversed(range(table.column_count)):
        column_values = []
        for row in table.rows:
            values = extract_signed_numbers(row[ci])
            if values:
                column_values.append(values[-1])
        if column_values:
            total = sum(column_values)
            return ("negative" if total < 0 else "positive", total)
    return ("unknown", None)


def projection_horizon(table: Table) -> int:
    """Span in years (last - first + 1) of the longest year series; 0 if none."""
    series = extract_year_series(list(table.header))
    for row in table.rows:
        series.extend(extract_year_series(list(row)))
    if not series:
        return 0
    best = max(series, key=lambda s: (s.span_years, len(s.years)))
    return best.span_years


__all__ = [
    "TABLE_TYPES",
    "FEATURE_NAMES",
    "LexiconHits",
    "TableFeatureVector",
    "table_features",
    "count_lexicon_hits",
    "TableTrainConfig",
    "TrainedTableModel",
    "train_table_classifier",
    "classify_table",
    "save_table_model",
    "load_table_model",
    "AssetTaxonomy",
    "taxonomy_from_entries",
    "load_taxonomy",
    "DiversificationFinding",
    "check_diversification",
    "cashflow_outcome",
    "projection_horizon",
]
