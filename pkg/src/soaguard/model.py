"""Canonical SoA document model: parsing, serialization, and data-unit enumeration.

The canonical on-disk form is a single JSON object:

    {"id": ..., "title": ..., "sections": [{"heading": ..., "blocks": [
        {"type": "paragraph", "text": ...} |
        {"type": "table", "caption": ..., "header": [...], "rows": [[...]]}
    ]}]}

Field names are bit-exact; unknown fields are rejected. Documents are immutable
after parse and safe to share across threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import DocumentParseError, DocumentValidationError, TableStructureError


@dataclass(frozen=True)
class Paragraph:
    text: str


@dataclass(frozen=True)
class Table:
    caption: str | None
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    @property
    def column_count(self) -> int:
        return len(self.header)

    @property
    def row_count(self) -> int:
        return len(self.rows)


Block = Paragraph | Table


@dataclass(frozen=True)
class Section:
    heading: str
    blocks: tuple[Block, ...]


@dataclass(frozen=True)
class SoaDocument:
    id: str
    title: str
    sections: tuple[Section, ...]


@dataclass(frozen=True)
class DataUnit:
    """One ratable unit: a single sentence or a whole table.

    unit_id is deterministic under re-parse: document id + section index +
    block index + sentence index (or a table marker).
    """

    unit_id: str
    kind: str  # "sentence" | "table"
    section: int
    block: int
    sentence: int | None
    text: str  # sentence text, or flattened caption+header text for tables
    table: Table | None = None


# Default abbreviation list for the sentence splitter; callers may extend it.
DEFAULT_ABBREVIATIONS = frozenset({"e.g.", "i.e.", "mr.", "mrs.", "ms.", "dr.", "no.", "etc."})

_TERMINALS = ".!?"

# A cell counts as numeric if it is entirely a (signed/percent/money) number.
_NUMERIC_CELL_RE = re.compile(
    r"\s*\(?\s*[-−]?\s*\$?\s*\d[\d,]*(?:\.\d+)?\s*%?\s*\)?\s*$"
)


def _cell_is_numeric(cell: str) -> bool:
    return bool(cell.strip()) and _NUMERIC_CELL_RE.fullmatch(cell) is not None


def split_sentence_spans(paragraph: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS) -> list[tuple[int, int]]:
    """Character spans of the sentences in ``paragraph``, in order.

    A boundary is a terminal ('.', '!', '?') followed by whitespace and an
    uppercase letter, except inside numbers ("$200,000.50") and after known
    abbreviations. Spans exclude surrounding whitespace; the text between and
    around spans is whitespace only, so concatenating the spans with their
    separators restores the paragraph exactly.
    """
    n = len(paragraph)
    boundaries: list[int] = []  # index one past the terminal character
    for i, ch in enumerate(paragraph):
        if ch not in _TERMINALS:
            continue
        if ch == ".":
            # decimal point inside a number is never a boundary
            if 0 < i < n - 1 and paragraph[i - 1].isdigit() and paragraph[i + 1].isdigit():
                continue
            # known abbreviation ending here ("e.g.", "Mr.")
            start = i
            while start > 0 and (paragraph[start - 1].isalpha() or paragraph[start - 1] == "."):
                start -= 1
            if paragraph[start : i + 1].lower() in abbreviations:
                continue
        j = i + 1
        while j < n and paragraph[j].isspace():
            j += 1
        if j == i + 1:
            continue  # terminal not followed by whitespace (and not end handled below)
        if j < n and paragraph[j].isupper():
            boundaries.append(i + 1)

    spans: list[tuple[int, int]] = []
    prev = 0
    for cut in boundaries + [n]:
        piece = paragraph[prev:cut]
        lead = len(piece) - len(piece.lstrip())
        trail = len(piece) - len(piece.rstrip())
        if prev + lead < cut - trail:
            spans.append((prev + lead, cut - trail))
        prev = cut
    return spans


def split_sentences(paragraph: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS) -> list[str]:
    """Split a nonempty paragraph into sentences. Never returns empty strings."""
    return [paragraph[a:b] for a, b in split_sentence_spans(paragraph, abbreviations)]


def flatten_table_text(table: Table) -> str:
    """Caption plus header cells as one string, for text classifiers over tables."""
    parts = []
    if table.caption:
        parts.append(table.caption)
    parts.extend(cell for cell in table.header if cell.strip())
    return " ".join(parts)


def enumerate_units(doc: SoaDocument) -> list[DataUnit]:
    """Every sentence and every table, exactly once, in document order."""
    units: list[DataUnit] = []
    for si, section in enumerate(doc.sections):
        for bi, block in enumerate(section.blocks):
            if isinstance(block, Paragraph):
                for ki, sentence in enumerate(split_sentences(block.text)):
                    units.append(
                        DataUnit(
                            unit_id=f"{doc.id}:s{si}:b{bi}:u{ki}",
                            kind="sentence",
                            section=si,
                            block=bi,
                            sentence=ki,
                            text=sentence,
                        )
                    )
            else:
                units.append(
                    DataUnit(
                        unit_id=f"{doc.id}:s{si}:b{bi}:table",
                        kind="table",
                        section=si,
                        block=bi,
                        sentence=None,
                        text=flatten_table_text(block),
                        table=block,
                    )
                )
    return units


def _reject_unknown(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise DocumentValidationError(f"unknown field(s) {sorted(unknown)} in {where}")


def _require(obj: dict, field: str, kind: type, where: str):
    if field not in obj:
        raise DocumentValidationError(f"missing field '{field}' in {where}")
    value = obj[field]
    if not isinstance(value, kind):
        raise DocumentValidationError(f"field '{field}' in {where} must be {kind.__name__}")
    return value


def _parse_table(obj: dict, where: str) -> Table:
    _reject_unknown(obj, {"type", "caption", "header", "rows"}, where)
    caption = obj.get("caption")
    if caption is not None and not isinstance(caption, str):
        raise DocumentValidationError(f"field 'caption' in {where} must be string or null")
    header = _require(obj, "header", list, where)
    rows = _require(obj, "rows", list, where)
    for name, seq in (("header", header), ("rows", rows)):
        for item in seq:
            if name == "header" and not isinstance(item, str):
                raise DocumentValidationError(f"header cells in {where} must be strings")
    parsed_rows = []
    for ri, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(c, str) for c in row):
            raise DocumentValidationError(f"row {ri} in {where} must be a list of strings")
        parsed_rows.append(tuple(row))

    if not header and not parsed_rows:
        raise TableStructureError(f"empty table in {where}")
    if not header:
        # headerless table: promote an all-text first row, else synthesize names
        first = parsed_rows[0]
        if all(not _cell_is_numeric(c) for c in first):
            header = list(first)
            parsed_rows = parsed_rows[1:]
        else:
            header = [f"col{i + 1}" for i in range(len(first))]
    arity = len(header)
    for ri, row in enumerate(parsed_rows):
        if len(row) != arity:
            raise TableStructureError(
                f"row {ri} of {where} has {len(row)} cells, header has {arity}"
            )
    return Table(caption=caption, header=tuple(header), rows=tuple(parsed_rows))


def document_from_dict(data: dict) -> SoaDocument:
    if not isinstance(data, dict):
        raise DocumentValidationError("document must be a JSON object")
    _reject_unknown(data, {"id", "title", "sections"}, "document")
    doc_id = _require(data, "id", str, "document")
    title = _require(data, "title", str, "document")
    raw_sections = _require(data, "sections", list, "document")
    if not doc_id.strip():
        raise DocumentValidationError("document id must be nonempty")
    if not raw_sections:
        raise DocumentValidationError("document must have at least one section")

    sections = []
    for si, sec in enumerate(raw_sections):
        where = f"section {si}"
        if not isinstance(sec, dict):
            raise DocumentValidationError(f"{where} must be an object")
        _reject_unknown(sec, {"heading", "blocks"}, where)
        heading = _require(sec, "heading", str, where)
        blocks_raw = _require(sec, "blocks", list, where)
        blocks: list[Block] = []
        for bi, blk in enumerate(blocks_raw):
            bwhere = f"{where} block {bi}"
            if not isinstance(blk, dict):
                raise DocumentValidationError(f"{bwhere} must be an object")
            btype = _require(blk, "type", str, bwhere)
            if btype == "paragraph":
                _reject_unknown(blk, {"type", "text"}, bwhere)
                text = _require(blk, "text", str, bwhere)
                if text.strip():
                    blocks.append(Paragraph(text=text))
                # paragraphs empty after trimming are dropped, not rejected
            elif btype == "table":
                table = _parse_table(blk, f"table at {bwhere}")
                blocks.append(table)
            else:
                raise DocumentValidationError(f"unknown block type '{btype}' in {bwhere}")
        sections.append(Section(heading=heading, blocks=tuple(blocks)))
    return SoaDocument(id=doc_id, title=title, sections=tuple(sections))


def parse_document(raw: bytes | str) -> SoaDocument:
    """Parse canonical-format bytes into an immutable SoaDocument.

    Parse of serialized output equals the original; malformed JSON reports
    line and column.
    """
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentParseError(f"not valid UTF-8: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return document_from_dict(data)


def document_to_dict(doc: SoaDocument) -> dict:
    sections = []
    for section in doc.sections:
        blocks = []
        for block in section.blocks:
            if isinstance(block, Paragraph):
                blocks.append({"type": "paragraph", "text": block.text})
            else:
                blocks.append(
                    {
                        "type": "table",
                        "caption": block.caption,
                        "header": list(block.header),
                        "rows": [list(row) for row in block.rows],
                    }
                )
        sections.append({"heading": section.heading, "blocks": blocks})
    return {"id": doc.id, "title": doc.title, "sections": sections}


def serialize_document(doc: SoaDocument) -> str:
    """Canonical serialization: parse(serialize(doc)) == doc, byte-stable."""
    return json.dumps(document_to_dict(doc), indent=2, ensure_ascii=False) + "\n"
