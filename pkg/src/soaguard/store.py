"""Directory-per-document persistence.

Layout under the store root:

    {document_id}/document.json     canonical document
    {document_id}/assessment.json   analysis output (assessment, KRI evidence,
                                    goal-advice map baseline, timing)
    {document_id}/events.ndjson     append-only review events, one per line
    {document_id}/head.json         latest event sequence + state hash

The root comes from the constructor, else the SOAGUARD_DATA_DIR environment
variable, else ./soaguard-data.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path

from .errors import DocumentValidationError, UnknownDocumentError
from .model import SoaDocument, parse_document, serialize_document

_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")


def _check_id(document_id: str) -> str:
    if not _ID_RE.fullmatch(document_id or ""):
        raise DocumentValidationError(
            f"document id {document_id!r} is not storable; allowed: letters, digits, . _ -"
        )
    return document_id


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class DocumentStore:
    def __init__(self, root: str | Path | None = None):
        root = root or os.environ.get("SOAGUARD_DATA_DIR") or "soaguard-data"
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def document_dir(self, document_id: str) -> Path:
        return self.root / _check_id(document_id)

    def _existing_dir(self, document_id: str) -> Path:
        directory = self.document_dir(document_id)
        if not (directory / "document.json").exists():
            raise UnknownDocumentError(f"unknown document '{document_id}'")
        return directory

    # -- documents -----------------------------------------------------------

    def has_document(self, document_id: str) -> bool:
        try:
            directory = self.document_dir(document_id)
        except DocumentValidationError:
            return False
        return (directory / "document.json").exists()

    def put_document(self, doc: SoaDocument) -> None:
        directory = self.document_dir(doc.id)
        directory.mkdir(parents=True, exist_ok=True)
        _write_atomic(directory / "document.json", serialize_document(doc))

    def get_document(self, document_id: str) -> SoaDocument:
        path = self._existing_dir(document_id) / "document.json"
        return parse_document(path.read_text(encoding="utf-8"))

    def get_document_text(self, document_id: str) -> str:
        return (self._existing_dir(document_id) / "document.json").read_text(encoding="utf-8")

    def list_ids(self) -> list[str]:
        if not self.root.exists():
            return []
        return sorted(
            entry.name
            for entry in self.root.iterdir()
            if entry.is_dir() and (entry / "document.json").exists()
        )

    # -- analysis ------------------------------------------------------------

    def put_analysis(self, document_id: str, analysis: dict) -> None:
        directory = self._existing_dir(document_id)
        _write_atomic(directory / "assessment.json", json.dumps(analysis, indent=2) + "\n")

    def get_analysis(self, document_id: str) -> dict | None:
        path = self._existing_dir(document_id) / "assessment.json"
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    # -- review events -------------------------------------------------------

    def append_event(self, document_id: str, event: dict) -> None:
        directory = self._existing_dir(document_id)
        line = json.dumps(event, sort_keys=True, separators=(",", ":"))
        with open(directory / "events.ndjson", "a", encoding="utf-8") as handle:
            handle.write(line + "\n")

    def read_events(self, document_id: str) -> list[dict]:
        path = self._existing_dir(document_id) / "events.ndjson"
        if not path.exists():
            return []
        out = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    out.append(json.loads(line))
        return out

    def write_head(self, document_id: str, head: dict) -> None:
        directory = self._existing_dir(document_id)
        _write_atomic(directory / "head.json", json.dumps(head, sort_keys=True) + "\n")

    def read_head(self, document_id: str) -> dict | None:
        path = self._existing_dir(document_id) / "head.json"
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))


__all__ = ["DocumentStore"]
