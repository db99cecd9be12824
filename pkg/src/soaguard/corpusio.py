"""Reading and writing corpora as document files plus truth sidecars."""

from __future__ import annotations

import json
from pathlib import Path

from .model import SoaDocument, parse_document, serialize_document
from .synth import GroundTruth, truth_from_dict, truth_to_dict


def write_corpus(corpus, directory: str | Path) -> list[Path]:
    """One {id}.json per document and one {id}.truth.json sidecar."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for doc, truth in corpus:
        doc_path = directory / f"{doc.id}.json"
        doc_path.write_text(serialize_document(doc), encoding="utf-8")
        truth_path = directory / f"{doc.id}.truth.json"
        truth_path.write_text(
            json.dumps(truth_to_dict(truth), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        written.extend([doc_path, truth_path])
    return written


def read_documents(directory: str | Path) -> list[SoaDocument]:
    directory = Path(directory)
    docs = []
    skip_suffixes = (".truth.json", ".assessment.json")
    for path in sorted(directory.glob("*.json")):
        if path.name == "run_manifest.json" or path.name.endswith(skip_suffixes):
            continue
        docs.append(parse_document(path.read_text(encoding="utf-8")))
    return docs


def read_corpus(directory: str | Path) -> list[tuple[SoaDocument, GroundTruth]]:
    """Pairs documents with their sidecars; documents lacking one are skipped."""
    directory = Path(directory)
    out = []
    for doc in read_documents(directory):
        sidecar = directory / f"{doc.id}.truth.json"
        if sidecar.exists():
            truth = truth_from_dict(json.loads(sidecar.read_text(encoding="utf-8")))
            out.append((doc, truth))
    return out


__all__ = ["write_corpus", "read_documents", "read_corpus"]
