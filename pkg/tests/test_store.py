"""Directory-per-document persistence for documents, analyses, and events."""

import json

import pytest

from soaguard.errors import DocumentValidationError, UnknownDocumentError
from soaguard.model import serialize_document
from soaguard.store import DocumentStore
from soaguard.synth import CorpusProfile, generate_document


@pytest.fixture()
def store(tmp_path):
    return DocumentStore(tmp_path)


@pytest.fixture()
def doc():
    document, _ = generate_document(CorpusProfile(name="store_fixture"), seed=77)
    return document


def test_document_round_trips_bytes(store, doc):
    store.put_document(doc)
    assert store.has_document(doc.id)
    assert store.get_document(doc.id) == doc
    assert store.get_document_text(doc.id) == serialize_document(doc)


def test_layout_is_a_directory_per_document(store, doc, tmp_path):
    store.put_document(doc)
    assert (tmp_path / doc.id / "document.json").exists()


def test_root_defaults_to_environment_then_cwd(tmp_path, monkeypatch):
    monkeypatch.setenv("SOAGUARD_DATA_DIR", str(tmp_path / "from-env"))
    assert DocumentStore().root == tmp_path / "from-env"
    monkeypatch.delenv("SOAGUARD_DATA_DIR")
    monkeypatch.chdir(tmp_path)
    assert DocumentStore().root.name == "soaguard-data"


@pytest.mark.parametrize("bad_id", ["", "a/b", "../up", "a b", "dot..dot/"])
def test_hostile_document_ids_rejected(store, bad_id):
    with pytest.raises(DocumentValidationError):
        store.get_document(bad_id)
    assert store.has_document(bad_id) is False  # lookup form never raises


def test_unknown_document_raises(store):
    with pytest.raises(UnknownDocumentError):
        store.get_document("soa-00000000")
    with pytest.raises(UnknownDocumentError):
        store.read_events("soa-00000000")


def test_list_ids_sorted_and_ignores_strays(store, doc, tmp_path):
    store.put_document(doc)
    other, _ = generate_document(CorpusProfile(name="another"), seed=3)
    store.put_document(other)
    (tmp_path / "zz-not-a-doc").mkdir()  # no document.json inside
    assert store.list_ids() == sorted([doc.id, other.id])


def test_analysis_round_trip(store, doc):
    store.put_document(doc)
    assert store.get_analysis(doc.id) is None
    payload = {"assessment": {"overall": "GREEN"}, "kri_results": []}
    store.put_analysis(doc.id, payload)
    assert store.get_analysis(doc.id) == payload


def test_events_append_in_order_with_head(store, doc):
    store.put_document(doc)
    assert store.read_events(doc.id) == []
    assert store.read_head(doc.id) is None
    events = [{"seq": i, "kind": "add_comment"} for i in range(1, 4)]
    for event in events:
        store.append_event(doc.id, event)
    assert store.read_events(doc.id) == events
    store.write_head(doc.id, {"seq": 3, "state_hash": "abc"})
    assert store.read_head(doc.id) == {"seq": 3, "state_hash": "abc"}


def test_events_are_compact_one_line_json(store, doc, tmp_path):
    store.put_document(doc)
    store.append_event(doc.id, {"seq": 1, "payload": {"a": 1}})
    raw = (tmp_path / doc.id / "events.ndjson").read_text()
    lines = raw.splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0]) == {"seq": 1, "payload": {"a": 1}}
    assert ": " not in lines[0]


def test_writes_are_atomic_no_temp_litter(store, doc, tmp_path):
    store.put_document(doc)
    store.put_analysis(doc.id, {"assessment": {}})
    leftovers = sorted(p.name for p in (tmp_path / doc.id).iterdir())
    assert leftovers == ["assessment.json", "document.json"]
