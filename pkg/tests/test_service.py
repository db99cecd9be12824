"""HTTP service flows over a shared store: ingest, analyze, review, export."""

import dataclasses

import pytest
from fastapi.testclient import TestClient

from soaguard.kris import KriPolicy
from soaguard.model import document_to_dict
from soaguard.service import ROLE_HEADER, create_app
from soaguard.store import DocumentStore
from soaguard.synth import CorpusProfile, generate_document

GREEN_PROFILE = CorpusProfile(name="svc_green")
RED_PROFILE = CorpusProfile(name="svc_red", matched_pairs=0)  # no goals: high-sig RED


@pytest.fixture(scope="module")
def service(bundle, tmp_path_factory):
    root = tmp_path_factory.mktemp("service-store")
    store = DocumentStore(root)
    client = TestClient(create_app(store=store, bundle=bundle))
    return client, store


def _ingest(client, profile, seed):
    doc, _ = generate_document(profile, seed=seed)
    response = client.post("/documents", json=document_to_dict(doc))
    assert response.status_code == 200, response.text
    assert response.json() == {"document_id": doc.id}
    return doc


def test_ingest_then_fetch_round_trip(service):
    client, _ = service
    doc = _ingest(client, GREEN_PROFILE, seed=100)
    fetched = client.get(f"/documents/{doc.id}")
    assert fetched.status_code == 200
    assert fetched.json() == document_to_dict(doc)


def test_reingest_identical_is_ok_but_divergent_conflicts(service):
    client, _ = service
    doc = _ingest(client, GREEN_PROFILE, seed=101)
    again = client.post("/documents", json=document_to_dict(doc))
    assert again.status_code == 200
    mutated = document_to_dict(doc)
    mutated["title"] = "Edited offline"
    conflict = client.post("/documents", json=mutated)
    assert conflict.status_code == 409
    assert "different content" in conflict.json()["detail"]


def test_malformed_document_rejected(service):
    client, _ = service
    response = client.post("/documents", json={"id": "x", "unexpected": True})
    assert response.status_code == 422


def test_analyze_and_read_assessment(service):
    client, _ = service
    doc = _ingest(client, GREEN_PROFILE, seed=102)
    analysis = client.post(f"/documents/{doc.id}/analyze")
    assert analysis.status_code == 200
    body = analysis.json()
    assert set(body) == {"assessment", "kri_results", "advice_map", "elapsed_ms"}
    assert body["assessment"]["overall"] == "GREEN"
    stored = client.get(f"/documents/{doc.id}/assessment")
    assert stored.status_code == 200
    assert stored.json()["assessment"] == body["assessment"]


def test_assessment_before_analysis_is_404(service):
    client, _ = service
    doc = _ingest(client, GREEN_PROFILE, seed=103)
    response = client.get(f"/documents/{doc.id}/assessment")
    assert response.status_code == 404
    assert "not been analyzed" in response.json()["detail"]


def test_unknown_document_is_404(service):
    client, _ = service
    assert client.get("/documents/soa-99999999").status_code == 404
    assert client.post("/documents/soa-99999999/analyze").status_code == 404
    assert client.get("/documents/soa-99999999/audit-log").status_code == 404


def test_analyze_without_models_is_503(tmp_path):
    client = TestClient(create_app(store=DocumentStore(tmp_path)))
    response = client.post("/documents/anything/analyze")
    assert response.status_code == 503
    assert "no models" in response.json()["detail"]


def test_listing_reports_analysis_status_and_risk_order(service):
    client, _ = service
    green = _ingest(client, GREEN_PROFILE, seed=104)
    red = _ingest(client, RED_PROFILE, seed=105)
    pending = _ingest(client, GREEN_PROFILE, seed=106)
    for doc in (green, red):
        assert client.post(f"/documents/{doc.id}/analyze").status_code == 200

    listing = {d["document_id"]: d for d in client.get("/documents").json()["documents"]}
    assert listing[green.id]["analyzed"] is True
    assert listing[green.id]["overall"] == "GREEN"
    assert listing[red.id]["overall"] == "RED"
    assert listing[pending.id]["analyzed"] is False
    assert listing[pending.id]["overall"] is None

    by_risk = [d["document_id"] for d in client.get("/documents?sort=risk").json()["documents"]]
    assert by_risk.index(red.id) < by_risk.index(green.id)
    analyzed_ids = {i for i, d in listing.items() if d["analyzed"]}
    # Unanalyzed documents trail every analyzed one.
    first_pending = min(by_risk.index(i) for i in listing if i not in analyzed_ids)
    assert all(by_risk.index(i) < first_pending for i in analyzed_ids)


def _analyzed_doc(client, seed):
    doc = _ingest(client, GREEN_PROFILE, seed=seed)
    assert client.post(f"/documents/{doc.id}/analyze").status_code == 200
    return doc


def test_action_flow_with_roles_and_idempotency(service):
    client, _ = service
    doc = _analyzed_doc(client, seed=107)
    payload = {
        "kind": "add_comment",
        "idempotency_key": "svc-c1",
        "kri_id": "cashflow",
        "comment": "please confirm the buffer",
    }
    first = client.post(
        f"/documents/{doc.id}/actions", json=payload, headers={ROLE_HEADER: "advisor"}
    )
    assert first.status_code == 200
    body = first.json()
    assert body["created"] is True
    assert body["event"]["actor_role"] == "advisor"
    assert body["state"]["seq"] == 1
    assert body["state"]["comments"][0]["text"] == "please confirm the buffer"

    replay = client.post(
        f"/documents/{doc.id}/actions", json=payload, headers={ROLE_HEADER: "advisor"}
    )
    assert replay.status_code == 200
    assert replay.json()["created"] is False
    assert replay.json()["event"] == body["event"]

    log = client.get(f"/documents/{doc.id}/audit-log").json()
    assert log["document_id"] == doc.id
    assert len(log["events"]) == 1


def test_default_role_is_auditor_and_bad_roles_rejected(service):
    client, _ = service
    doc = _analyzed_doc(client, seed=108)
    payload = {
        "kind": "add_comment",
        "idempotency_key": "svc-r1",
        "kri_id": "insurance",
        "comment": "needs cover",
    }
    response = client.post(f"/documents/{doc.id}/actions", json=payload)
    assert response.status_code == 200
    assert response.json()["event"]["actor_role"] == "auditor"
    bad = client.post(
        f"/documents/{doc.id}/actions",
        json={**payload, "idempotency_key": "svc-r2"},
        headers={ROLE_HEADER: "intruder"},
    )
    assert bad.status_code == 422


def test_unknown_action_body_field_is_rejected_not_dropped(service):
    # The role travels in the X-Role header; a body field named actor_role
    # must not be silently discarded while the action lands as "auditor".
    client, _ = service
    doc = _analyzed_doc(client, seed=109)
    response = client.post(
        f"/documents/{doc.id}/actions",
        json={
            "kind": "add_comment",
            "idempotency_key": "svc-extra1",
            "kri_id": "insurance",
            "comment": "needs cover",
            "actor_role": "advisor",
        },
    )
    assert response.status_code == 422
    log = client.get(f"/documents/{doc.id}/audit-log").json()
    assert log["events"] == []


def test_invalid_action_is_422(service):
    client, _ = service
    doc = _analyzed_doc(client, seed=109)
    response = client.post(
        f"/documents/{doc.id}/actions",
        json={"kind": "add_comment", "idempotency_key": "svc-x", "kri_id": "vibes", "comment": "?"},
    )
    assert response.status_code == 422


def test_stale_expected_seq_is_409(service):
    client, _ = service
    doc = _analyzed_doc(client, seed=110)
    base = {"kind": "add_comment", "kri_id": "cashflow", "comment": "note"}
    ok = client.post(
        f"/documents/{doc.id}/actions",
        json={**base, "idempotency_key": "svc-s1", "expected_seq": 0},
    )
    assert ok.status_code == 200
    stale = client.post(
        f"/documents/{doc.id}/actions",
        json={**base, "idempotency_key": "svc-s2", "expected_seq": 0},
    )
    assert stale.status_code == 409


def test_review_state_endpoint_tracks_actions(service):
    client, _ = service
    doc = _analyzed_doc(client, seed=111)
    initial = client.get(f"/documents/{doc.id}/review-state").json()
    assert initial["seq"] == 0
    assert initial["goals"] and initial["recommendations"]
    assert initial["thresholds"] == {"green_min": 0.75, "amber_min": 0.40}
    client.post(
        f"/documents/{doc.id}/actions",
        json={
            "kind": "delete_goal",
            "idempotency_key": "svc-d1",
            "targets": [initial["goals"][0]["goal_id"]],
        },
    )
    after = client.get(f"/documents/{doc.id}/review-state").json()
    assert after["seq"] == 1
    assert len(after["goals"]) == len(initial["goals"]) - 1


def test_reanalysis_with_review_events_conflicts_when_policy_moved(service, bundle):
    client, store = service
    doc = _analyzed_doc(client, seed=112)
    client.post(
        f"/documents/{doc.id}/actions",
        json={
            "kind": "add_comment",
            "idempotency_key": "svc-p1",
            "kri_id": "cashflow",
            "comment": "recorded against this assessment",
        },
    )
    # Same analysis again: fine, the events still describe what is stored.
    assert client.post(f"/documents/{doc.id}/analyze").status_code == 200
    # A drifted policy would silently invalidate the recorded review: refuse.
    drifted = TestClient(
        create_app(store=store, bundle=bundle, policy=KriPolicy(horizon_years_min=12))
    )
    conflict = drifted.post(f"/documents/{doc.id}/analyze")
    assert conflict.status_code == 409
    assert "review events" in conflict.json()["detail"]


def test_csv_export_covers_analyzed_documents(service):
    client, store = service
    response = client.get("/reports/batch.csv")
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/csv")
    lines = response.text.splitlines()
    assert lines[0].startswith("document_id,overall,")
    analyzed = {i for i in store.list_ids() if store.get_analysis(i) is not None}
    assert {line.split(",")[0] for line in lines[1:]} == analyzed
