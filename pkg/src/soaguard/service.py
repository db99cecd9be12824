"""HTTP review service: ingestion, analysis, review actions, audit log, CSV.

Role handling is a stub by design: the X-Role header selects auditor or
advisor, both of whose actions land in the same audit log.
"""

from __future__ import annotations

import threading
from collections import defaultdict

from fastapi import FastAPI, Header, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .aggregate import assessment_from_dict, rank_documents
from .errors import (
    AuditIntegrityError,
    DocumentParseError,
    DocumentValidationError,
    InvalidActionError,
    StaleStateError,
    UnknownDocumentError,
)
from .kris import KriPolicy, load_policy
from .model import document_from_dict, document_to_dict, serialize_document
from .pipeline import ModelBundle, analysis_to_dict, analyze_document
from .report import export_csv
from .review import ReviewAction, ReviewEngine, Span, event_to_dict, state_to_dict
from .schemas import (
    ActionRequest,
    ActionResponse,
    AuditLogResponse,
    DocumentListResponse,
    DocumentSummary,
    IngestResponse,
)
from .store import DocumentStore
from .tables import AssetTaxonomy, load_taxonomy

ROLE_HEADER = "X-Role"


def _role(value: str | None) -> str:
    role = (value or "auditor").strip().lower()
    if role not in ("auditor", "advisor"):
        raise InvalidActionError(f"unknown role '{value}'; expected auditor or advisor")
    return role


def create_app(
    store: DocumentStore | None = None,
    bundle: ModelBundle | None = None,
    policy: KriPolicy | None = None,
    taxonomy: AssetTaxonomy | None = None,
) -> FastAPI:
    store = store or DocumentStore()
    policy = policy or load_policy()
    taxonomy = taxonomy or load_taxonomy()
    engine = ReviewEngine(store, policy.thresholds)
    locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
    registry_lock = threading.Lock()

    def lock_for(document_id: str) -> threading.Lock:
        with registry_lock:
            return locks[document_id]

    app = FastAPI(title="soaguard review service")
    # The review UI is served as static files from wherever is convenient;
    # the API carries no cookies, so a wide-open CORS policy is safe here.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def error_response(status: int, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.exception_handler(UnknownDocumentError)
    async def _unknown(request: Request, exc: UnknownDocumentError):
        return error_response(404, exc)

    @app.exception_handler(StaleStateError)
    async def _stale(request: Request, exc: StaleStateError):
        return error_response(409, exc)

    @app.exception_handler(AuditIntegrityError)
    async def _integrity(request: Request, exc: AuditIntegrityError):
        return error_response(500, exc)

    for kind in (DocumentParseError, DocumentValidationError, InvalidActionError):

        @app.exception_handler(kind)
        async def _invalid(request: Request, exc: Exception):
            return error_response(422, exc)

    @app.post("/documents", response_model=IngestResponse)
    def ingest_document(body: dict) -> IngestResponse | JSONResponse:
        doc = document_from_dict(body)
        with lock_for(doc.id):
            if store.has_document(doc.id):
                existing = store.get_document_text(doc.id)
                if existing != serialize_document(doc):
                    return error_response(
                        409,
                        ValueError(f"document '{doc.id}' already exists with different content"),
                    )
            else:
                store.put_document(doc)
        return IngestResponse(document_id=doc.id)

    @app.post("/documents/{document_id}/analyze")
    def analyze(document_id: str) -> JSONResponse:
        if bundle is None:
            return error_response(503, RuntimeError("no models loaded; start with a model directory"))
        with lock_for(document_id):
            doc = store.get_document(document_id)
            result = analyze_document(doc, bundle, policy=policy, taxonomy=taxonomy)
            analysis = analysis_to_dict(result)
            previous = store.get_analysis(document_id)
            if previous is not None and store.read_events(document_id):
                unchanged = {k: previous.get(k) for k in ("assessment", "advice_map")} == {
                    "assessment": analysis["assessment"],
                    "advice_map": analysis["advice_map"],
                }
                if not unchanged:
                    raise StaleStateError(
                        f"document '{document_id}' has review events; refusing to "
                        "replace the assessment they were recorded against"
                    )
            store.put_analysis(document_id, analysis)
        return JSONResponse(analysis)

    @app.get("/documents/{document_id}/assessment")
    def get_assessment(document_id: str) -> JSONResponse:
        analysis = store.get_analysis(document_id)
        if analysis is None:
            raise UnknownDocumentError(f"document '{document_id}' has not been analyzed")
        return JSONResponse(analysis)

    @app.get("/documents/{document_id}")
    def get_document(document_id: str) -> JSONResponse:
        return JSONResponse(document_to_dict(store.get_document(document_id)))

    @app.get("/documents", response_model=DocumentListResponse)
    def list_documents(sort: str | None = None) -> DocumentListResponse:
        summaries = {}
        assessments = []
        for document_id in store.list_ids():
            analysis = store.get_analysis(document_id)
            if analysis is None:
                summaries[document_id] = DocumentSummary(document_id=document_id, analyzed=False)
            else:
                assessment = assessment_from_dict(analysis["assessment"])
                assessments.append(assessment)
                summaries[document_id] = DocumentSummary(
                    document_id=document_id,
                    analyzed=True,
                    overall=assessment.overall.value,
                    score=round(assessment.score, 6),
                    red_count=assessment.red_count,
                )
        if sort == "risk":
            ordered = [a.document_id for a in rank_documents(assessments)]
            ordered += [i for i in sorted(summaries) if not summaries[i].analyzed]
        else:
            ordered = sorted(summaries)
        return DocumentListResponse(documents=[summaries[i] for i in ordered])

    @app.post("/documents/{document_id}/actions", response_model=ActionResponse)
    def post_action(
        document_id: str,
        body: ActionRequest,
        x_role: str | None = Header(default=None, alias=ROLE_HEADER),
    ) -> ActionResponse:
        action = ReviewAction(
            kind=body.kind,
            actor_role=_role(x_role),
            idempotency_key=body.idempotency_key,
            targets=tuple(body.targets),
            span=None if body.span is None else Span(**body.span.model_dump()),
            comment=body.comment,
            kri_id=body.kri_id,
            expected_seq=body.expected_seq,
        )
        with lock_for(document_id):
            state, event, created = engine.submit(document_id, action)
        return ActionResponse(
            created=created, event=event_to_dict(event), state=state_to_dict(state)
        )

    @app.get("/documents/{document_id}/review-state")
    def get_review_state(document_id: str) -> JSONResponse:
        with lock_for(document_id):
            state = engine.current_state(document_id)
        payload = state_to_dict(state)
        # The UI colors its matching column from link confidences; handing it
        # the serving thresholds keeps that a mirror of server policy rather
        # than a second copy of it. Not part of the hashed state.
        payload["thresholds"] = {
            "green_min": engine.thresholds.green_min,
            "amber_min": engine.thresholds.amber_min,
        }
        return JSONResponse(payload)

    @app.get("/documents/{document_id}/audit-log", response_model=AuditLogResponse)
    def get_audit_log(document_id: str) -> AuditLogResponse:
        store.get_document(document_id)  # 404 for unknown ids
        events = [event_to_dict(e) for e in engine.events(document_id)]
        return AuditLogResponse(document_id=document_id, events=events)

    @app.get("/reports/batch.csv")
    def batch_csv() -> Response:
        assessments = []
        for document_id in store.list_ids():
            analysis = store.get_analysis(document_id)
            if analysis is not None:
                assessments.append(assessment_from_dict(analysis["assessment"]))
        return Response(content=export_csv(assessments), media_type="text/csv")

    return app


__all__ = ["create_app", "ROLE_HEADER"]
