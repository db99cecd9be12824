"""Request and response shapes for the HTTP service.

Only the service edge uses pydantic; core modules stay dataclass-based.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class SpanModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    section: int
    block: int
    start: int
    end: int


class ActionRequest(BaseModel):
    # A mistyped field on an audit action must fail loudly, not be dropped;
    # the actor role in particular travels in the X-Role header, and a body
    # field of that name would otherwise be ignored without a trace.
    model_config = ConfigDict(extra="forbid")

    kind: str
    idempotency_key: str = Field(min_length=1)
    targets: list[str] = Field(default_factory=list)
    span: SpanModel | None = None
    comment: str | None = None
    kri_id: str | None = None
    expected_seq: int | None = None


class ActionResponse(BaseModel):
    created: bool
    event: dict
    state: dict


class IngestResponse(BaseModel):
    document_id: str


class DocumentSummary(BaseModel):
    document_id: str
    analyzed: bool
    overall: str | None = None
    score: float | None = None
    red_count: int | None = None


class DocumentListResponse(BaseModel):
    documents: list[DocumentSummary]


class AuditLogResponse(BaseModel):
    document_id: str
    events: list[dict]


__all__ = [
    "SpanModel",
    "ActionRequest",
    "ActionResponse",
    "IngestResponse",
    "DocumentSummary",
    "DocumentListResponse",
    "AuditLogResponse",
]
