"""Auditor review workflow over the machine-produced goal-advice map.

State is event-sourced: the live ReviewState is always the fold of the audit
log over the machine baseline, and every event records the hash of the state
it produced, so replay doubles as an integrity check.

Links are never stored. They are re-derived from (goals, recommendations,
pins) with the same matcher the pipeline uses, so a merge or an added
recommendation updates the map exactly as the production scorer would, and a
relink pins one goal to one recommendation with an honestly computed
confidence (which may sit below the amber threshold; the pin records the
reviewer's judgment, not the scorer's).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import (
    AuditIntegrityError,
    InvalidActionError,
    SpanError,
    StaleStateError,
)
from .goals import GoalLink, MatchThresholds, map_goals, score_pair
from .model import Paragraph, SoaDocument
from .ratings import KRI_IDS

ACTION_KINDS = (
    "merge_goals",
    "delete_goal",
    "add_goal",
    "add_recommendation",
    "relink",
    "add_comment",
)
ROLES = ("auditor", "advisor")


@dataclass(frozen=True)
class Span:
    """Highlighted text range inside one paragraph block."""

    section: int
    block: int
    start: int
    end: int


@dataclass(frozen=True)
class ReviewAction:
    kind: str
    actor_role: str
    idempotency_key: str
    targets: tuple[str, ...] = ()
    span: Span | None = None
    comment: str | None = None
    kri_id: str | None = None
    expected_seq: int | None = None


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    timestamp: str
    actor_role: str
    action: dict
    state_hash: str


@dataclass(frozen=True)
class ReviewGoal:
    goal_id: str
    text: str
    source_ids: tuple[str, ...]


@dataclass(frozen=True)
class ReviewComment:
    kri_id: str
    actor_role: str
    text: str
    seq: int


@dataclass(frozen=True)
class ReviewState:
    document_id: str
    seq: int
    goals: tuple[ReviewGoal, ...]
    recommendations: tuple[tuple[str, str], ...]  # (id, text)
    pinned: tuple[tuple[str, str], ...] = ()  # (goal_id, recommendation_id)
    comments: tuple[ReviewComment, ...] = ()
    links: tuple[GoalLink, ...] = field(default=(), compare=False)


def action_to_dict(action: ReviewAction) -> dict:
    return {
        "kind": action.kind,
        "actor_role": action.actor_role,
        "idempotency_key": action.idempotency_key,
        "targets": list(action.targets),
        "span": None
        if action.span is None
        else {
            "section": action.span.section,
            "block": action.span.block,
            "start": action.span.start,
            "end": action.span.end,
        },
        "comment": action.comment,
        "kri_id": action.kri_id,
        "expected_seq": action.expected_seq,
    }


def action_from_dict(data: dict) -> ReviewAction:
    span = data.get("span")
    return ReviewAction(
        kind=data["kind"],
        actor_role=data["actor_role"],
        idempotency_key=data["idempotency_key"],
        targets=tuple(data.get("targets") or ()),
        span=None if span is None else Span(**span),
        comment=data.get("comment"),
        kri_id=data.get("kri_id"),
        expected_seq=data.get("expected_seq"),
    )


def event_to_dict(event: AuditEvent) -> dict:
    return {
        "seq": event.seq,
        "timestamp": event.timestamp,
        "actor_role": event.actor_role,
        "action": event.action,
        "state_hash": event.state_hash,
    }


def event_from_dict(data: dict) -> AuditEvent:
    return AuditEvent(
        seq=data["seq"],
        timestamp=data["timestamp"],
        actor_role=data["actor_role"],
        action=data["action"],
        state_hash=data["state_hash"],
    )


def state_to_dict(state: ReviewState) -> dict:
    return {
        "document_id": state.document_id,
        "seq": state.seq,
        "goals": [
            {"goal_id": g.goal_id, "text": g.text, "source_ids": list(g.source_ids)}
            for g in state.goals
        ],
        "recommendations": [
            {"recommendation_id": rid, "text": text} for rid, text in state.recommendations
        ],
        "links": [
            {
                "goal_id": ln.goal_id,
                "recommendation_id": ln.recommendation_id,
                "confidence": round(ln.confidence, 6),
            }
            for ln in state.links
        ],
        "pinned": [list(pair) for pair in state.pinned],
        "comments": [
            {"kri_id": c.kri_id, "actor_role": c.actor_role, "text": c.text, "seq": c.seq}
            for c in state.comments
        ],
    }


def state_hash(state: ReviewState) -> str:
    canonical = json.dumps(state_to_dict(state), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _derive_links(
    goals: tuple[ReviewGoal, ...],
    recommendations: tuple[tuple[str, str], ...],
    pinned: tuple[tuple[str, str], ...],
    thresholds: MatchThresholds,
) -> tuple[GoalLink, ...]:
    pins = dict(pinned)
    rec_text = dict(recommendations)
    unpinned = [(g.goal_id, g.text) for g in goals if g.goal_id not in pins]
    derived = {
        ln.goal_id: ln
        for ln in map_goals(unpinned, list(recommendations), thresholds).links
    }
    links = []
    for goal in goals:
        if goal.goal_id in pins:
            rec_id = pins[goal.goal_id]
            links.append(
                GoalLink(
                    goal_id=goal.goal_id,
                    recommendation_id=rec_id,
                    confidence=score_pair(goal.text, rec_text[rec_id]),
                )
            )
        elif goal.goal_id in derived:
            links.append(derived[goal.goal_id])
    return tuple(links)


def _with_links(state: ReviewState, thresholds: MatchThresholds) -> ReviewState:
    links = _derive_links(state.goals, state.recommendations, state.pinned, thresholds)
    return ReviewState(
        document_id=state.document_id,
        seq=state.seq,
        goals=state.goals,
        recommendations=state.recommendations,
        pinned=state.pinned,
        comments=state.comments,
        links=links,
    )


def baseline_state(
    document_id: str, advice_map: dict, thresholds: MatchThresholds | None = None
) -> ReviewState:
    """Machine output as the zero-event state. advice_map is the dict stored
    with the analysis (goals/recommendations/links)."""
    thresholds = thresholds or MatchThresholds()
    goals = tuple(
        ReviewGoal(goal_id=g["unit_id"], text=g["text"], source_ids=(g["unit_id"],))
        for g in advice_map["goals"]
    )
    recommendations = tuple((r["unit_id"], r["text"]) for r in advice_map["recommendations"])
    state = ReviewState(
        document_id=document_id, seq=0, goals=goals, recommendations=recommendations
    )
    return _with_links(state, thresholds)


def resolve_span(doc: SoaDocument, span: Span) -> str:
    if span.section < 0 or span.section >= len(doc.sections):
        raise SpanError(f"section {span.section} out of range")
    section = doc.sections[span.section]
    if span.block < 0 or span.block >= len(section.blocks):
        raise SpanError(f"block {span.block} out of range in section {span.section}")
    block = section.blocks[span.block]
    if not isinstance(block, Paragraph):
        raise SpanError("span must reference a paragraph block, not a table")
    if not (0 <= span.start < span.end <= len(block.text)):
        raise SpanError(
            f"span [{span.start}, {span.end}) outside paragraph of length {len(block.text)}"
        )
    return block.text[span.start : span.end]


def span_unit_id(document_id: str, span: Span) -> str:
    return f"{document_id}:s{span.section}:b{span.block}:c{span.start}-{span.end}"


def apply_action(
    doc: SoaDocument,
    state: ReviewState,
    action: ReviewAction,
    thresholds: MatchThresholds | None = None,
) -> ReviewState:
    """Pure transition: validates the action against the current state and
    returns the next state with seq advanced by one."""
    thresholds = thresholds or MatchThresholds()
    if action.kind not in ACTION_KINDS:
        raise InvalidActionError(f"unknown action kind '{action.kind}'")
    if action.actor_role not in ROLES:
        raise InvalidActionError(f"unknown actor role '{action.actor_role}'")
    if not action.idempotency_key:
        raise InvalidActionError("idempotency_key is required")

    goals = list(state.goals)
    recommendations = list(state.recommendations)
    pinned = dict(state.pinned)
    comments = list(state.comments)
    goal_ids = {g.goal_id for g in goals}
    rec_ids = {rid for rid, _ in recommendations}
    next_seq = state.seq + 1

    if action.kind == "merge_goals":
        if len(action.targets) != 2 or action.targets[0] == action.targets[1]:
            raise InvalidActionError("merge_goals needs two distinct goal ids")
        missing = [t for t in action.targets if t not in goal_ids]
        if missing:
            raise InvalidActionError(f"unknown goal ids: {missing}")
        first, second = sorted(action.targets)
        by_id = {g.goal_id: g for g in goals}
        a, b = by_id[first], by_id[second]
        merged = ReviewGoal(
            goal_id=first,
            text=f"{a.text} {b.text}",
            source_ids=tuple(sorted(set(a.source_ids) | set(b.source_ids))),
        )
        index = min(goals.index(a), goals.index(b))
        goals = [g for g in goals if g.goal_id not in (first, second)]
        goals.insert(index, merged)
        pinned.pop(first, None)
        pinned.pop(second, None)

    elif action.kind == "delete_goal":
        if len(action.targets) != 1:
            raise InvalidActionError("delete_goal needs exactly one goal id")
        target = action.targets[0]
        if target not in goal_ids:
            raise InvalidActionError(f"unknown goal id '{target}'")
        goals = [g for g in goals if g.goal_id != target]
        pinned.pop(target, None)

    elif action.kind in ("add_goal", "add_recommendation"):
        if action.span is None:
            raise InvalidActionError(f"{action.kind} needs a text span")
        text = resolve_span(doc, action.span).strip()
        if not text:
            raise InvalidActionError("highlighted span is blank")
        unit_id = span_unit_id(state.document_id, action.span)
        if action.kind == "add_goal":
            if unit_id in goal_ids:
                raise InvalidActionError(f"goal '{unit_id}' already exists")
            goals.append(ReviewGoal(goal_id=unit_id, text=text, source_ids=(unit_id,)))
        else:
            if unit_id in rec_ids:
                raise InvalidActionError(f"recommendation '{unit_id}' already exists")
            recommendations.append((unit_id, text))

    elif action.kind == "relink":
        if len(action.targets) != 2:
            raise InvalidActionError("relink needs (goal id, recommendation id)")
        goal_id, rec_id = action.targets
        if goal_id not in goal_ids:
            raise InvalidActionError(f"unknown goal id '{goal_id}'")
        if rec_id not in rec_ids:
            raise InvalidActionError(f"unknown recommendation id '{rec_id}'")
        pinned[goal_id] = rec_id

    elif action.kind == "add_comment":
        if action.kri_id not in KRI_IDS:
            raise InvalidActionError(f"unknown kri_id '{action.kri_id}'")
        if not (action.comment or "").strip():
            raise InvalidActionError("comment text is required")
        comments.append(
            ReviewComment(
                kri_id=action.kri_id,
                actor_role=action.actor_role,
                text=action.comment.strip(),
                seq=next_seq,
            )
        )

    next_state = ReviewState(
        document_id=state.document_id,
        seq=next_seq,
        goals=tuple(goals),
        recommendations=tuple(recommendations),
        pinned=tuple(sorted(pinned.items())),
        comments=tuple(comments),
    )
    return _with_links(next_state, thresholds)


def fold(
    doc: SoaDocument,
    baseline: ReviewState,
    events: list[AuditEvent],
    thresholds: MatchThresholds | None = None,
    verify: bool = True,
) -> ReviewState:
    """Replay events over the baseline. With verify on, every event's stored
    state hash and the gap-free sequence are checked."""
    state = baseline
    for event in events:
        if verify and event.seq != state.seq + 1:
            raise AuditIntegrityError(
                f"sequence gap: event {event.seq} after state {state.seq}"
            )
        state = apply_action(doc, state, action_from_dict(event.action), thresholds)
        if verify and state_hash(state) != event.state_hash:
            raise AuditIntegrityError(f"state hash mismatch at event {event.seq}")
    return state


class ReviewEngine:
    """Store-backed review sessions: submit actions, read state, replay."""

    def __init__(self, store, thresholds: MatchThresholds | None = None):
        self.store = store
        self.thresholds = thresholds or MatchThresholds()
        # document id -> (event count, folded state); valid because the log
        # is append-only, so a matching count means an identical prefix.
        self._cache: dict[str, tuple[int, ReviewState]] = {}

    def _baseline(self, document_id: str) -> ReviewState:
        analysis = self.store.get_analysis(document_id)
        if analysis is None:
            raise InvalidActionError(
                f"document '{document_id}' has no analysis; run analyze first"
            )
        return baseline_state(document_id, analysis["advice_map"], self.thresholds)

    def events(self, document_id: str) -> list[AuditEvent]:
        return [event_from_dict(e) for e in self.store.read_events(document_id)]

    def _folded(self, document_id: str, doc: SoaDocument, events: list[AuditEvent]) -> ReviewState:
        cached = self._cache.get(document_id)
        if cached is not None and cached[0] == len(events):
            return cached[1]
        if cached is not None and cached[0] < len(events):
            state = fold(doc, cached[1], events[cached[0] :], self.thresholds, verify=False)
        else:
            state = fold(doc, self._baseline(document_id), events, self.thresholds, verify=False)
        self._cache[document_id] = (len(events), state)
        return state

    def current_state(self, document_id: str) -> ReviewState:
        doc = self.store.get_document(document_id)
        return self._folded(document_id, doc, self.events(document_id))

    def submit(self, document_id: str, action: ReviewAction) -> tuple[ReviewState, AuditEvent, bool]:
        """Apply one action. Returns (state, event, created); a replayed
        idempotency key is a no-op returning the original event."""
        doc = self.store.get_document(document_id)
        events = self.events(document_id)
        state = self._folded(document_id, doc, events)
        for event in events:
            if event.action.get("idempotency_key") == action.idempotency_key:
                return state, event, False
        if action.expected_seq is not None and action.expected_seq != state.seq:
            raise StaleStateError(
                f"expected sequence {action.expected_seq}, document is at {state.seq}"
            )
        next_state = apply_action(doc, state, action, self.thresholds)
        event = AuditEvent(
            seq=next_state.seq,
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            actor_role=action.actor_role,
            action=action_to_dict(action),
            state_hash=state_hash(next_state),
        )
        self.store.append_event(document_id, event_to_dict(event))
        self.store.write_head(
            document_id, {"seq": event.seq, "state_hash": event.state_hash}
        )
        self._cache[document_id] = (len(events) + 1, next_state)
        return next_state, event, True

    def replay(self, document_id: str) -> ReviewState:
        """Full-integrity replay: hash chain, gap-free sequence, and head
        agreement. Raises AuditIntegrityError on any break."""
        doc = self.store.get_document(document_id)
        events = self.events(document_id)
        state = fold(doc, self._baseline(document_id), events, self.thresholds, verify=True)
        head = self.store.read_head(document_id)
        if head is not None:
            if head["seq"] != state.seq or head["state_hash"] != state_hash(state):
                raise AuditIntegrityError(
                    f"head records seq {head['seq']} but replay reached {state.seq}"
                )
        elif events:
            raise AuditIntegrityError("events present but head file missing")
        return state


__all__ = [
    "ACTION_KINDS",
    "ROLES",
    "Span",
    "ReviewAction",
    "AuditEvent",
    "ReviewGoal",
    "ReviewComment",
    "ReviewState",
    "action_to_dict",
    "action_from_dict",
    "event_to_dict",
    "event_from_dict",
    "state_to_dict",
    "state_hash",
    "baseline_state",
    "resolve_span",
    "span_unit_id",
    "apply_action",
    "fold",
    "ReviewEngine",
]
