// Pure projections from wire payloads to what the views render. Nothing in
// here touches the DOM or the network, so every rule (panel color, mapping
// band, audit row text) is testable without a browser or a server.

import type {
  Assessment,
  AuditEvent,
  AuditLog,
  EvidenceItem,
  MatchThresholds,
  ReviewState,
  RiskRating,
  Span,
} from "./types.js";
import type { DocumentUnit } from "./segmentation.js";

export const KRI_IDS = [
  "goal_advice",
  "diversification",
  "client_position",
  "cashflow",
  "starting_balance",
  "insurance",
] as const;

export type KriId = (typeof KRI_IDS)[number];

export const KRI_TITLES: Record<KriId, string> = {
  goal_advice: "Goals addressed by advice",
  diversification: "Diversification",
  client_position: "Client position",
  cashflow: "Cash flow",
  starting_balance: "Starting balance",
  insurance: "Insurance",
};

// The single source of panel and badge colors. Views must derive color
// through ratingColor so a rating can never render under the wrong color.
export const RATING_COLORS: Record<RiskRating, string> = {
  GREEN: "#1a7f37",
  AMBER: "#9a6700",
  RED: "#cf222e",
};

export function ratingColor(rating: RiskRating): string {
  return RATING_COLORS[rating];
}

/** Parse "key=value" evidence strings; later duplicates win, as on the server. */
export function valueMap(item: EvidenceItem): Record<string, string> {
  const out: Record<string, string> = {};
  for (const entry of item.values) {
    const split = entry.indexOf("=");
    if (split > 0) {
      out[entry.slice(0, split)] = entry.slice(split + 1);
    }
  }
  return out;
}

export interface EvidenceRowViewModel {
  /** Empty when the finding reports an absence ("no ... found"). */
  unitId: string;
  /** The unit's document text when the id resolves, otherwise "". */
  excerpt: string;
  note: string;
  values: string[];
  confidence: number | null;
  /** True when the unit id resolves to a position in the source pane. */
  canJump: boolean;
}

export interface PanelViewModel {
  kriId: KriId;
  title: string;
  rating: RiskRating;
  color: string;
  headline: string;
  evidence: EvidenceRowViewModel[];
}

function evidenceRow(item: EvidenceItem, unitsById: Map<string, DocumentUnit>): EvidenceRowViewModel {
  const unit = item.unit_id ? unitsById.get(item.unit_id) : undefined;
  const values = valueMap(item);
  const confidence = values["confidence"] !== undefined ? Number(values["confidence"]) : null;
  return {
    unitId: item.unit_id,
    excerpt: unit ? unit.text : "",
    note: item.note,
    values: item.values,
    confidence: confidence !== null && Number.isFinite(confidence) ? confidence : null,
    canJump: unit !== undefined,
  };
}

export function buildPanels(
  assessment: Assessment,
  unitsById: Map<string, DocumentUnit>,
): PanelViewModel[] {
  return KRI_IDS.map((kriId) => {
    const result = assessment.kri_results.find((r) => r.kri_id === kriId);
    if (!result) {
      throw new Error(`assessment for '${assessment.document_id}' is missing KRI '${kriId}'`);
    }
    const evidence = result.evidence.map((item) => evidenceRow(item, unitsById));
    return {
      kriId,
      title: KRI_TITLES[kriId],
      rating: result.rating,
      color: ratingColor(result.rating),
      headline: evidence.length > 0 ? evidence[0]!.note : "no evidence recorded",
      evidence,
    };
  });
}

export interface OverviewViewModel {
  documentId: string;
  panels: PanelViewModel[];
  overall: RiskRating;
  overallColor: string;
  score: number;
  policyHash: string;
}

export function buildOverview(
  assessment: Assessment,
  unitsById: Map<string, DocumentUnit>,
): OverviewViewModel {
  return {
    documentId: assessment.document_id,
    panels: buildPanels(assessment, unitsById),
    overall: assessment.overall,
    overallColor: ratingColor(assessment.overall),
    score: assessment.score,
    policyHash: assessment.policy_hash,
  };
}

export interface LinkedRecommendationViewModel {
  recommendationId: string;
  text: string;
  confidence: number;
  pinned: boolean;
}

export interface MappingRowViewModel {
  goalId: string;
  goalText: string;
  sourceIds: string[];
  linked: LinkedRecommendationViewModel[];
  band: RiskRating;
  bandColor: string;
}

/**
 * Per-goal band, same rule the server applies when rating goal coverage:
 * no link is RED, a link below green_min is AMBER, at or above is GREEN.
 * Thresholds come from the served review state, never from a local copy.
 */
export function goalBand(
  link: { confidence: number } | undefined,
  thresholds: MatchThresholds,
): RiskRating {
  if (!link) {
    return "RED";
  }
  return link.confidence >= thresholds.green_min ? "GREEN" : "AMBER";
}

export function buildMappingRows(state: ReviewState): MappingRowViewModel[] {
  const recText = new Map(state.recommendations.map((r) => [r.recommendation_id, r.text]));
  const pinnedGoals = new Set(state.pinned.map(([goalId]) => goalId));
  const linksByGoal = new Map(state.links.map((link) => [link.goal_id, link]));
  return state.goals.map((goal) => {
    const link = linksByGoal.get(goal.goal_id);
    const band = goalBand(link, state.thresholds);
    return {
      goalId: goal.goal_id,
      goalText: goal.text,
      sourceIds: goal.source_ids,
      linked: link
        ? [
            {
              recommendationId: link.recommendation_id,
              text: recText.get(link.recommendation_id) ?? "",
              confidence: link.confidence,
              pinned: pinnedGoals.has(goal.goal_id),
            },
          ]
        : [],
      band,
      bandColor: ratingColor(band),
    };
  });
}

export interface AuditRowViewModel {
  seq: number;
  timestamp: string;
  actorRole: string;
  kind: string;
  summary: string;
  stateHash: string;
}

function shorten(text: string, max = 80): string {
  return text.length <= max ? text : `${text.slice(0, max - 1)}…`;
}

export function describeAction(action: AuditEvent["action"]): string {
  const targets = Array.isArray(action["targets"]) ? (action["targets"] as string[]) : [];
  const span = (action["span"] as Span | null | undefined) ?? null;
  const spanText = span ? `s${span.section}:b${span.block} [${span.start}, ${span.end})` : "?";
  switch (action.kind) {
    case "merge_goals":
      return `merged goals ${targets.join(" + ")}`;
    case "delete_goal":
      return `deleted goal ${targets[0] ?? "?"}`;
    case "add_goal":
      return `added goal from ${spanText}`;
    case "add_recommendation":
      return `added recommendation from ${spanText}`;
    case "relink":
      return `pinned ${targets[0] ?? "?"} to ${targets[1] ?? "?"}`;
    case "add_comment": {
      const comment = typeof action["comment"] === "string" ? action["comment"] : "";
      return `commented on ${String(action["kri_id"] ?? "?")}: ${shorten(comment)}`;
    }
    default:
      return String(action.kind);
  }
}

export function buildAuditRows(log: AuditLog): AuditRowViewModel[] {
  return log.events.map((event) => ({
    seq: event.seq,
    timestamp: event.timestamp,
    actorRole: event.actor_role,
    kind: event.action.kind,
    summary: describeAction(event.action),
    stateHash: event.state_hash,
  }));
}
