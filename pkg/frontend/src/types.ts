// Shapes served by the review API. Field names follow the wire format
// exactly so payloads pass through without mapping layers.

export type RiskRating = "GREEN" | "AMBER" | "RED";

export type Role = "auditor" | "advisor";

export interface ParagraphBlock {
  type: "paragraph";
  text: string;
}

export interface TableBlock {
  type: "table";
  caption: string;
  header: string[];
  rows: string[][];
}

export type Block = ParagraphBlock | TableBlock;

export interface Section {
  heading: string;
  blocks: Block[];
}

export interface SoaDocument {
  id: string;
  title: string;
  sections: Section[];
}

export interface EvidenceItem {
  unit_id: string;
  note: string;
  values: string[];
}

export interface BalanceStatistics {
  count: number;
  mean: string;
  median: string;
  min: string;
  max: string;
}

export interface KriResult {
  kri_id: string;
  rating: RiskRating;
  evidence: EvidenceItem[];
  statistics?: BalanceStatistics;
}

export interface Assessment {
  document_id: string;
  overall: RiskRating;
  score: number;
  policy_hash: string;
  kri_results: KriResult[];
}

export interface AdviceMapEntry {
  unit_id: string;
  text: string;
}

export interface AdviceMap {
  goals: AdviceMapEntry[];
  recommendations: AdviceMapEntry[];
  links: GoalLink[];
  candidates: GoalLink[];
}

export interface Analysis {
  assessment: Assessment;
  advice_map: AdviceMap;
  kri_results: KriResult[];
  elapsed_ms?: number;
}

export interface ReviewGoal {
  goal_id: string;
  text: string;
  source_ids: string[];
}

export interface Recommendation {
  recommendation_id: string;
  text: string;
}

export interface GoalLink {
  goal_id: string;
  recommendation_id: string;
  confidence: number;
}

export interface ReviewComment {
  kri_id: string;
  actor_role: string;
  text: string;
  seq: number;
}

export interface MatchThresholds {
  green_min: number;
  amber_min: number;
}

export interface ReviewState {
  document_id: string;
  seq: number;
  goals: ReviewGoal[];
  recommendations: Recommendation[];
  links: GoalLink[];
  pinned: [string, string][];
  comments: ReviewComment[];
  thresholds: MatchThresholds;
}

export interface Span {
  section: number;
  block: number;
  start: number;
  end: number;
}

export type ActionKind =
  | "merge_goals"
  | "delete_goal"
  | "add_goal"
  | "add_recommendation"
  | "relink"
  | "add_comment";

export interface ReviewActionBody {
  kind: ActionKind;
  idempotency_key: string;
  targets?: string[];
  span?: Span;
  comment?: string;
  kri_id?: string;
  expected_seq?: number;
}

export interface AuditEvent {
  seq: number;
  timestamp: string;
  actor_role: string;
  action: Record<string, unknown> & { kind: string };
  state_hash: string;
}

export interface AuditLog {
  document_id: string;
  events: AuditEvent[];
}

export interface ActionResult {
  created: boolean;
  event: AuditEvent;
  state: Omit<ReviewState, "thresholds">;
}

export interface DocumentSummary {
  document_id: string;
  analyzed: boolean;
  overall: RiskRating | null;
  score: number | null;
  red_count: number | null;
}

export interface DocumentListing {
  documents: DocumentSummary[];
}
