// Shapes of the JSON payloads served by the session API.  Rate-like values
// (fpr, arp, similarity) arrive as fixed 6-decimal strings and must be
// rendered verbatim; the exact integer fields exist for consumers that need
// lossless arithmetic, which this UI never performs.

export interface FractionDict {
  num: number;
  den: number;
}

export interface CandidateDict {
  id: string;
  name: string;
  protected_value: string;
  attributes: Record<string, number | string>;
}

export interface DatasetDict {
  protected_attribute: string;
  candidates: CandidateDict[];
  groups: Record<string, string[]>;
}

export type RankingKind = "base" | "consensus" | "edited";

export interface RankingDict {
  id: string;
  label: string;
  kind: RankingKind;
  order: string[];
}

export interface GroupAuditDict {
  fpr: string;
  wins: number;
  mixed_pair_count: number;
  positions: number[];
  histogram: number[];
}

export interface ReportDict {
  ranking_id: string;
  per_group: Record<string, GroupAuditDict>;
  arp: string;
  arp_exact: FractionDict;
  extreme_groups: string[];
}

export interface MatrixDict {
  ranking_ids: string[];
  kt: number[][];
  similarity: string[][];
}

export interface SwapDict {
  position: number;
  id_up: string;
  id_down: string;
}

export interface ConsensusDict {
  ranking: RankingDict;
  achieved_arp: string | null;
  achieved_arp_exact: FractionDict | null;
  feasible: boolean;
  threshold_used: number;
  copeland_scores: Record<string, number>;
  swap_trace: SwapDict[];
  total_kt_cost: number;
}

export interface SessionDict {
  schema: number;
  id: string;
  created_at: string;
  updated_at: string;
  bins: number;
  gen_counter: number;
  t_effective_min: number;
  dataset: DatasetDict;
  base_rankings: RankingDict[];
  generated: ConsensusDict[];
  pinned_ids: string[];
  audit_cache: Record<string, ReportDict>;
}

export interface CreateSessionResponse {
  schema: number;
  session_id: string;
  session: SessionDict;
  audits: Record<string, ReportDict>;
  similarity: MatrixDict;
}

export interface SessionResponse {
  schema: number;
  session: SessionDict;
}

export interface SimilarityResponse {
  schema: number;
  similarity: MatrixDict;
}

export interface ConsensusResponse {
  schema: number;
  result: ConsensusDict;
  report: ReportDict;
  similarity: MatrixDict;
  slider: { t_effective_min: number };
}

export interface EditResponse {
  schema: number;
  ranking: RankingDict;
  report: ReportDict;
  result: ConsensusDict;
  similarity: MatrixDict;
  changed: boolean;
}

export interface PinResponse {
  schema: number;
  pinned_ids: string[];
}

export interface DeleteResponse {
  schema: number;
  deleted: string;
  session: SessionDict;
}

export interface ErrorBody {
  code: string;
  message: string;
  detail: Record<string, unknown>;
}

export interface ErrorEnvelope {
  schema: number;
  error: ErrorBody;
}

export interface CreateSessionRequest {
  protected: string;
  candidates_csv: string;
  scores_csv?: string;
  rankings_csv?: string;
  bins?: number;
}
