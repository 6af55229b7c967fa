/** Wire types mirroring the gateway's JSON bodies, field for field.
 *
 * The server is the single numeric source of truth; nothing here is
 * computed client-side beyond screen placement.
 */

export type Phase = "Initial" | "Developed" | "Expert";
export type Orientation = "maximize" | "minimize";
export type ProposalStatus = "proposed" | "existing";

export interface ObjectiveInfo {
  names: string[];
  orientations: Orientation[];
  bounds: [number, number][];
}

export interface VariableInfo {
  name: string;
  min: number;
  max: number;
  kind: "input" | "target";
}

export interface Budget {
  spent: number;
  cap: number;
}

export interface Thresholds {
  t1: number;
  t2: number;
}

export interface SessionSummary {
  session_id: string;
  dataset_version: number;
  rows: number;
  phase: Phase;
  apes: Record<string, number>;
  objectives: ObjectiveInfo;
  variables: VariableInfo[];
  budget: Budget;
  thresholds: Thresholds;
}

export interface SessionRequest {
  dataset: string;
  seed?: number;
  budget_cap?: number;
  t1?: number;
  t2?: number;
  objectives?: string[];
  train?: boolean;
}

export interface ProposalPayload {
  id: number;
  values: number[];
  targets: number[] | null;
  targets_estimated: boolean;
  status: ProposalStatus;
  provenance: string;
}

export interface SearchRequest {
  strategy?: string;
  batch_size?: number;
  seed?: number;
  dataset_version?: number;
  /** variable index -> [lo, hi], from PCP interval brushes */
  brushes?: Record<string, [number, number]>;
  esa?: Record<string, number>;
}

export interface SearchResponse {
  dataset_version: number;
  phase: Phase;
  proposal_ids: number[];
  proposals: ProposalPayload[];
}

export interface JobStatus {
  status: "running" | "done" | "failed";
  result: SearchResponse | null;
  error: string | null;
}

export interface EditResponse {
  dataset_version: number;
  proposal: ProposalPayload;
  /** 2D overview displacement, the sum of loading-vector moves */
  displacement: [number, number];
}

export interface VerifyOutcome {
  proposal_id: number;
  front_expanded: boolean;
  area_before: number;
  area_after: number;
}

export interface VerifyWarning {
  proposal_id: number;
  note: string;
}

export interface ParetoSnapshot {
  existing_ids: number[];
  existing_values: [number, number][];
  proposed_ids: number[];
  proposed_values: [number, number][];
  /** indices into existing_values, best first objective first */
  front_existing: number[];
  /** indices into proposed_values */
  front_proposed: number[];
  dominance_area: number;
  budget_spent: number;
  budget_cap: number;
}

export interface VerifyResponse {
  dataset_version: number;
  outcomes: VerifyOutcome[];
  warnings: VerifyWarning[];
  phase: Phase;
  apes: Record<string, number>;
  budget: Budget;
  pareto: ParetoSnapshot;
}

export interface PcaBundle {
  mean: number[];
  components: number[][];
  explained_variance_ratio: number[];
  /** (component, ratio, cumulative) triples */
  scree: [number, number, number][];
  /** one [x, y] arrow per input variable, rows of components transposed */
  loading_vectors: [number, number][];
}

export interface PointsBundle {
  projected: [number, number][];
  in_subset: boolean[];
  target: (number | null)[];
  provenance: string[];
}

export interface KdeGrid {
  x: number[];
  y: number[];
  /** density[i][j] evaluated at (x[i], y[j]) */
  density: number[][];
  cell_area: number;
  mass: number;
  bandwidth_factor: number;
}

export interface AxisSummary {
  variable: string;
  /** bin edges, length bins + 1 */
  bins: number[];
  /** per-bin density, normalized so the max is 1 */
  density: number[];
  /** per-bin mean target, min-max rescaled; null for empty bins */
  correlation: (number | null)[];
}

export interface NeighborsBundle {
  proposal_id: number;
  row_ids: number[];
  embedded: [number, number][];
  distances: number[];
  gram_trace_fraction: number;
}

export interface ViewProposal extends ProposalPayload {
  projected: [number, number];
}

export interface ViewBundle {
  dataset_version: number;
  phase: Phase;
  apes: Record<string, number>;
  thresholds: Thresholds;
  /** (dataset_version, worst APE percent) per retrain */
  error_history: [number, number][];
  pca: PcaBundle;
  points: PointsBundle;
  proposals: ViewProposal[];
  pareto: ParetoSnapshot;
  budget: Budget;
  kde: KdeGrid | null;
  axes: AxisSummary[];
  neighbors?: NeighborsBundle;
}

export interface ViewQuery {
  target_lo?: number;
  target_hi?: number;
  global_pca?: boolean;
  neighbor_pid?: number;
  k?: number;
  kde_bins?: number;
}
