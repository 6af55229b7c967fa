/** Client-side session mirror.
 *
 * Holds the last bundles the gateway sent plus UI state (selection,
 * brushes, filters).  Mutations from responses are "optimistic mirror":
 * the store applies what the server said happened, and the next view
 * refresh replaces everything authoritative.  dataset_version rides along
 * on every apply so writes can pin it.
 */

import type {
  Budget,
  EditResponse,
  NeighborsBundle,
  ParetoSnapshot,
  Phase,
  ProposalPayload,
  SearchResponse,
  SessionSummary,
  Thresholds,
  VerifyResponse,
  VerifyWarning,
  ViewBundle,
} from "./types.js";

export interface StoredProposal extends ProposalPayload {
  /** overview position; undefined until a view bundle has carried it */
  projected?: [number, number];
}

export interface EditMotion {
  proposalId: number;
  from: [number, number];
  to: [number, number];
  displacement: [number, number];
}

export class SessionStore {
  readonly sessionId: string;
  version: number;
  phase: Phase;
  apes: Record<string, number>;
  budget: Budget;
  thresholds: Thresholds;
  summary: SessionSummary;

  view: ViewBundle | null = null;
  pareto: ParetoSnapshot | null = null;
  neighbors: NeighborsBundle | null = null;

  proposals = new Map<number, StoredProposal>();
  selection: number | null = null;
  /** motion hint for the overview: where the last edit moved the point */
  lastEdit: EditMotion | null = null;
  recentlyVerified = new Set<number>();
  lastWarnings: VerifyWarning[] = [];

  brushes: Record<string, [number, number]> = {};
  neighborCount = 9;
  targetLo: number | null = null;
  targetHi: number | null = null;
  globalPca = true;
  strategy = "esa";
  batchSize = 50;

  constructor(summary: SessionSummary) {
    this.summary = summary;
    this.sessionId = summary.session_id;
    this.version = summary.dataset_version;
    this.phase = summary.phase;
    this.apes = summary.apes;
    this.budget = summary.budget;
    this.thresholds = summary.thresholds;
  }

  select(pid: number | null): void {
    if (pid !== null && !this.proposals.has(pid)) {
      throw new Error(`unknown proposal ${pid}`);
    }
    if (pid !== this.selection) this.lastEdit = null;
    this.selection = pid;
  }

  selectedProposal(): StoredProposal | null {
    return this.selection === null ? null : (this.proposals.get(this.selection) ?? null);
  }

  applySearch(resp: SearchResponse): void {
    this.version = resp.dataset_version;
    this.phase = resp.phase;
    for (const p of resp.proposals) {
      const prior = this.proposals.get(p.id);
      this.proposals.set(p.id, { ...p, projected: prior?.projected });
    }
  }

  applyEdit(resp: EditResponse): void {
    this.version = resp.dataset_version;
    const pid = resp.proposal.id;
    const prior = this.proposals.get(pid);
    const from = prior?.projected;
    let projected: [number, number] | undefined;
    if (from) {
      // place the point at from + displacement until the server reprojects
      projected = [from[0] + resp.displacement[0], from[1] + resp.displacement[1]];
      this.lastEdit = { proposalId: pid, from, to: projected, displacement: resp.displacement };
    }
    this.proposals.set(pid, { ...resp.proposal, projected });
  }

  applyVerify(resp: VerifyResponse): void {
    this.version = resp.dataset_version;
    this.phase = resp.phase;
    this.apes = resp.apes;
    this.budget = resp.budget;
    this.pareto = resp.pareto;
    this.lastWarnings = resp.warnings;
    this.recentlyVerified = new Set(resp.outcomes.map((o) => o.proposal_id));
    for (const o of resp.outcomes) {
      const p = this.proposals.get(o.proposal_id);
      if (p) {
        this.proposals.set(o.proposal_id, { ...p, status: "existing" });
      }
    }
  }

  applyView(v: ViewBundle): void {
    this.view = v;
    this.version = v.dataset_version;
    this.phase = v.phase;
    this.apes = v.apes;
    this.budget = v.budget;
    this.thresholds = v.thresholds;
    this.pareto = v.pareto;
    this.neighbors = v.neighbors ?? null;

    this.proposals.clear();
    for (const p of v.proposals) this.proposals.set(p.id, { ...p });
    if (this.selection !== null && !this.proposals.has(this.selection)) {
      this.selection = null;
    }
  }

  setBrush(variableIndex: number, lo: number, hi: number): void {
    this.brushes[String(variableIndex)] = [lo, hi];
  }

  clearBrush(variableIndex: number): void {
    delete this.brushes[String(variableIndex)];
  }
}
