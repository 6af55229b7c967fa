/** Typed REST client for the gateway.  fetch is injectable so tests can
 * run against a canned transport; everything else goes over the wire.
 */

import type {
  EditResponse,
  JobStatus,
  SearchRequest,
  SearchResponse,
  SessionRequest,
  SessionSummary,
  VerifyResponse,
  ViewBundle,
  ViewQuery,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class GatewayError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`gateway ${status}: ${detail}`);
    this.name = "GatewayError";
  }
}

/** True for refusals worth reconciling (stale pin, budget) rather than surfacing. */
export function isConflict(err: unknown): err is GatewayError {
  return err instanceof GatewayError && err.status === 409;
}

const sleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

export class GatewayClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    query?: Record<string, string | number | boolean | undefined>,
  ): Promise<T> {
    let url = this.baseUrl.replace(/\/$/, "") + path;
    if (query) {
      const qs = Object.entries(query)
        .filter(([, v]) => v !== undefined)
        .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(String(v))}`)
        .join("&");
      if (qs) url += `?${qs}`;
    }
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const resp = await this.fetchFn(url, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const parsed = (await resp.json()) as { detail?: unknown };
        if (parsed.detail !== undefined) detail = JSON.stringify(parsed.detail).replace(/^"|"$/g, "");
      } catch {
        // non-JSON error body; statusText already set
      }
      throw new GatewayError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  createSession(req: SessionRequest): Promise<SessionSummary> {
    return this.request("POST", "/sessions", req);
  }

  getSession(sid: string): Promise<SessionSummary> {
    return this.request("GET", `/sessions/${sid}`);
  }

  search(sid: string, req: SearchRequest): Promise<SearchResponse> {
    return this.request("POST", `/sessions/${sid}/search`, req);
  }

  submitSearchJob(sid: string, req: SearchRequest): Promise<{ job_id: string }> {
    return this.request("POST", `/sessions/${sid}/search/jobs`, req);
  }

  pollJob(sid: string, jid: string): Promise<JobStatus> {
    return this.request("GET", `/sessions/${sid}/jobs/${jid}`);
  }

  /** Poll until the job settles; rejects on "failed" with the server error. */
  async waitForJob(
    sid: string,
    jid: string,
    opts: { intervalMs?: number; timeoutMs?: number } = {},
  ): Promise<SearchResponse> {
    const interval = opts.intervalMs ?? 150;
    const deadline = Date.now() + (opts.timeoutMs ?? 30_000);
    for (;;) {
      const job = await this.pollJob(sid, jid);
      if (job.status === "done" && job.result) return job.result;
      if (job.status === "failed") throw new GatewayError(500, job.error ?? "search job failed");
      if (Date.now() > deadline) throw new GatewayError(504, `job ${jid} still running`);
      await sleep(interval);
    }
  }

  editProposal(
    sid: string,
    pid: number,
    deltas: Record<number, number>,
    datasetVersion?: number,
  ): Promise<EditResponse> {
    const wire: Record<string, number> = {};
    for (const [k, v] of Object.entries(deltas)) wire[k] = v;
    return this.request("PATCH", `/sessions/${sid}/proposals/${pid}`, {
      dataset_version: datasetVersion,
      deltas: wire,
    });
  }

  verify(sid: string, pids: number[], datasetVersion?: number): Promise<VerifyResponse> {
    return this.request("POST", `/sessions/${sid}/verify`, {
      proposal_ids: pids,
      dataset_version: datasetVersion,
    });
  }

  view(sid: string, q: ViewQuery = {}): Promise<ViewBundle> {
    return this.request("GET", `/sessions/${sid}/view`, undefined, {
      target_lo: q.target_lo,
      target_hi: q.target_hi,
      global_pca: q.global_pca,
      neighbor_pid: q.neighbor_pid,
      k: q.k,
      kde_bins: q.kde_bins,
    });
  }
}
