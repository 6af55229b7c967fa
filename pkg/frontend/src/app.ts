/** Session orchestration: one store, one client, five panels.
 *
 * Interactions run through here so the linked views stay coupled: a
 * selection re-queries the neighbor embedding, an edit moves the overview
 * point by the gateway displacement, a verification refreshes everything
 * authoritative.  Writes pin the dataset version the store last saw; a
 * 409 from the gateway means the pin went stale and the caller should
 * refresh and retry.
 */

import type { GatewayClient } from "./client.js";
import { buildControlScene, type ControlScene } from "./panels/control.js";
import { buildNeighborScene, MIN_NEIGHBORS, type NeighborScene } from "./panels/neighbors.js";
import { buildOverviewScene, type OverviewOptions, type OverviewScene } from "./panels/overview.js";
import { buildPcpScene, type PcpScene } from "./panels/pcp.js";
import { buildProgressScene, verifyButtonState, type ProgressScene } from "./panels/progress.js";
import { SessionStore } from "./store.js";
import { renderSvg } from "./svg.js";
import type {
  EditResponse,
  SearchRequest,
  SearchResponse,
  SessionRequest,
  VerifyResponse,
  ViewQuery,
} from "./types.js";

export interface PanelScenes {
  overview: OverviewScene;
  pcp: PcpScene;
  neighbors: NeighborScene;
  progress: ProgressScene;
  control: ControlScene;
}

export class ConsoleApp {
  private constructor(
    readonly client: GatewayClient,
    readonly store: SessionStore,
  ) {}

  static async create(client: GatewayClient, req: SessionRequest): Promise<ConsoleApp> {
    const summary = await client.createSession(req);
    const app = new ConsoleApp(client, new SessionStore(summary));
    await app.refreshView();
    return app;
  }

  private viewQuery(): ViewQuery {
    const s = this.store;
    return {
      target_lo: s.targetLo ?? undefined,
      target_hi: s.targetHi ?? undefined,
      global_pca: s.globalPca,
      neighbor_pid: s.selection ?? undefined,
      k: s.neighborCount,
    };
  }

  /** Re-pull the authoritative bundle for the current UI state. */
  async refreshView(): Promise<void> {
    this.store.applyView(await this.client.view(this.store.sessionId, this.viewQuery()));
  }

  /** Select a proposal (or clear); the neighbor embedding follows it. */
  async select(pid: number | null): Promise<void> {
    this.store.select(pid);
    await this.refreshView();
  }

  async search(overrides: Partial<SearchRequest> = {}): Promise<SearchResponse> {
    const s = this.store;
    const resp = await this.client.search(s.sessionId, {
      strategy: s.strategy,
      batch_size: s.batchSize,
      dataset_version: s.version,
      brushes: Object.keys(s.brushes).length ? s.brushes : undefined,
      ...overrides,
    });
    s.applySearch(resp);
    await this.refreshView();
    return resp;
  }

  /** Long search through the job endpoint; same store effects as search. */
  async searchInBackground(overrides: Partial<SearchRequest> = {}): Promise<SearchResponse> {
    const s = this.store;
    const { job_id } = await this.client.submitSearchJob(s.sessionId, {
      strategy: s.strategy,
      batch_size: s.batchSize,
      dataset_version: s.version,
      ...overrides,
    });
    const resp = await this.client.waitForJob(s.sessionId, job_id);
    s.applySearch(resp);
    await this.refreshView();
    return resp;
  }

  /** PATCH one axis move for the selected proposal.
   *
   * Does not refresh the view: the overview point is placed at
   * old position + gateway displacement, which is exactly what the
   * rendering-fidelity invariant inspects.  The next refresh replaces it
   * with the server's reprojection of the same move.
   */
  async editSelected(component: number, delta: number): Promise<EditResponse> {
    const pid = this.store.selection;
    if (pid === null) throw new Error("no proposal selected");
    const resp = await this.client.editProposal(
      this.store.sessionId,
      pid,
      { [component]: delta },
      this.store.version,
    );
    this.store.applyEdit(resp);
    return resp;
  }

  /** Verify the selected proposal; refuses locally when the button is off. */
  async verifySelected(): Promise<VerifyResponse> {
    const button = verifyButtonState(this.store);
    if (!button.enabled) throw new Error(`verify disabled: ${button.reason}`);
    const pid = this.store.selection as number;
    const resp = await this.client.verify(this.store.sessionId, [pid], this.store.version);
    this.store.applyVerify(resp);
    await this.refreshView();
    return resp;
  }

  async setNeighborCount(k: number): Promise<void> {
    this.store.neighborCount = Math.max(MIN_NEIGHBORS, Math.floor(k));
    await this.refreshView();
  }

  async setTargetFilter(lo: number | null, hi: number | null): Promise<void> {
    this.store.targetLo = lo;
    this.store.targetHi = hi;
    await this.refreshView();
  }

  async setGlobalPca(on: boolean): Promise<void> {
    this.store.globalPca = on;
    await this.refreshView();
  }

  scenes(opts: { overview?: OverviewOptions } = {}): PanelScenes {
    return {
      overview: buildOverviewScene(this.store, opts.overview),
      pcp: buildPcpScene(this.store),
      neighbors: buildNeighborScene(this.store),
      progress: buildProgressScene(this.store),
      control: buildControlScene(this.store),
    };
  }

  /** Serialize every panel, ready to drop into a document. */
  renderAll(): Record<keyof PanelScenes, string> {
    const s = this.scenes();
    return {
      overview: renderSvg(s.overview.width, s.overview.height, s.overview.nodes),
      pcp: renderSvg(s.pcp.width, s.pcp.height, s.pcp.nodes),
      neighbors: renderSvg(s.neighbors.width, s.neighbors.height, s.neighbors.nodes),
      progress: renderSvg(s.progress.width, s.progress.height, s.progress.nodes),
      control: renderSvg(640, 100, s.control.nodes),
    };
  }
}
