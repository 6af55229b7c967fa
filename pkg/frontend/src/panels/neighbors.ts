/** Neighbor panel: the cos-MDS local embedding around the selected
 * proposal, agent pinned at the panel center, neighbors colored by their
 * target value.  The +/- control changes how many neighbors the next view
 * request asks for.
 */

import { HIGHLIGHT_STROKE, PROPOSED_GRAY, EXISTING_BLUE, targetColor } from "../color.js";
import { extent, linearScale } from "../scale.js";
import type { SessionStore } from "../store.js";
import type { SvgNode } from "../svg.js";

export const MIN_NEIGHBORS = 2; // embedding needs at least two points

export interface NeighborMark {
  rowId: number;
  x: number;
  y: number;
  screenX: number;
  screenY: number;
  distance: number;
  color: string;
}

export interface NeighborScene {
  kind: "neighbors";
  width: number;
  height: number;
  /** the proposal this embedding is centered on, or null when none */
  highlightedId: number | null;
  k: number;
  traceFraction: number | null;
  center: { screenX: number; screenY: number };
  neighbors: NeighborMark[];
  controls: { increase: boolean; decrease: boolean };
  nodes: SvgNode[];
}

export function buildNeighborScene(
  store: SessionStore,
  opts: { width?: number; height?: number } = {},
): NeighborScene {
  const width = opts.width ?? 300;
  const height = opts.height ?? 300;
  const cx = width / 2;
  const cy = height / 2;
  const nb = store.neighbors;

  const controls = {
    increase: nb !== null,
    decrease: nb !== null && store.neighborCount > MIN_NEIGHBORS,
  };

  if (!nb) {
    return {
      kind: "neighbors",
      width,
      height,
      highlightedId: null,
      k: store.neighborCount,
      traceFraction: null,
      center: { screenX: cx, screenY: cy },
      neighbors: [],
      controls,
      nodes: [],
    };
  }

  const maxR = Math.max(...nb.distances, 1e-12);
  const fit = (0.45 * Math.min(width, height)) / maxR;

  const targets = nb.row_ids.map((rid) => store.view?.points.target[rid] ?? null);
  const known = targets.filter((t): t is number => t !== null);
  const [lo, hi] = extent(known);

  const neighbors: NeighborMark[] = nb.embedded.map(([ex, ey], i) => ({
    rowId: nb.row_ids[i] as number,
    x: ex,
    y: ey,
    screenX: cx + ex * fit,
    screenY: cy - ey * fit,
    distance: nb.distances[i] as number,
    color: targetColor(targets[i] ?? null, lo, hi),
  }));

  const selected = store.selectedProposal();
  const centerColor = selected?.status === "existing" ? EXISTING_BLUE : PROPOSED_GRAY;

  const ringScale = linearScale([0, maxR], [0, 0.45 * Math.min(width, height)]);
  const rings: SvgNode[] = [0.5, 1.0].map((f) => ({
    kind: "circle" as const,
    cx,
    cy,
    r: ringScale(f * maxR),
    fill: "none",
    stroke: "#dddddd",
    className: "distance-ring",
  }));

  const nodes: SvgNode[] = [
    { kind: "group", className: "rings", children: rings },
    {
      kind: "group",
      className: "neighbor-points",
      children: neighbors.map((n) => ({
        kind: "circle" as const,
        cx: n.screenX,
        cy: n.screenY,
        r: 4,
        fill: n.color,
        dataId: `neighbor-row-${n.rowId}`,
        className: "neighbor",
      })),
    },
    {
      kind: "circle",
      cx,
      cy,
      r: 6,
      fill: centerColor,
      stroke: HIGHLIGHT_STROKE,
      strokeWidth: 2,
      dataId: `neighbors-proposal-${nb.proposal_id}`,
      className: "center selected",
    },
  ];

  return {
    kind: "neighbors",
    width,
    height,
    highlightedId: nb.proposal_id,
    k: nb.row_ids.length,
    traceFraction: nb.gram_trace_fraction,
    center: { screenX: cx, screenY: cy },
    neighbors,
    controls,
    nodes,
  };
}
