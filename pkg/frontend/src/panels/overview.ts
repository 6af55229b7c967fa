/** Overview panel: the 2D projection map.
 *
 * Density contours for the existing data (server KDE grid), proposals as
 * points, loading-vector biplot arrows, and dual color legends for the
 * subset vs global target range.  Everything numeric arrives in the view
 * bundle; this module only places it on screen.
 */

import { contours as d3contours } from "d3-contour";

import { EXISTING_BLUE, HIGHLIGHT_STROKE, PROPOSED_GRAY, targetColor } from "../color.js";
import { extent, linearScale, padded, type LinearScale } from "../scale.js";
import type { SessionStore } from "../store.js";
import type { SvgNode } from "../svg.js";

export interface OverviewOptions {
  width?: number;
  height?: number;
  /** contour level count; nothing downstream depends on it, 8 reads well */
  contourLevels?: number;
  colorByTarget?: boolean;
  colorRange?: "subset" | "global";
}

export interface OverviewPointMark {
  rowId: number;
  x: number;
  y: number;
  screenX: number;
  screenY: number;
  color: string;
  inSubset: boolean;
}

export interface OverviewProposalMark {
  id: number;
  x: number;
  y: number;
  screenX: number;
  screenY: number;
  color: string;
  status: string;
  highlighted: boolean;
  /** data-space motion of the last edit, when this proposal was the target */
  motion: { from: [number, number]; to: [number, number] } | null;
}

export interface LoadingArrow {
  variable: string;
  vector: [number, number];
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface OverviewScene {
  kind: "overview";
  width: number;
  height: number;
  highlightedId: number | null;
  contours: { threshold: number; path: string }[];
  points: OverviewPointMark[];
  proposals: OverviewProposalMark[];
  loadings: LoadingArrow[];
  legends: { subsetRange: [number, number]; globalRange: [number, number] };
  xScale: LinearScale;
  yScale: LinearScale;
  nodes: SvgNode[];
}

function contourPaths(
  grid: { x: number[]; y: number[]; density: number[][] },
  levels: number,
  sx: LinearScale,
  sy: LinearScale,
): { threshold: number; path: string }[] {
  const nx = grid.x.length;
  const ny = grid.y.length;
  if (nx < 2 || ny < 2) return [];
  // d3 wants a flat row-major array with x varying fastest
  const values = new Float64Array(nx * ny);
  let max = 0;
  for (let j = 0; j < ny; j++) {
    for (let i = 0; i < nx; i++) {
      const v = grid.density[i]?.[j] ?? 0;
      values[j * nx + i] = v;
      if (v > max) max = v;
    }
  }
  if (max <= 0) return [];
  const thresholds = Array.from({ length: levels }, (_, k) => (max * (k + 1)) / (levels + 1));
  const x0 = grid.x[0] as number;
  const y0 = grid.y[0] as number;
  const dx = (grid.x[1] as number) - x0;
  const dy = (grid.y[1] as number) - y0;
  const gen = d3contours().size([nx, ny]).thresholds(thresholds);
  const out: { threshold: number; path: string }[] = [];
  for (const poly of gen(values as unknown as number[])) {
    const parts: string[] = [];
    for (const polygon of poly.coordinates) {
      for (const ring of polygon) {
        const pts = ring.map(([gx, gy]) => {
          const px = sx(x0 + (gx as number) * dx);
          const py = sy(y0 + (gy as number) * dy);
          return `${String(px)},${String(py)}`;
        });
        if (pts.length) parts.push(`M${pts.join("L")}Z`);
      }
    }
    if (parts.length) out.push({ threshold: poly.value, path: parts.join("") });
  }
  return out;
}

export function buildOverviewScene(store: SessionStore, opts: OverviewOptions = {}): OverviewScene {
  const width = opts.width ?? 420;
  const height = opts.height ?? 420;
  const levels = opts.contourLevels ?? 8;
  const view = store.view;
  if (!view) throw new Error("no view bundle loaded");

  const xs: number[] = [];
  const ys: number[] = [];
  for (const [px, py] of view.points.projected) {
    xs.push(px);
    ys.push(py);
  }
  for (const p of store.proposals.values()) {
    if (p.projected) {
      xs.push(p.projected[0]);
      ys.push(p.projected[1]);
    }
  }
  if (view.kde) {
    xs.push(...view.kde.x);
    ys.push(...view.kde.y);
  }
  const sx = linearScale(padded(extent(xs)), [0, width]);
  const sy = linearScale(padded(extent(ys)), [height, 0]); // svg y grows downward

  const subsetTargets: number[] = [];
  const globalTargets: number[] = [];
  view.points.target.forEach((t, i) => {
    if (t === null) return;
    globalTargets.push(t);
    if (view.points.in_subset[i]) subsetTargets.push(t);
  });
  const subsetRange = extent(subsetTargets);
  const globalRange = extent(globalTargets);
  const range = opts.colorRange === "global" ? globalRange : subsetRange;

  const points: OverviewPointMark[] = view.points.projected.map(([px, py], i) => {
    const t = view.points.target[i] ?? null;
    return {
      rowId: i,
      x: px,
      y: py,
      screenX: sx(px),
      screenY: sy(py),
      color: opts.colorByTarget ? targetColor(t, range[0], range[1]) : EXISTING_BLUE,
      inSubset: view.points.in_subset[i] ?? true,
    };
  });

  const proposals: OverviewProposalMark[] = [];
  for (const p of [...store.proposals.values()].sort((a, b) => a.id - b.id)) {
    if (!p.projected) continue;
    const motion =
      store.lastEdit && store.lastEdit.proposalId === p.id
        ? { from: store.lastEdit.from, to: store.lastEdit.to }
        : null;
    proposals.push({
      id: p.id,
      x: p.projected[0],
      y: p.projected[1],
      screenX: sx(p.projected[0]),
      screenY: sy(p.projected[1]),
      color: p.status === "existing" ? EXISTING_BLUE : PROPOSED_GRAY,
      status: p.status,
      highlighted: store.selection === p.id,
      motion,
    });
  }

  // biplot arrows from the projected centroid, sized to a fixed fraction
  const cx = sx((sx.domain[0] + sx.domain[1]) / 2);
  const cy = sy((sy.domain[0] + sy.domain[1]) / 2);
  const arrowSpan = 0.35 * Math.min(width, height);
  const maxLen = Math.max(...view.pca.loading_vectors.map(([a, b]) => Math.hypot(a, b)), 1e-12);
  const inputNames = store.summary.variables.filter((v) => v.kind === "input").map((v) => v.name);
  const loadings: LoadingArrow[] = view.pca.loading_vectors.map(([lx, ly], j) => ({
    variable: inputNames[j] ?? `x${j + 1}`,
    vector: [lx, ly],
    x1: cx,
    y1: cy,
    x2: cx + (lx / maxLen) * arrowSpan,
    y2: cy - (ly / maxLen) * arrowSpan,
  }));

  const contourList = view.kde ? contourPaths(view.kde, levels, sx, sy) : [];
  const nodes: SvgNode[] = [];
  nodes.push({
    kind: "group",
    className: "contours",
    children: contourList.map((c) => ({
      kind: "path" as const,
      d: c.path,
      stroke: "#7f8fa6",
      strokeWidth: 1,
      opacity: 0.7,
      className: "contour",
    })),
  });
  nodes.push({
    kind: "group",
    className: "data-points",
    children: points.map((p) => ({
      kind: "circle" as const,
      cx: p.screenX,
      cy: p.screenY,
      r: 2,
      fill: p.color,
      className: p.inSubset ? "existing" : "existing filtered-out",
    })),
  });
  nodes.push({
    kind: "group",
    className: "loadings",
    children: loadings.map((a) => ({
      kind: "line" as const,
      x1: a.x1,
      y1: a.y1,
      x2: a.x2,
      y2: a.y2,
      stroke: "#444444",
      strokeWidth: 1.5,
      className: `loading-${a.variable}`,
    })),
  });
  const proposalNodes: SvgNode[] = [];
  for (const m of proposals) {
    if (m.motion) {
      proposalNodes.push({
        kind: "line",
        x1: sx(m.motion.from[0]),
        y1: sy(m.motion.from[1]),
        x2: sx(m.motion.to[0]),
        y2: sy(m.motion.to[1]),
        stroke: "#888888",
        strokeWidth: 1,
        dashed: true,
        className: "edit-trail",
      });
    }
    proposalNodes.push({
      kind: "circle",
      cx: m.screenX,
      cy: m.screenY,
      r: m.highlighted ? 6 : 4.5,
      fill: m.color,
      stroke: m.highlighted ? HIGHLIGHT_STROKE : undefined,
      strokeWidth: m.highlighted ? 2 : undefined,
      dataId: `overview-proposal-${m.id}`,
      className: m.highlighted ? "proposal selected" : "proposal",
    });
  }
  nodes.push({ kind: "group", className: "proposals", children: proposalNodes });

  return {
    kind: "overview",
    width,
    height,
    highlightedId: store.selection,
    contours: contourList,
    points,
    proposals,
    loadings,
    legends: { subsetRange, globalRange },
    xScale: sx,
    yScale: sy,
    nodes,
  };
}
