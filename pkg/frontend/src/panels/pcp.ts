/** Parallel-coordinates editor.
 *
 * One vertical axis per input variable with the server's scented bars
 * (density on the left, target correlation on the right), proposal
 * polylines (dashed while proposed, solid once existing), draggable
 * handles on the selected proposal, and interval brushes that feed search
 * requests.  Values are normalized to the unit box, so every axis runs
 * [0, 1].
 */

import { HIGHLIGHT_STROKE, MISSING_GRAY, PROPOSED_GRAY, EXISTING_BLUE, targetColor } from "../color.js";
import { linearScale, type LinearScale } from "../scale.js";
import type { SessionStore } from "../store.js";
import type { SvgNode } from "../svg.js";

export interface PcpOptions {
  width?: number;
  height?: number;
  /** scented bar thickness in px */
  barWidth?: number;
}

export interface PcpAxis {
  index: number;
  variable: string;
  screenX: number;
  density: { y0: number; y1: number; width: number; value: number }[];
  correlation: { y0: number; y1: number; color: string; value: number | null }[];
  brush: { lo: number; hi: number; screenY0: number; screenY1: number } | null;
}

export interface PcpPolyline {
  id: number;
  status: string;
  dashed: boolean;
  highlighted: boolean;
  values: number[];
  screenPoints: [number, number][];
}

export interface PcpHandle {
  axisIndex: number;
  variable: string;
  screenX: number;
  screenY: number;
  value: number;
}

export interface PcpScene {
  kind: "pcp";
  width: number;
  height: number;
  highlightedId: number | null;
  axes: PcpAxis[];
  polylines: PcpPolyline[];
  handles: PcpHandle[];
  yScale: LinearScale;
  nodes: SvgNode[];
}

/** What a completed handle drag emits; the app PATCHes this to the gateway. */
export function dragDelta(
  scene: PcpScene,
  axisIndex: number,
  toScreenY: number,
): { component: number; delta: number } {
  const handle = scene.handles.find((h) => h.axisIndex === axisIndex);
  if (!handle) throw new Error(`no handle on axis ${axisIndex}; is a proposal selected?`);
  const target = scene.yScale.invert(toScreenY);
  return { component: axisIndex, delta: target - handle.value };
}

export function buildPcpScene(store: SessionStore, opts: PcpOptions = {}): PcpScene {
  const width = opts.width ?? 520;
  const height = opts.height ?? 320;
  const barWidth = opts.barWidth ?? 7;
  const view = store.view;
  if (!view) throw new Error("no view bundle loaded");

  const margin = { top: 24, bottom: 12, left: 40, right: 40 };
  const innerH: [number, number] = [height - margin.bottom, margin.top];
  const yScale = linearScale([0, 1], innerH);

  const nAxes = view.axes.length;
  const axisX = (j: number) =>
    margin.left + (nAxes === 1 ? 0 : (j * (width - margin.left - margin.right)) / (nAxes - 1));

  const axes: PcpAxis[] = view.axes.map((ax, j) => {
    const x = axisX(j);
    const bins = ax.bins;
    const density = ax.density.map((v, b) => ({
      y0: yScale(bins[b + 1] as number),
      y1: yScale(bins[b] as number),
      width: v * barWidth,
      value: v,
    }));
    const correlation = ax.correlation.map((c, b) => ({
      y0: yScale(bins[b + 1] as number),
      y1: yScale(bins[b] as number),
      color: c === null ? MISSING_GRAY : targetColor(c, 0, 1),
      value: c,
    }));
    const brushRange = store.brushes[String(j)];
    const brush = brushRange
      ? {
          lo: brushRange[0],
          hi: brushRange[1],
          screenY0: yScale(brushRange[1]),
          screenY1: yScale(brushRange[0]),
        }
      : null;
    return { index: j, variable: ax.variable, screenX: x, density, correlation, brush };
  });

  const polylines: PcpPolyline[] = [];
  for (const p of [...store.proposals.values()].sort((a, b) => a.id - b.id)) {
    const pts: [number, number][] = p.values.map((v, j) => [axisX(j), yScale(v)]);
    polylines.push({
      id: p.id,
      status: p.status,
      dashed: p.status !== "existing",
      highlighted: store.selection === p.id,
      values: [...p.values],
      screenPoints: pts,
    });
  }

  const handles: PcpHandle[] = [];
  const selected = store.selectedProposal();
  if (selected) {
    selected.values.forEach((v, j) => {
      handles.push({
        axisIndex: j,
        variable: view.axes[j]?.variable ?? `x${j + 1}`,
        screenX: axisX(j),
        screenY: yScale(v),
        value: v,
      });
    });
  }

  const nodes: SvgNode[] = [];
  for (const ax of axes) {
    const children: SvgNode[] = [
      { kind: "line", x1: ax.screenX, y1: yScale(0), x2: ax.screenX, y2: yScale(1), stroke: "#333333" },
      {
        kind: "text",
        x: ax.screenX,
        y: margin.top - 8,
        content: ax.variable,
        anchor: "middle",
        fontSize: 11,
      },
    ];
    for (const bar of ax.density) {
      children.push({
        kind: "rect",
        x: ax.screenX - 2 - bar.width,
        y: bar.y0,
        width: bar.width,
        height: bar.y1 - bar.y0,
        fill: "#8ea8c3",
        className: "density-bar",
      });
    }
    for (const bar of ax.correlation) {
      children.push({
        kind: "rect",
        x: ax.screenX + 2,
        y: bar.y0,
        width: barWidth,
        height: bar.y1 - bar.y0,
        fill: bar.color,
        className: "correlation-bar",
      });
    }
    if (ax.brush) {
      children.push({
        kind: "rect",
        x: ax.screenX - 6,
        y: ax.brush.screenY0,
        width: 12,
        height: ax.brush.screenY1 - ax.brush.screenY0,
        fill: "#f2c94c",
        opacity: 0.35,
        className: "brush",
        dataId: `brush-${ax.index}`,
      });
    }
    nodes.push({ kind: "group", className: `axis axis-${ax.index}`, children });
  }
  for (const line of polylines) {
    nodes.push({
      kind: "polyline",
      points: line.screenPoints,
      stroke: line.status === "existing" ? EXISTING_BLUE : PROPOSED_GRAY,
      strokeWidth: line.highlighted ? 2.5 : 1.2,
      dashed: line.dashed,
      dataId: `pcp-proposal-${line.id}`,
      className: line.highlighted ? "proposal-line selected" : "proposal-line",
    });
  }
  for (const h of handles) {
    nodes.push({
      kind: "circle",
      cx: h.screenX,
      cy: h.screenY,
      r: 5,
      fill: "#ffffff",
      stroke: HIGHLIGHT_STROKE,
      strokeWidth: 1.5,
      dataId: `pcp-handle-${h.axisIndex}`,
      className: "handle",
    });
  }

  return {
    kind: "pcp",
    width,
    height,
    highlightedId: store.selection,
    axes,
    polylines,
    handles,
    yScale,
    nodes,
  };
}
