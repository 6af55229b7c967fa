/** Progress panel: budget and reward donuts, the APE history with its two
 * threshold lines, and the dual Pareto fronts (red existing, gray
 * proposed) with click-to-select markers and the verify button.
 */

import {
  EXISTING_BLUE,
  FRONT_EXISTING_RED,
  FRONT_PROPOSED_GRAY,
  HIGHLIGHT_STROKE,
  PROPOSED_GRAY,
  VERIFIED_RED,
} from "../color.js";
import { linearScale, type LinearScale } from "../scale.js";
import type { SessionStore, StoredProposal } from "../store.js";
import type { SvgNode } from "../svg.js";

/** Gateway oracles charge one budget unit per verification. */
export const UNIT_VERIFY_COST = 1.0;

export type VerifyBlockReason = "ok" | "no-selection" | "already-existing" | "budget-exhausted";

export interface VerifyButton {
  enabled: boolean;
  reason: VerifyBlockReason;
  label: string;
}

/** Disabled exactly when the budget cannot fund one more verification or
 * the selection is already an existing row (or there is no selection).
 */
export function verifyButtonState(store: SessionStore): VerifyButton {
  const budget = store.budget;
  if (budget.spent + UNIT_VERIFY_COST > budget.cap + 1e-9) {
    return { enabled: false, reason: "budget-exhausted", label: "Verify (budget spent)" };
  }
  const selected = store.selectedProposal();
  if (!selected) return { enabled: false, reason: "no-selection", label: "Verify" };
  if (selected.status === "existing") {
    return { enabled: false, reason: "already-existing", label: "Verify (already verified)" };
  }
  return { enabled: true, reason: "ok", label: "Verify" };
}

function donutPath(cx: number, cy: number, rOuter: number, rInner: number, fraction: number): string {
  const f = Math.min(1, Math.max(0, fraction));
  if (f <= 0) return "";
  const p = (r: number, a: number) => `${cx + r * Math.cos(a)},${cy + r * Math.sin(a)}`;
  if (f >= 1) {
    // closed ring; tiny offset keeps the arc from degenerating
    return (
      `M${p(rOuter, -Math.PI / 2)}` +
      `A${rOuter},${rOuter} 0 1 1 ${cx - 1e-4},${cy - rOuter}Z` +
      `M${p(rInner, -Math.PI / 2)}` +
      `A${rInner},${rInner} 0 1 0 ${cx - 1e-4},${cy - rInner}Z`
    );
  }
  const a0 = -Math.PI / 2;
  const a1 = a0 + f * 2 * Math.PI;
  const large = f > 0.5 ? 1 : 0;
  return (
    `M${p(rOuter, a0)}A${rOuter},${rOuter} 0 ${large} 1 ${p(rOuter, a1)}` +
    `L${p(rInner, a1)}A${rInner},${rInner} 0 ${large} 0 ${p(rInner, a0)}Z`
  );
}

export interface ParetoMark {
  id: number;
  values: [number, number];
  screenX: number;
  screenY: number;
  color: string;
  highlighted: boolean;
}

export interface ProgressScene {
  kind: "progress";
  width: number;
  height: number;
  highlightedId: number | null;
  budgetDonut: { spent: number; cap: number; fraction: number; path: string };
  rewardDonut: { area: number; fraction: number; path: string };
  ape: {
    history: [number, number][];
    screenPoints: [number, number][];
    t1: number;
    t2: number;
    t1Y: number;
    t2Y: number;
  };
  pareto: {
    existingScreen: [number, number][];
    proposedScreen: [number, number][];
    frontExistingScreen: [number, number][];
    frontProposedScreen: [number, number][];
    proposalMarks: ParetoMark[];
    xScale: LinearScale;
    yScale: LinearScale;
  };
  verifyButton: VerifyButton;
  nodes: SvgNode[];
}

/** Objective-pair values for one proposal, in objectives order. */
function pairValues(store: SessionStore, p: StoredProposal): [number, number] | null {
  if (!p.targets) return null;
  const targetNames = store.summary.variables.filter((v) => v.kind === "target").map((v) => v.name);
  const [a, b] = store.summary.objectives.names;
  const ia = targetNames.indexOf(a as string);
  const ib = targetNames.indexOf(b as string);
  if (ia < 0 || ib < 0) return null;
  const va = p.targets[ia];
  const vb = p.targets[ib];
  if (va === undefined || vb === undefined) return null;
  return [va, vb];
}

export function buildProgressScene(
  store: SessionStore,
  opts: { width?: number; height?: number } = {},
): ProgressScene {
  const width = opts.width ?? 640;
  const height = opts.height ?? 300;
  const snap = store.pareto;
  if (!snap) throw new Error("no pareto snapshot loaded");

  const budgetFraction = store.budget.cap > 0 ? store.budget.spent / store.budget.cap : 1;
  const budgetDonut = {
    spent: store.budget.spent,
    cap: store.budget.cap,
    fraction: budgetFraction,
    path: donutPath(70, 80, 42, 26, budgetFraction),
  };
  // objectives are normalized by their declared bounds, so the dominated
  // area of the unit square doubles as the reward fraction
  const rewardDonut = {
    area: snap.dominance_area,
    fraction: snap.dominance_area,
    path: donutPath(70, 210, 42, 26, snap.dominance_area),
  };

  const history = store.view?.error_history ?? [];
  const t1 = store.thresholds.t1;
  const t2 = store.thresholds.t2;
  const apeTop = Math.max(t1, ...history.map(([, a]) => a)) * 1.15 || 1;
  const apeX = linearScale([0, Math.max(1, history.length - 1)], [170, 370]);
  const apeY = linearScale([0, apeTop], [120, 24]);
  const ape = {
    history,
    screenPoints: history.map(([, a], i) => [apeX(i), apeY(a)] as [number, number]),
    t1,
    t2,
    t1Y: apeY(t1),
    t2Y: apeY(t2),
  };

  const xs = [
    ...snap.existing_values.map((v) => v[0]),
    ...snap.proposed_values.map((v) => v[0]),
  ];
  const ys = [
    ...snap.existing_values.map((v) => v[1]),
    ...snap.proposed_values.map((v) => v[1]),
  ];
  const b = store.summary.objectives.bounds;
  if (b[0]) xs.push(b[0][0], b[0][1]);
  if (b[1]) ys.push(b[1][0], b[1][1]);
  const xScale = linearScale([Math.min(...xs), Math.max(...xs)], [420, 620]);
  const yScale = linearScale([Math.min(...ys), Math.max(...ys)], [270, 24]);

  const existingScreen = snap.existing_values.map(
    ([a, c]) => [xScale(a), yScale(c)] as [number, number],
  );
  const proposedScreen = snap.proposed_values.map(
    ([a, c]) => [xScale(a), yScale(c)] as [number, number],
  );
  const frontExistingScreen = snap.front_existing.map((i) => existingScreen[i] as [number, number]);
  const frontProposedScreen = snap.front_proposed.map((i) => proposedScreen[i] as [number, number]);

  const proposalMarks: ParetoMark[] = [];
  for (const p of [...store.proposals.values()].sort((a, c) => a.id - c.id)) {
    const pv = pairValues(store, p);
    if (!pv) continue;
    const flash = store.recentlyVerified.has(p.id);
    proposalMarks.push({
      id: p.id,
      values: pv,
      screenX: xScale(pv[0]),
      screenY: yScale(pv[1]),
      color: flash ? VERIFIED_RED : p.status === "existing" ? EXISTING_BLUE : PROPOSED_GRAY,
      highlighted: store.selection === p.id,
    });
  }

  const verifyButton = verifyButtonState(store);

  const nodes: SvgNode[] = [
    {
      kind: "group",
      className: "donuts",
      children: [
        { kind: "path", d: budgetDonut.path, fill: "#5a7fa8", className: "budget-donut" },
        {
          kind: "text",
          x: 70,
          y: 84,
          content: `${budgetDonut.spent}/${budgetDonut.cap}`,
          anchor: "middle",
          fontSize: 11,
        },
        { kind: "path", d: rewardDonut.path, fill: "#b0643e", className: "reward-donut" },
        {
          kind: "text",
          x: 70,
          y: 214,
          content: rewardDonut.area.toFixed(3),
          anchor: "middle",
          fontSize: 11,
        },
      ],
    },
    {
      kind: "group",
      className: "ape-history",
      children: [
        { kind: "line", x1: 170, y1: ape.t1Y, x2: 370, y2: ape.t1Y, stroke: "#c0392b", dashed: true, className: "threshold-t1" },
        { kind: "line", x1: 170, y1: ape.t2Y, x2: 370, y2: ape.t2Y, stroke: "#e67e22", dashed: true, className: "threshold-t2" },
        ...(ape.screenPoints.length > 1
          ? [{ kind: "polyline" as const, points: ape.screenPoints, stroke: "#333333", strokeWidth: 1.5, className: "ape-line" }]
          : []),
        ...ape.screenPoints.map(
          (pt): SvgNode => ({ kind: "circle", cx: pt[0], cy: pt[1], r: 2.5, fill: "#333333", className: "ape-point" }),
        ),
      ],
    },
    {
      kind: "group",
      className: "pareto-plot",
      children: [
        ...existingScreen.map(
          (pt): SvgNode => ({ kind: "circle", cx: pt[0], cy: pt[1], r: 2, fill: EXISTING_BLUE, className: "pareto-existing" }),
        ),
        ...proposedScreen.map(
          (pt): SvgNode => ({ kind: "circle", cx: pt[0], cy: pt[1], r: 2, fill: PROPOSED_GRAY, className: "pareto-proposed" }),
        ),
        ...(frontExistingScreen.length > 1
          ? [{ kind: "polyline" as const, points: frontExistingScreen, stroke: FRONT_EXISTING_RED, strokeWidth: 2, className: "front-existing" }]
          : []),
        ...(frontProposedScreen.length > 1
          ? [{ kind: "polyline" as const, points: frontProposedScreen, stroke: FRONT_PROPOSED_GRAY, strokeWidth: 2, dashed: true, className: "front-proposed" }]
          : []),
        ...proposalMarks.map(
          (m): SvgNode => ({
            kind: "circle",
            cx: m.screenX,
            cy: m.screenY,
            r: m.highlighted ? 6 : 4,
            fill: m.color,
            stroke: m.highlighted ? HIGHLIGHT_STROKE : undefined,
            strokeWidth: m.highlighted ? 2 : undefined,
            dataId: `pareto-proposal-${m.id}`,
            className: m.highlighted ? "pareto-proposal selected" : "pareto-proposal",
          }),
        ),
      ],
    },
    {
      kind: "group",
      className: "verify-control",
      children: [
        {
          kind: "rect",
          x: 420,
          y: 276,
          width: 110,
          height: 22,
          fill: verifyButton.enabled ? "#2e7d32" : "#bdbdbd",
          dataId: "verify-button",
          className: verifyButton.enabled ? "verify-button" : "verify-button disabled",
        },
        {
          kind: "text",
          x: 475,
          y: 291,
          content: verifyButton.label,
          anchor: "middle",
          fontSize: 11,
          className: "verify-label",
        },
      ],
    },
  ];

  return {
    kind: "progress",
    width,
    height,
    highlightedId: store.selection,
    budgetDonut,
    rewardDonut,
    ape,
    pareto: {
      existingScreen,
      proposedScreen,
      frontExistingScreen,
      frontProposedScreen,
      proposalMarks,
      xScale,
      yScale,
    },
    verifyButton,
    nodes,
  };
}
