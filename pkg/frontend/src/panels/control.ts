/** Control panel: session facts, strategy and batch-size pickers, the
 * target range slider with its interval checkboxes, PCA scree bars, and
 * the global/local projection toggle.  The one client-side number here is
 * the slider's backdrop histogram, binned from the delivered target
 * column for display only.
 */

import type { SessionStore } from "../store.js";
import type { SvgNode } from "../svg.js";

export const STRATEGIES = [
  "esa",
  "random-sampling",
  "random-walk",
  "pareto-improvement",
  "blank",
] as const;

export interface TargetInterval {
  lo: number;
  hi: number;
  checked: boolean;
}

export interface ControlScene {
  kind: "control";
  dataset: { rows: number; phase: string; apes: Record<string, number> };
  strategy: { options: readonly string[]; selected: string };
  batchSize: number;
  slider: {
    bounds: [number, number];
    lo: number;
    hi: number;
    histogram: number[];
  };
  intervals: TargetInterval[];
  globalPca: boolean;
  scree: [number, number, number][];
  nodes: SvgNode[];
}

function sliderHistogram(store: SessionStore, bounds: [number, number], bins = 10): number[] {
  const counts = new Array<number>(bins).fill(0);
  const span = bounds[1] - bounds[0] || 1;
  for (const t of store.view?.points.target ?? []) {
    if (t === null) continue;
    const b = Math.min(bins - 1, Math.max(0, Math.floor(((t - bounds[0]) / span) * bins)));
    counts[b] = (counts[b] as number) + 1;
  }
  const max = Math.max(...counts, 1);
  return counts.map((c) => c / max);
}

export function buildControlScene(store: SessionStore): ControlScene {
  const firstBounds = store.summary.objectives.bounds[0] ?? [0, 1];
  const bounds: [number, number] = [firstBounds[0] as number, firstBounds[1] as number];
  const lo = store.targetLo ?? bounds[0];
  const hi = store.targetHi ?? bounds[1];

  // quarter-range checkboxes; one is checked when the slider matches it
  const quarters: TargetInterval[] = [0, 1, 2, 3].map((q) => {
    const qlo = bounds[0] + ((bounds[1] - bounds[0]) * q) / 4;
    const qhi = bounds[0] + ((bounds[1] - bounds[0]) * (q + 1)) / 4;
    return { lo: qlo, hi: qhi, checked: lo === qlo && hi === qhi };
  });

  const histogram = sliderHistogram(store, bounds);

  const scree = store.view?.pca.scree ?? [];
  const nodes: SvgNode[] = [
    {
      kind: "group",
      className: "slider",
      children: histogram.map(
        (h, i): SvgNode => ({
          kind: "rect",
          x: 10 + i * 14,
          y: 60 - h * 40,
          width: 12,
          height: h * 40,
          fill: "#8ea8c3",
          className: "slider-hist",
        }),
      ),
    },
    {
      kind: "group",
      className: "scree",
      children: scree.map(
        ([comp, ratio], i): SvgNode => ({
          kind: "rect",
          x: 180 + i * 18,
          y: 60 - ratio * 50,
          width: 14,
          height: ratio * 50,
          fill: "#5a7fa8",
          className: `scree-bar scree-${comp}`,
        }),
      ),
    },
    {
      kind: "text",
      x: 10,
      y: 84,
      content: `phase ${store.phase}, strategy ${store.strategy}, batch ${store.batchSize}`,
      fontSize: 11,
      className: "control-summary",
    },
  ];

  return {
    kind: "control",
    dataset: { rows: store.summary.rows, phase: store.phase, apes: store.apes },
    strategy: { options: STRATEGIES, selected: store.strategy },
    batchSize: store.batchSize,
    slider: { bounds, lo, hi, histogram },
    intervals: quarters,
    globalPca: store.globalPca,
    scree,
    nodes,
  };
}
