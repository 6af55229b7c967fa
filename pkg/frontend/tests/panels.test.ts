/** Per-panel unit tests against the fake gateway plus the small shared
 * helpers (scales, colors, svg serialization).
 */

import { describe, expect, it } from "vitest";

import { ConsoleApp } from "../src/app.js";
import { GatewayClient } from "../src/client.js";
import { MISSING_GRAY, VERIFIED_RED, targetColor } from "../src/color.js";
import { buildControlScene } from "../src/panels/control.js";
import { MIN_NEIGHBORS, buildNeighborScene } from "../src/panels/neighbors.js";
import { buildOverviewScene } from "../src/panels/overview.js";
import { buildPcpScene, dragDelta } from "../src/panels/pcp.js";
import { buildProgressScene } from "../src/panels/progress.js";
import { extent, linearScale, padded } from "../src/scale.js";
import { renderSvg } from "../src/svg.js";
import { fakeClientFetch } from "./fakeGateway.js";

async function appWithProposals(batch = 4, budgetCap = 20) {
  const { fetch } = fakeClientFetch();
  const client = new GatewayClient("http://fake.test", fetch);
  const app = await ConsoleApp.create(client, { dataset: "demo2d", seed: 7, budget_cap: budgetCap });
  const search = await app.search({ batch_size: batch });
  return { app, pids: search.proposal_ids as number[] };
}

describe("overview panel", () => {
  it("draws KDE contours in screen space", async () => {
    const { app } = await appWithProposals();
    const scene = buildOverviewScene(app.store, { contourLevels: 6 });
    expect(scene.contours.length).toBeGreaterThan(0);
    expect(scene.contours.length).toBeLessThanOrEqual(6);
    for (const c of scene.contours) {
      expect(c.path.startsWith("M")).toBe(true);
      expect(c.threshold).toBeGreaterThan(0);
    }
    // thresholds ascend with the level index
    const ts = scene.contours.map((c) => c.threshold);
    expect([...ts].sort((a, b) => a - b)).toEqual(ts);
  });

  it("keeps every mark inside the frame", async () => {
    const { app } = await appWithProposals();
    const scene = buildOverviewScene(app.store);
    for (const p of [...scene.points, ...scene.proposals]) {
      expect(p.screenX).toBeGreaterThanOrEqual(0);
      expect(p.screenX).toBeLessThanOrEqual(scene.width);
      expect(p.screenY).toBeGreaterThanOrEqual(0);
      expect(p.screenY).toBeLessThanOrEqual(scene.height);
    }
  });

  it("colors points by target only when asked", async () => {
    const { app } = await appWithProposals();
    const plain = buildOverviewScene(app.store);
    expect(new Set(plain.points.map((p) => p.color)).size).toBe(1);
    const colored = buildOverviewScene(app.store, { colorByTarget: true });
    expect(new Set(colored.points.map((p) => p.color)).size).toBeGreaterThan(1);
  });

  it("gives every input variable one loading arrow", async () => {
    const { app } = await appWithProposals();
    const scene = buildOverviewScene(app.store);
    expect(scene.loadings.map((a) => a.variable)).toEqual(["x1", "x2"]);
    const maxLen = Math.max(
      ...scene.loadings.map((a) => Math.hypot(a.x2 - a.x1, a.y2 - a.y1)),
    );
    expect(maxLen).toBeCloseTo(0.35 * Math.min(scene.width, scene.height), 6);
  });

  it("skips proposals the view has not projected yet", async () => {
    const { app } = await appWithProposals(2);
    app.store.proposals.set(999, {
      id: 999,
      values: [0.5, 0.5],
      targets: null,
      targets_estimated: true,
      status: "proposed",
      provenance: "esa",
    });
    const scene = buildOverviewScene(app.store);
    expect(scene.proposals.some((m) => m.id === 999)).toBe(false);
    // the PCP still lists it: polylines come from values, not projections
    expect(buildPcpScene(app.store).polylines.some((l) => l.id === 999)).toBe(true);
  });

  it("narrows the subset legend under a target filter", async () => {
    const { app } = await appWithProposals();
    await app.setTargetFilter(0.3, 0.6);
    const scene = buildOverviewScene(app.store);
    const [slo, shi] = scene.legends.subsetRange;
    const [glo, ghi] = scene.legends.globalRange;
    expect(slo).toBeGreaterThanOrEqual(glo);
    expect(shi).toBeLessThanOrEqual(ghi);
    expect(shi - slo).toBeLessThan(ghi - glo);
  });
});

describe("pcp panel", () => {
  it("lays axes out with scented bars", async () => {
    const { app } = await appWithProposals();
    const scene = buildPcpScene(app.store, { barWidth: 7 });
    expect(scene.axes).toHaveLength(2);
    for (const ax of scene.axes) {
      expect(ax.density).toHaveLength(10);
      expect(ax.correlation).toHaveLength(10);
      for (const bar of ax.density) {
        expect(bar.width).toBeGreaterThanOrEqual(0);
        expect(bar.width).toBeLessThanOrEqual(7);
      }
    }
    const ax0 = scene.axes[0];
    const ax1 = scene.axes[1];
    expect(ax0 && ax1 && ax0.screenX < ax1.screenX).toBe(true);
  });

  it("paints unknown correlation bins gray", async () => {
    const { app } = await appWithProposals();
    const scene = buildPcpScene(app.store);
    const bars = scene.axes.flatMap((ax) => ax.correlation);
    const nulls = bars.filter((b) => b.value === null);
    expect(nulls.length).toBeGreaterThan(0); // fake leaves empty bins null
    for (const b of nulls) expect(b.color).toBe(MISSING_GRAY);
  });

  it("shows the brush band on the brushed axis only", async () => {
    const { app } = await appWithProposals();
    app.store.setBrush(1, 0.2, 0.7);
    const scene = buildPcpScene(app.store);
    expect(scene.axes[0]?.brush).toBeNull();
    const brush = scene.axes[1]?.brush;
    expect(brush).toMatchObject({ lo: 0.2, hi: 0.7 });
    // svg y is inverted, so the hi end renders above the lo end
    expect(brush && brush.screenY0 < brush.screenY1).toBe(true);
    expect(renderSvg(scene.width, scene.height, scene.nodes)).toContain('data-id="brush-1"');
  });

  it("offers drag handles only for the selected proposal", async () => {
    const { app, pids } = await appWithProposals();
    expect(buildPcpScene(app.store).handles).toHaveLength(0);
    expect(() => dragDelta(buildPcpScene(app.store), 0, 50)).toThrow(/selected/);
    await app.select(pids[0] as number);
    const scene = buildPcpScene(app.store);
    expect(scene.handles.map((h) => h.axisIndex)).toEqual([0, 1]);
    const h = scene.handles[0];
    expect(h && scene.yScale.invert(h.screenY)).toBeCloseTo(h?.value ?? NaN, 12);
  });
});

describe("neighbor panel", () => {
  it("renders an empty shell before any selection", async () => {
    const { app } = await appWithProposals();
    const scene = buildNeighborScene(app.store);
    expect(scene.highlightedId).toBeNull();
    expect(scene.neighbors).toHaveLength(0);
    expect(scene.nodes).toHaveLength(0);
    expect(scene.controls).toEqual({ increase: false, decrease: false });
  });

  it("fits the farthest neighbor to the panel radius", async () => {
    const { app, pids } = await appWithProposals();
    await app.select(pids[0] as number);
    const scene = buildNeighborScene(app.store, { width: 300, height: 300 });
    expect(scene.highlightedId).toBe(pids[0]);
    expect(scene.neighbors.length).toBeGreaterThan(0);
    const radii = scene.neighbors.map((n) =>
      Math.hypot(n.screenX - scene.center.screenX, n.screenY - scene.center.screenY),
    );
    expect(Math.max(...radii)).toBeCloseTo(0.45 * 300, 6);
    for (const r of radii) expect(r).toBeLessThanOrEqual(0.45 * 300 + 1e-9);
  });

  it("clamps the neighbor count control at the minimum", async () => {
    const { app, pids } = await appWithProposals();
    await app.select(pids[0] as number);
    await app.setNeighborCount(MIN_NEIGHBORS);
    const scene = buildNeighborScene(app.store);
    expect(scene.k).toBe(MIN_NEIGHBORS);
    expect(scene.controls.increase).toBe(true);
    expect(scene.controls.decrease).toBe(false);
    await app.setNeighborCount(0); // clamps back up
    expect(app.store.neighborCount).toBe(MIN_NEIGHBORS);
  });
});

describe("progress panel", () => {
  it("sweeps the budget donut with spending", async () => {
    const { app, pids } = await appWithProposals(4, 8);
    const before = buildProgressScene(app.store);
    expect(before.budgetDonut.fraction).toBe(0);
    expect(before.budgetDonut.path).toBe(""); // nothing spent, nothing drawn
    await app.select(pids[0] as number);
    await app.verifySelected();
    const after = buildProgressScene(app.store);
    expect(after.budgetDonut.fraction).toBeCloseTo(1 / 8, 12);
    expect(after.budgetDonut.path.startsWith("M")).toBe(true);
  });

  it("places both APE thresholds with t1 above t2 on screen", async () => {
    const { app } = await appWithProposals();
    const scene = buildProgressScene(app.store);
    expect(scene.ape.t1).toBeGreaterThan(scene.ape.t2);
    // larger APE is higher on screen, i.e. a smaller y pixel
    expect(scene.ape.t1Y).toBeLessThan(scene.ape.t2Y);
    const svg = renderSvg(scene.width, scene.height, scene.nodes);
    expect(svg).toContain('class="threshold-t1"');
    expect(svg).toContain('class="threshold-t2"');
  });

  it("draws front polylines through front members only", async () => {
    const { app } = await appWithProposals();
    const scene = buildProgressScene(app.store);
    const existingSet = new Set(scene.pareto.existingScreen.map((p) => p.join(",")));
    for (const pt of scene.pareto.frontExistingScreen) {
      expect(existingSet.has(pt.join(","))).toBe(true);
    }
    const proposedSet = new Set(scene.pareto.proposedScreen.map((p) => p.join(",")));
    for (const pt of scene.pareto.frontProposedScreen) {
      expect(proposedSet.has(pt.join(","))).toBe(true);
    }
    expect(scene.pareto.frontProposedScreen.length).toBeGreaterThan(0);
  });

  it("flashes freshly verified marks red, then settles on the next verify", async () => {
    const { app, pids } = await appWithProposals(4, 8);
    await app.select(pids[0] as number);
    await app.verifySelected();
    let marks = buildProgressScene(app.store).pareto.proposalMarks;
    expect(marks.find((m) => m.id === pids[0])?.color).toBe(VERIFIED_RED);
    await app.select(pids[1] as number);
    await app.verifySelected();
    marks = buildProgressScene(app.store).pareto.proposalMarks;
    expect(marks.find((m) => m.id === pids[1])?.color).toBe(VERIFIED_RED);
    expect(marks.find((m) => m.id === pids[0])?.color).not.toBe(VERIFIED_RED);
  });
});

describe("control panel", () => {
  it("checks a quarter interval exactly when the slider matches it", async () => {
    const { app } = await appWithProposals();
    let scene = buildControlScene(app.store);
    expect(scene.intervals).toHaveLength(4);
    expect(scene.intervals.every((q) => !q.checked)).toBe(true);
    const [lo, hi] = scene.slider.bounds;
    await app.setTargetFilter(lo, lo + (hi - lo) / 4);
    scene = buildControlScene(app.store);
    expect(scene.intervals.map((q) => q.checked)).toEqual([true, false, false, false]);
  });

  it("bins the slider histogram from the delivered target column", async () => {
    const { app } = await appWithProposals();
    const scene = buildControlScene(app.store);
    expect(scene.slider.histogram).toHaveLength(10);
    expect(Math.max(...scene.slider.histogram)).toBe(1);
    expect(Math.min(...scene.slider.histogram)).toBeGreaterThanOrEqual(0);
  });

  it("mirrors strategy, batch size and the scree", async () => {
    const { app } = await appWithProposals();
    app.store.strategy = "random-walk";
    app.store.batchSize = 12;
    const scene = buildControlScene(app.store);
    expect(scene.strategy.selected).toBe("random-walk");
    expect(scene.batchSize).toBe(12);
    expect(scene.scree).toEqual(app.store.view?.pca.scree);
    const svg = renderSvg(640, 100, scene.nodes);
    expect(svg).toContain("strategy random-walk, batch 12");
  });
});

describe("shared helpers", () => {
  it("linearScale maps and inverts", () => {
    const s = linearScale([0, 10], [100, 0]);
    expect(s(0)).toBe(100);
    expect(s(10)).toBe(0);
    expect(s(2.5)).toBe(75);
    expect(s.invert(75)).toBeCloseTo(2.5, 12);
    const degenerate = linearScale([3, 3], [0, 50]);
    expect(degenerate(3)).toBe(0);
    expect(Number.isFinite(degenerate.invert(25))).toBe(true);
  });

  it("extent skips NaN and pads degenerate inputs", () => {
    expect(extent([2, NaN, -1, 5])).toEqual([-1, 5]);
    expect(extent([])).toEqual([0, 1]);
    expect(extent([4, 4])).toEqual([3.5, 4.5]);
    expect(padded([0, 10], 0.1)).toEqual([-1, 11]);
  });

  it("targetColor ramps orange to red and clamps", () => {
    expect(targetColor(null, 0, 1)).toBe(MISSING_GRAY);
    expect(targetColor(NaN, 0, 1)).toBe(MISSING_GRAY);
    expect(targetColor(0, 0, 1)).toBe("#ffa13b");
    expect(targetColor(1, 0, 1)).toBe("#c6170b");
    expect(targetColor(-5, 0, 1)).toBe("#ffa13b");
    expect(targetColor(99, 0, 1)).toBe("#c6170b");
    const mid = targetColor(0.5, 0, 1);
    expect(mid).not.toBe("#ffa13b");
    expect(mid).not.toBe("#c6170b");
  });

  it("renderSvg escapes text and keeps full float precision", () => {
    const svg = renderSvg(10, 10, [
      { kind: "circle", cx: 0.1 + 0.2, cy: 1, r: 2 },
      { kind: "text", x: 0, y: 0, content: 'a<b&"c"' },
      { kind: "line", x1: 0, y1: 0, x2: 1, y2: 1, dashed: true },
      { kind: "polyline", points: [[0, 0], [1, 1]] },
    ]);
    expect(svg).toContain('cx="0.30000000000000004"');
    expect(svg).toContain("a&lt;b&amp;&quot;c&quot;");
    expect(svg).toContain('stroke-dasharray="4 3"');
    expect(svg).toContain('fill="none"');
  });
});
