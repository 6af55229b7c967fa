#!/usr/bin/env python3
"""Walk agents into the empty pocket of a 2D dataset and plot where they stop.

Data covers the unit square except for a carved-out ball.  Agents start
uniformly, feel the point forces, and settle in the least crowded spots:
the pocket, plus the thin margins along the box faces.
"""
import numpy as np

from emptyspace.datagen import gen_void
from emptyspace.neighbors import NeighborIndex
from emptyspace.search import EsaParams, run_batch

rng = np.random.default_rng(0)
data = gen_void(2, 400, seed=1, center=(0.65, 0.6), radius=0.28)
starts = rng.uniform(size=(250, 2))
index = NeighborIndex(data)

results = {}
for gamma in (0.0, 0.9):
    trajs = run_batch(starts, index, EsaParams(gamma=gamma))
    finals = np.array([t.final() for t in trajs])
    results[gamma] = (trajs, finals)

    terms = {}
    for t in trajs:
        terms[t.termination] = terms.get(t.termination, 0) + 1
    in_pocket = (((finals - (0.65, 0.6)) ** 2).sum(axis=1) < 0.28**2).mean()
    print(f"gamma={gamma}: terminations {terms}, {in_pocket:.0%} of finals in the pocket")

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, axes = plt.subplots(1, 2, figsize=(11, 5), sharex=True, sharey=True)
for ax, gamma in zip(axes, (0.0, 0.9)):
    trajs, finals = results[gamma]
    ax.scatter(*data.T, s=6, c="0.75", label="existing data")
    for t in trajs[:60]:  # a few trajectories so the glide is visible
        ax.plot(*t.positions().T, lw=0.4, c="tab:orange", alpha=0.5)
    ax.scatter(*finals.T, s=10, c="tab:red", label="agent finals")
    ax.add_patch(plt.Circle((0.65, 0.6), 0.28, fill=False, ls="--", ec="k"))
    ax.set_title(f"gamma = {gamma}")
    ax.set_aspect("equal")
axes[0].legend(loc="lower left")
fig.tight_layout()
fig.savefig("pocket_search_2d.png", dpi=130)
print("wrote pocket_search_2d.png")
