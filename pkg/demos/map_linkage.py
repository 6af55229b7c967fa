#!/usr/bin/env python3
# The projection trick the editing views rely on: moving one input variable
# by delta moves the projected point by exactly delta times its loading
# vector, so an axis edit can be drawn on the map without re-projecting.
import numpy as np

from emptyspace.datagen import gen_wineshaped
from emptyspace.projection import fit_pca, move_delta, project, scree

ds = gen_wineshaped(seed=0)
X = ds.input_matrix()
model = fit_pca(X)

print("variance explained per kept component:")
for i, ratio, cum in scree(model):
    print(f"  component {i}: {ratio:.3f} (cumulative {cum:.3f})")

names = [v.name for v in ds.input_specs]
p = X[100]
print(f"\nedits from row 100, drawn via loading vectors:")
worst = 0.0
for j, name in enumerate(names):
    delta = 0.15
    shifted = p.copy()
    shifted[j] += delta
    direct = project(model, shifted) - project(model, p)
    via_loading = move_delta(model, j, delta)
    worst = max(worst, np.abs(direct - via_loading).max())
    print(f"  {name:>22}: loading ({via_loading[0]:+.3f}, {via_loading[1]:+.3f})")
print(f"worst disagreement between the two routes: {worst:.2e}")

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

proj = project(model, X)
fig, ax = plt.subplots(figsize=(7, 6))
ax.scatter(*proj.T, s=4, c="0.8")
for j, name in enumerate(names):
    v = move_delta(model, j, 1.0)
    ax.annotate(
        name, xy=v * 0.9, fontsize=7,
        ha="center", color="tab:blue",
    )
    ax.plot([0, v[0]], [0, v[1]], c="tab:blue", lw=0.8)
ax.set_xlabel("component 0")
ax.set_ylabel("component 1")
fig.tight_layout()
fig.savefig("map_linkage.png", dpi=130)
print("wrote map_linkage.png")
