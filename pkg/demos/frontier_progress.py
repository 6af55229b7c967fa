#!/usr/bin/env python3
"""Grow a two-objective front by verifying search proposals one at a time."""
import numpy as np

from emptyspace.datagen import gen_blob
from emptyspace.neighbors import NeighborIndex
from emptyspace.oracles import QuadraticTwinOracle, evaluate_into_dataset
from emptyspace.pareto import ObjectivePair, ParetoState
from emptyspace.search import EsaParams, run_batch

oracle = QuadraticTwinOracle(d=4)
ds = evaluate_into_dataset(gen_blob(4, 250, seed=2), oracle)
pair = ObjectivePair(oracle.spec.names, oracle.spec.orientations, oracle.spec.bounds)

state = ParetoState(pair, budget_cap=30.0)
state.seed_existing(range(len(ds.rows)), ds.target_matrix())
print(f"seeded {len(ds.rows)} rows, dominance area {state.area:.4f}")

# the search proposes, the oracle verifies, the ledger keeps score
index = NeighborIndex(ds.input_matrix())
starts = np.random.default_rng(3).uniform(size=(25, 4))
finals = np.array([t.final() for t in run_batch(starts, index, EsaParams())])

state.set_proposals(range(1000, 1000 + len(finals)), oracle.evaluate(finals))
history = [state.area]
for i, point in enumerate(finals):
    out = state.update_on_verify(1000 + i, oracle.evaluate(point[None, :])[0],
                                 cost=float(oracle.cost(point[None, :])[0]))
    history.append(out.area_after)
    mark = "+" if out.front_expanded else " "
    print(f"  verify {i:2d} {mark} area {out.area_after:.4f} "
          f"(spent {out.budget_spent:.2f}/{state.budget_cap})")

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
ax1.plot(history, marker=".")
ax1.set_xlabel("verifications")
ax1.set_ylabel("dominance area")
snap = state.snapshot()
ex = np.array(snap["existing_values"])
fr = ex[snap["front_existing"]]
order = np.argsort(fr[:, 0])
ax2.scatter(*ex.T, s=6, c="0.8")
ax2.plot(*fr[order].T, marker="o", c="tab:red", lw=1)
ax2.set_xlabel(pair.names[0])
ax2.set_ylabel(pair.names[1])
fig.tight_layout()
fig.savefig("frontier_progress.png", dpi=130)
print(f"final area {state.area:.4f}; wrote frontier_progress.png")
