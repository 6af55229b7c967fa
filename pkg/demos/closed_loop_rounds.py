#!/usr/bin/env python3
"""Run the full propose/verify/learn loop and watch the phases unlock.

Starts with the surrogate untrained (Initial: a human would have to verify),
trains it once, then lets rounds auto-verify whatever the learned critic
ranks best.
"""
import numpy as np

from emptyspace.datagen import gen_blob
from emptyspace.oracles import QuadraticTwinOracle, evaluate_into_dataset
from emptyspace.pipeline import SearchPipeline
from emptyspace.surrogate import SurrogateConfig

oracle = QuadraticTwinOracle(d=4)
ds = evaluate_into_dataset(gen_blob(4, 200, seed=5), oracle)
pipe = SearchPipeline(
    ds,
    oracle,
    budget_cap=40.0,
    t1=30.0,
    t2=4.0,
    surrogate_cfg=SurrogateConfig(hidden_layers=(32,), max_epochs=300, seed=0),
    seed=5,
)

print(f"phase before any training: {pipe.phase}")
report = pipe.run_round("esa", size=30, verify_budget=5)
print(f"round 0: {report.verified} auto-verified (nothing is trusted yet)")

worst = pipe.retrain()
print(f"trained, worst APE {worst:.2f}% -> phase {pipe.phase}")

for r in range(1, 6):
    report = pipe.run_round("esa", size=30, verify_budget=5)
    print(
        f"round {r}: phase {report.phase_before:>9} -> {report.phase_after:>9}  "
        f"verified {report.verified}  area {report.area_before:.4f} -> {report.area_after:.4f}  "
        f"APE {report.ape:.2f}%"
    )

snap = pipe.snapshot()
print(
    f"\n{snap['rows']} rows, dataset version {snap['dataset_version']}, "
    f"budget {snap['pareto']['budget_spent']:.1f}/{snap['pareto']['budget_cap']}"
)
