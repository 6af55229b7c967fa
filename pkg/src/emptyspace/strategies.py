"""Proposal strategies: all the ways a batch of candidates gets made.

Every strategy is a pure function of (inputs, parameters, seed): rerunning
with the same arguments reproduces the same batch bit for bit, which is what
makes experiment CSVs byte-stable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Configuration, feasible_box, violates_any
from .search import run_batch

GIVE_UP_RATE = 1e-4
_GIVE_UP_FLOOR = 200_000


@dataclass
class ProposalBatch:
    configurations: list
    strategy: str
    seed: int | None = None
    trajectories: list | None = None  # per-proposal sampled paths, where any


def sample_uniform(d, size, rng, constraints=()):
    """Uniform feasible points; direct sampling when constraints are boxes.

    Falls back to rejection sampling and gives up (ValueError) once the
    observed acceptance rate sinks below GIVE_UP_RATE.
    """
    box = feasible_box(constraints, d)
    if box is not None:
        lo, hi = box
        return rng.uniform(lo, hi, size=(size, d))
    out = []
    attempts = accepted = 0
    chunk = max(4096, size * 4)
    while accepted < size:
        cand = rng.uniform(0.0, 1.0, size=(chunk, d))
        ok = cand[~violates_any(constraints, cand)]
        attempts += chunk
        accepted += len(ok)
        out.append(ok)
        if attempts >= _GIVE_UP_FLOOR and accepted / attempts < GIVE_UP_RATE:
            raise ValueError(
                f"constraint acceptance rate {accepted / attempts:.2e} below "
                f"{GIVE_UP_RATE:.0e}; giving up"
            )
    return np.vstack(out)[:size]


def random_sampling(d, size, seed, constraints=()):
    """i.i.d. uniform proposals inside box and constraints."""
    rng = np.random.default_rng(seed)
    pts = sample_uniform(d, size, rng, constraints)
    cfgs = [Configuration(p, provenance="random-sample") for p in pts]
    return ProposalBatch(cfgs, "random-sampling", seed, [p[None, :] for p in pts])


def random_walk(d, size, steps=400, alpha=1e-3, seed=0, starts=None, sample_interval=None):
    """Blind baseline: fixed-length steps in fresh uniform directions.

    Steps are clipped to the box (a clipped step may come up short); with
    steps=0 this reduces to random_sampling under the same seed protocol.
    sample_interval records intermediate positions for trajectory-level
    comparisons; the final position is always recorded.
    """
    rng = np.random.default_rng(seed)
    if starts is None:
        starts = sample_uniform(d, size, rng)
    else:
        starts = np.atleast_2d(np.asarray(starts, dtype=float)).copy()
    pos = starts.copy()
    paths = [[p.copy()] for p in pos] if sample_interval else None
    for s in range(steps):
        direction = rng.normal(size=(len(pos), d))
        norms = np.sqrt((direction**2).sum(axis=1))
        # A zero draw is measure-zero but a divide guard is free.
        direction /= np.where(norms > 0, norms, 1.0)[:, None]
        pos = np.clip(pos + alpha * direction, 0.0, 1.0)
        if sample_interval and (s + 1) % sample_interval == 0 and s + 1 != steps:
            for i, p in enumerate(pos):
                paths[i].append(p.copy())
    if sample_interval:
        for i, p in enumerate(pos):
            paths[i].append(p.copy())
    cfgs = [Configuration(p, provenance="random-walk") for p in pos]
    trajs = [np.array(path) for path in paths] if paths else [p[None, :] for p in pos]
    return ProposalBatch(cfgs, "random-walk", seed, trajs)


def esa_proposals(index, params, size, seed, starts=None, workers=1):
    """Force-driven proposals: one agent per requested configuration.

    Returns the batch plus each agent's full Trajectory so callers can pick
    per-trajectory representatives; configurations default to the final
    resting points.
    """
    if starts is None:
        rng = np.random.default_rng(seed)
        starts = sample_uniform(index.points.shape[1], size, rng, params.constraints)
    else:
        starts = np.atleast_2d(np.asarray(starts, dtype=float))
    trajectories = run_batch(starts, index, params, workers=workers)
    cfgs = [Configuration(t.final().copy(), provenance="esa") for t in trajectories]
    batch = ProposalBatch(cfgs, "esa", seed, [t.positions() for t in trajectories])
    batch.raw_trajectories = trajectories
    return batch


def pareto_improvement(ds, state, size, seed=None):
    """Copies of the current existing-front members, cycled to size.

    Deterministic: the front order itself (best first objective first) is
    the cycle order.  seed is accepted for interface symmetry and unused.
    """
    front = state.front_existing()
    if front.size == 0:
        raise ValueError("no existing front to improve upon")
    cfgs = []
    for i in range(size):
        state_idx = front[i % len(front)]
        row = ds.rows[state.existing_ids[state_idx]]
        cfgs.append(
            Configuration(
                row.values.copy(),
                targets=np.asarray(state.existing_values[state_idx], dtype=float).copy(),
                provenance="pareto-improvement",
                targets_estimated=True,
            )
        )
    return ProposalBatch(cfgs, "pareto-improvement", seed)


def blank_baseline(d):
    """The all-0.5 reference point: the exact center of the normalized box."""
    return Configuration(np.full(d, 0.5), provenance="blank")
