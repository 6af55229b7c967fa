"""Force-driven agent search for empty regions of configuration space.

Each agent sits in the normalized unit box, feels a Lennard-Jones force from
its k nearest data points, and walks along the (optionally momentum-blended)
resultant until the force vanishes, a constraint is violated, or the step
budget runs out.  Where the force vanishes, data is locally absent or
balanced: an empty-space configuration.

Sign convention: lj_force_magnitude is positive in the repulsive regime
(r below the 2^(1/6) * sigma zero crossing) and the resultant applies it
away from each neighbor, so agents are pushed out of crowded regions and
gently pulled back toward the data from far away.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .dataset import violates_any
from .neighbors import NeighborIndex

TERMINATIONS = ("vanished", "constraint-violated", "step-limit")


@dataclass(frozen=True)
class EsaParams:
    """Knobs of one search run.

    sigma=None means the interaction length is recomputed every step as the
    mean distance of the current k neighbors; a float pins it.
    """

    k: int = 9
    sigma: float | None = None
    epsilon: float = 1.0
    n_steps: int = 400
    alpha: float = 1e-3
    gamma: float = 0.9
    delta: float = 1e-7
    rollout_interval: int = 10
    constraints: tuple = ()

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.sigma is not None and self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.n_steps < 0:
            raise ValueError("n_steps must be >= 0")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must lie in [0, 1)")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.rollout_interval < 1:
            raise ValueError("rollout_interval must be >= 1")

    @property
    def sigma_mode(self):
        return "fixed" if self.sigma is not None else "mean-knn"

    def to_json(self):
        d = {
            "k": self.k,
            "sigma": self.sigma,
            "epsilon": self.epsilon,
            "n_steps": self.n_steps,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "delta": self.delta,
            "rollout_interval": self.rollout_interval,
        }
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        known = {
            "k", "sigma", "epsilon", "n_steps", "alpha", "gamma", "delta",
            "rollout_interval",
        }
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown search parameters: {sorted(unknown)}")
        return cls(**data)


def lj_potential(r, epsilon=1.0, sigma=1.0):
    """Pair potential 4*eps*((sigma/r)^12 - (sigma/r)^6); zero at r = sigma."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    sr6 = (sigma / r) ** 6
    return 4.0 * epsilon * (sr6 * sr6 - sr6)


def lj_force_magnitude(r, epsilon=1.0, sigma=1.0):
    """Signed force along the pair axis, positive = repulsive.

    24*(eps/sigma)*(2*(sigma/r)^13 - (sigma/r)^7): equal to -dV/dr, so the
    zero crossing sits at the potential minimum 2^(1/6)*sigma and anything
    closer than that pushes the agent away.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    sr = sigma / r
    sr7 = sr**7
    return 24.0 * (epsilon / sigma) * (2.0 * sr7 * sr7 / sr - sr7)


def effective_sigma(distances, params):
    """Interaction length for one step: fixed, or mean neighbor distance."""
    if params.sigma is not None:
        return params.sigma
    distances = np.asarray(distances, dtype=float)
    if distances.size == 0:
        raise ValueError("mean-knn sigma needs at least one neighbor")
    return float(distances.mean())


def resultant(neighbor_set, params):
    """Total force at a point given its neighbors.

    Returns (direction, magnitude); direction is None when the magnitude
    falls below the vanishing threshold delta.
    """
    dist = neighbor_set.distances
    if dist.size == 0:
        return None, 0.0
    sigma = effective_sigma(dist, params)
    f = lj_force_magnitude(dist, params.epsilon, sigma)
    # unit_vectors point toward neighbors; positive f must push away.
    vec = -(neighbor_set.unit_vectors * f[:, None]).sum(axis=0)
    mag = float(np.sqrt((vec**2).sum()))
    if mag < params.delta:
        return None, mag
    return vec / mag, mag


@dataclass
class AgentState:
    """Mutable per-agent record carried between steps."""

    position: np.ndarray
    momentum: np.ndarray
    cumulative_magnitude: float = 0.0
    step: int = 0

    @classmethod
    def fresh(cls, position):
        position = np.asarray(position, dtype=float)
        return cls(position, np.zeros_like(position), 0.0, 0)


@dataclass
class Trajectory:
    """Sampled path of one agent: (step, position) pairs plus why it stopped.

    The start is sample 0; every rollout_interval-th step follows; the final
    resting point is always appended even when it falls off that grid.
    """

    samples: list
    termination: str

    def positions(self):
        return np.array([p for _, p in self.samples])

    def steps(self):
        return np.array([s for s, _ in self.samples])

    def final(self):
        return self.samples[-1][1]


def _batch_forces(pos, index, params, workers=1):
    """Resultant force vectors and magnitudes for a whole batch at once."""
    idx, dist, diffs, counts = index.query_batch(pos, params.k, workers=workers)
    slot = np.arange(dist.shape[1])[None, :]
    mask = slot < counts[:, None]
    if params.sigma is not None:
        sigma = np.full(len(pos), params.sigma)
    else:
        denom = np.maximum(counts, 1)
        sigma = np.where(mask, dist, 0.0).sum(axis=1) / denom
    safe_sigma = np.where(sigma > 0, sigma, 1.0)
    sr = safe_sigma[:, None] / dist
    sr7 = sr**7
    f = 24.0 * (params.epsilon / safe_sigma[:, None]) * (2.0 * sr7 * sr7 / sr - sr7)
    f = np.where(mask, f, 0.0)
    units = diffs / dist[:, :, None]
    vec = -(units * f[:, :, None]).sum(axis=1)
    vec = np.where(counts[:, None] > 0, vec, 0.0)
    mag = np.sqrt((vec**2).sum(axis=1))
    return vec, mag


def step(state, index, params, workers=1):
    """Advance one agent a single step.

    Returns (state, termination): termination is None while the agent is
    alive, else one of TERMINATIONS.  The returned state always holds the
    last valid position.
    """
    vec, mag = _batch_forces(state.position[None, :], index, params, workers)
    mag = float(mag[0])
    if mag < params.delta:
        return state, "vanished"
    d = vec[0] / mag
    if params.gamma > 0:
        L, m = state.cumulative_magnitude, state.momentum
        d_move = (d * mag + m * L) / (L + mag)
        L_new = params.gamma * L + mag
        m_un = params.gamma * m + d_move
        nm = float(np.sqrt((m_un**2).sum()))
        m_new = m_un / nm if nm > 1e-300 else np.zeros_like(m_un)
    else:
        # Momentum disabled: the accumulators must stay identically zero so
        # a gamma=0 run matches a momentum-free code path bit for bit.
        d_move = d
        L_new, m_new = 0.0, state.momentum
    new_pos = state.position + d_move * params.alpha
    if bool(violates_any(params.constraints, new_pos)[0]):
        return state, "constraint-violated"
    return (
        AgentState(new_pos, m_new, L_new, state.step + 1),
        None,
    )


def run_agent(start, index, params, workers=1):
    """Run one agent to termination; convenience wrapper over run_batch."""
    return run_batch(np.asarray(start, dtype=float)[None, :], index, params, workers)[0]


def run_batch(starts, index, params, workers=1):
    """Run a batch of agents in lockstep and return one Trajectory each.

    All agents advance together so neighbor queries vectorize; numerically
    the result is identical to running agents one at a time, and workers
    only parallelizes tree lookups, so outputs never depend on it.
    """
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    if np.any(violates_any(params.constraints, starts)):
        raise ValueError("all starts must lie inside the box and constraints")
    p, dim = starts.shape

    pos = starts.copy()
    mom = np.zeros_like(pos)
    L = np.zeros(p)
    active = np.ones(p, dtype=bool)
    samples = [[] for _ in range(p)]
    last_step = np.full(p, -1)
    moves = np.full(p, params.n_steps)  # overwritten on early termination
    term = [None] * p
    j = params.rollout_interval

    for i in range(params.n_steps):
        act = np.flatnonzero(active)
        if act.size == 0:
            break
        # Entering iteration i every live agent has completed exactly i moves.
        if i % j == 0:
            for a in act:
                samples[a].append((i, pos[a].copy()))
                last_step[a] = i
        vec, mag = _batch_forces(pos[act], index, params, workers)

        vanished = mag < params.delta
        for a in act[vanished]:
            term[a] = "vanished"
            moves[a] = i
            active[a] = False
        live = act[~vanished]
        if live.size == 0:
            continue
        v = vec[~vanished]
        g = mag[~vanished]
        d = v / g[:, None]

        if params.gamma > 0:
            d_move = (d * g[:, None] + mom[live] * L[live, None]) / (L[live] + g)[:, None]
            L[live] = params.gamma * L[live] + g
            m_un = params.gamma * mom[live] + d_move
            nm = np.sqrt((m_un**2).sum(axis=1))
            mom[live] = np.where(nm[:, None] > 1e-300, m_un / np.where(nm > 0, nm, 1.0)[:, None], 0.0)
        else:
            d_move = d

        cand = pos[live] + d_move * params.alpha
        bad = violates_any(params.constraints, cand)
        for a in live[bad]:
            # The offending move is discarded; the agent rests at its last
            # valid position with i completed moves.
            term[a] = "constraint-violated"
            moves[a] = i
            active[a] = False
        ok = live[~bad]
        pos[ok] = cand[~bad]

    out = []
    for a in range(p):
        if term[a] is None:
            term[a] = "step-limit"
        if last_step[a] != moves[a] or not samples[a]:
            samples[a].append((int(moves[a]), pos[a].copy()))
        out.append(Trajectory(samples[a], term[a]))
    return out
