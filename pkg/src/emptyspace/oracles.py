"""Verification oracles: the pluggable "measure this configuration" hook.

An oracle maps normalized input vectors to raw two-objective outcomes plus a
per-row verification cost.  Production deployments plug a real measurement
system in; the bundled analytic ones exist so pipelines, experiments, and
tests can run closed-loop with known ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Configuration, Dataset, VariableSpec


@dataclass(frozen=True)
class OracleSpec:
    names: tuple
    orientations: tuple
    bounds: tuple


class AnalyticOracle:
    """Base: subclasses implement _evaluate(X) -> (N, 2) raw values."""

    spec: OracleSpec

    def evaluate(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self._evaluate(X)

    def cost(self, X):
        return np.ones(len(np.atleast_2d(X)))


def _sq_dist(X, anchor):
    return ((X - anchor) ** 2).sum(axis=1)


class QuadraticTwinOracle(AnalyticOracle):
    """Smooth two-objective landscape with a clean trade-off.

    merit peaks at anchor A (maximize), expense bottoms out at anchor B
    (minimize); the best trade-offs lie between the anchors, away from the
    center of the box where seed data usually sits.
    """

    def __init__(self, d=5):
        self.d = d
        self.a = np.full(d, 0.85)
        self.b = np.full(d, 0.15)
        worst = max(_sq_dist(np.zeros((1, d)), self.b)[0], _sq_dist(np.ones((1, d)), self.b)[0])
        self.spec = OracleSpec(
            ("merit", "expense"),
            ("maximize", "minimize"),
            ((0.0, 1.05), (0.0, float(worst) * 1.05)),
        )

    def _evaluate(self, X):
        merit = 1.0 / (1.0 + 4.0 * _sq_dist(X, self.a))
        expense = _sq_dist(X, self.b)
        return np.column_stack([merit, expense])


class MultimodalTwinOracle(AnalyticOracle):
    """QuadraticTwin plus cosine ripples: many local optima.

    The merit anchor sits at 0.7 per axis, far enough from every face that a
    ball around it fits inside the box; benchmark datasets carve their
    unexplored pocket there.
    """

    def __init__(self, d=5, ripple=0.05, freq=3.0):
        self.d = d
        self.ripple = ripple
        self.freq = freq
        self.a = np.full(d, 0.7)
        self.b = np.full(d, 0.15)
        worst = max(_sq_dist(np.zeros((1, d)), self.b)[0], _sq_dist(np.ones((1, d)), self.b)[0])
        self.spec = OracleSpec(
            ("merit", "expense"),
            ("maximize", "minimize"),
            ((-ripple, 1.05 + ripple), (-ripple * worst, float(worst) * (1.05 + ripple))),
        )

    def _evaluate(self, X):
        wobble = np.cos(2.0 * np.pi * self.freq * X).mean(axis=1)
        merit = 1.0 / (1.0 + 4.0 * _sq_dist(X, self.a)) + self.ripple * wobble
        expense = _sq_dist(X, self.b) * (1.0 + self.ripple * wobble)
        return np.column_stack([merit, expense])


class LinearNoiseOracle(AnalyticOracle):
    """Linear response plus deterministic pseudo-noise.

    The noise is a fixed function of the input (not of call order), so
    re-verifying the same configuration reproduces the same measurement.
    """

    def __init__(self, d=5, noise=0.02, seed=7):
        self.d = d
        self.noise = noise
        rng = np.random.default_rng(seed)
        self.w1 = rng.uniform(0.5, 1.5, size=d)
        self.w2 = rng.uniform(0.5, 1.5, size=d)
        self._phases = rng.uniform(0, 2 * np.pi, size=d)
        hi1, hi2 = float(self.w1.sum()), float(self.w2.sum())
        self.spec = OracleSpec(
            ("yield", "drag"),
            ("maximize", "minimize"),
            ((-4 * noise, hi1 + 4 * noise), (-4 * noise, hi2 + 4 * noise)),
        )

    def _pseudo_noise(self, X):
        return np.sin(X @ (self._phases * 997.0)) * self.noise

    def _evaluate(self, X):
        n = self._pseudo_noise(X)
        return np.column_stack([X @ self.w1 + n, X @ self.w2 - n])


ORACLES = {
    "quadratic": QuadraticTwinOracle,
    "multimodal": MultimodalTwinOracle,
    "linear-noise": LinearNoiseOracle,
}


def make_oracle(name, d=5):
    if name not in ORACLES:
        raise ValueError(f"unknown oracle {name!r}; choose from {sorted(ORACLES)}")
    return ORACLES[name](d=d)


def unit_box_variables(d, oracle):
    """Variable specs for oracle experiments run directly in the unit box."""
    variables = [VariableSpec(f"x{j + 1}", 0.0, 1.0) for j in range(d)]
    for name, orientation, (lo, hi) in zip(
        oracle.spec.names, oracle.spec.orientations, oracle.spec.bounds
    ):
        variables.append(VariableSpec(name, lo, hi, kind="target", orientation=orientation))
    return variables


def evaluate_into_dataset(points, oracle, provenance="seed"):
    """Measure points with the oracle and wrap everything as a dataset."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = oracle.evaluate(points)
    variables = unit_box_variables(points.shape[1], oracle)
    rows = [
        Configuration(p, t, status="existing", provenance=provenance)
        for p, t in zip(points, values)
    ]
    return Dataset(variables, rows)
