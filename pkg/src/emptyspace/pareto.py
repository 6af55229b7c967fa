"""Pareto bookkeeping for two oriented objectives.

Dominance works on orientation-adjusted values; the dominance area (the
scalar progress/reward readout) additionally normalizes both objectives
onto [0, 1] against fixed user-declared bounds, so it only grows as better
points arrive and never moves because the scale shifted under it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import ORIENTATIONS


class BudgetExhaustedError(RuntimeError):
    """Raised when a verification would spend past the budget cap."""


@dataclass(frozen=True)
class ObjectivePair:
    """Two target variables with orientations and fixed area bounds."""

    names: tuple
    orientations: tuple
    bounds: tuple  # ((lo, hi), (lo, hi)) in raw units

    def __post_init__(self):
        if len(self.names) != 2 or len(self.orientations) != 2 or len(self.bounds) != 2:
            raise ValueError("exactly two objectives required")
        for o in self.orientations:
            if o not in ORIENTATIONS:
                raise ValueError(f"unknown orientation {o!r}")
        for lo, hi in self.bounds:
            if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
                raise ValueError("objective bounds must be finite with lo < hi")

    def oriented(self, values):
        """Flip minimize columns so that bigger is always better."""
        v = np.atleast_2d(np.asarray(values, dtype=float)).copy()
        for j, o in enumerate(self.orientations):
            if o == "minimize":
                v[:, j] = -v[:, j]
        return v

    def unit_normalized(self, values):
        """Map raw values into the unit square, maximize-sense, clipped."""
        v = np.atleast_2d(np.asarray(values, dtype=float)).astype(float)
        out = np.empty_like(v)
        for j, (o, (lo, hi)) in enumerate(zip(self.orientations, self.bounds)):
            x = (v[:, j] - lo) / (hi - lo)
            out[:, j] = x if o == "maximize" else 1.0 - x
        return np.clip(out, 0.0, 1.0)

    def expanded(self, values):
        """New pair whose bounds also cover the given raw values."""
        v = np.atleast_2d(np.asarray(values, dtype=float))
        bounds = []
        for j, (lo, hi) in enumerate(self.bounds):
            bounds.append((min(lo, float(v[:, j].min())), max(hi, float(v[:, j].max()))))
        return ObjectivePair(self.names, self.orientations, tuple(bounds))


def pareto_front(values, pair):
    """Indices of the non-dominated rows, best first objective first.

    Rows equal in both objectives collapse to one representative, the
    lowest index.  a dominates b when a is >= b in both oriented
    objectives and strictly better in at least one.
    """
    v = pair.oriented(values)
    n = len(v)
    if n == 0:
        return np.empty(0, dtype=int)
    ids = np.arange(n)
    # Sort: first objective desc, second desc, id asc; one sweep then finds
    # the front by tracking the best second objective seen so far.
    order = np.lexsort((ids, -v[:, 1], -v[:, 0]))
    front = []
    best2 = -np.inf
    seen = set()
    for i in order:
        key = (v[i, 0], v[i, 1])
        if key in seen:
            continue  # duplicate row, representative already decided
        seen.add(key)
        if v[i, 1] > best2:
            front.append(i)
            best2 = v[i, 1]
    return np.array(front, dtype=int)


def _staircase(points_unit):
    """Reduce maximize-sense unit points to the sorted dominating staircase."""
    pts = np.atleast_2d(points_unit)
    order = np.lexsort((-pts[:, 1], -pts[:, 0]))
    xs, ys = [], []
    best_y = -np.inf
    for i in order:
        x, y = pts[i]
        if y > best_y:
            xs.append(x)
            ys.append(y)
            best_y = y
    return np.array(xs), np.array(ys)  # x strictly desc, y strictly asc


def dominance_area(values, pair):
    """Area of the union of origin-anchored rectangles under the points.

    values are raw objective rows (any set; dominated rows contribute
    nothing extra).  Result lies in [0, 1].
    """
    v = np.atleast_2d(np.asarray(values, dtype=float))
    if len(v) == 0:
        return 0.0
    unit = pair.unit_normalized(v)
    xs, ys = _staircase(unit)
    # xs descending: first column is the widest rectangle, each following
    # point only adds the strip beyond its successor's height.
    area = 0.0
    prev_y = 0.0
    for x, y in zip(xs, ys):
        area += x * (y - prev_y)
        prev_y = y
    return float(area)


def area_gain(candidates, existing, pair):
    """Dominance-area increase each candidate alone would contribute.

    Vectorized over candidates against the staircase of the existing raw
    values; used to rank proposals by how much frontier they would add.
    """
    cand = pair.unit_normalized(candidates)
    if len(np.atleast_2d(existing)) == 0:
        return cand[:, 0] * cand[:, 1]
    xs, ys = _staircase(pair.unit_normalized(existing))
    gains = np.zeros(len(cand))
    # Region x > xs[0]: nothing dominates there.
    w = np.clip(cand[:, 0] - xs[0], 0.0, None)
    gains += w * cand[:, 1]
    # Inside each staircase band (xs[i+1], xs[i]] the front height is ys[i].
    lo = np.concatenate((xs[1:], [0.0]))
    for i in range(len(xs)):
        width = np.clip(np.minimum(cand[:, 0], xs[i]) - lo[i], 0.0, None)
        height = np.clip(cand[:, 1] - ys[i], 0.0, None)
        gains += width * height
    return gains


@dataclass
class VerifyOutcome:
    """What a verification did to the state."""

    front_expanded: bool
    area_before: float
    area_after: float
    budget_spent: float


class ParetoState:
    """Single-writer tracker of existing vs proposed objective values.

    Estimated values never touch the existing side; verification is the only
    door through, and it pays from the budget.
    """

    def __init__(self, pair, budget_cap):
        self.pair = pair
        self.budget_cap = float(budget_cap)
        self.budget_spent = 0.0
        self.existing_ids = []
        self.existing_values = []
        self.proposed_ids = []
        self.proposed_values = []

    def seed_existing(self, ids, values):
        for i, v in zip(ids, np.atleast_2d(np.asarray(values, dtype=float))):
            self.existing_ids.append(i)
            self.existing_values.append(np.asarray(v, dtype=float))

    def set_proposals(self, ids, values):
        self.proposed_ids = list(ids)
        self.proposed_values = [np.asarray(v, dtype=float) for v in np.atleast_2d(values)] if len(ids) else []

    def existing_matrix(self):
        return np.array(self.existing_values) if self.existing_values else np.empty((0, 2))

    def proposed_matrix(self):
        return np.array(self.proposed_values) if self.proposed_values else np.empty((0, 2))

    def front_existing(self):
        return pareto_front(self.existing_matrix(), self.pair)

    def front_proposed(self):
        return pareto_front(self.proposed_matrix(), self.pair)

    @property
    def area(self):
        return dominance_area(self.existing_matrix(), self.pair)

    def update_on_verify(self, row_id, measured, cost=1.0):
        """Move one configuration onto the existing side with measured values.

        Refuses (raising BudgetExhaustedError) when cost would push spending
        past the cap; re-verifying a known row costs nothing and changes
        nothing, it is reported as a no-op.
        """
        if row_id in self.existing_ids:
            a = self.area
            return VerifyOutcome(False, a, a, self.budget_spent)
        if self.budget_spent + cost > self.budget_cap + 1e-12:
            raise BudgetExhaustedError(
                f"verification cost {cost} exceeds remaining budget "
                f"{self.budget_cap - self.budget_spent:.6g}"
            )
        before = self.area
        front_before = set(self.front_existing().tolist())
        self.existing_ids.append(row_id)
        self.existing_values.append(np.asarray(measured, dtype=float))
        self.budget_spent += cost
        if row_id in self.proposed_ids:
            k = self.proposed_ids.index(row_id)
            del self.proposed_ids[k]
            del self.proposed_values[k]
        after = self.area
        new_idx = len(self.existing_ids) - 1
        expanded = new_idx in set(self.front_existing().tolist())
        return VerifyOutcome(expanded, before, after, self.budget_spent)

    def snapshot(self):
        """Read-only view for transport to UIs."""
        ex = self.existing_matrix()
        pr = self.proposed_matrix()
        return {
            "existing_ids": list(self.existing_ids),
            "existing_values": ex.tolist(),
            "proposed_ids": list(self.proposed_ids),
            "proposed_values": pr.tolist(),
            "front_existing": self.front_existing().tolist(),
            "front_proposed": self.front_proposed().tolist(),
            "dominance_area": self.area,
            "budget_spent": self.budget_spent,
            "budget_cap": self.budget_cap,
        }
