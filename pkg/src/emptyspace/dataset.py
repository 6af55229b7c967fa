"""Core data model: variables, configurations, datasets, constraints.

All geometry in this package happens in normalized coordinates: every input
variable is min-max scaled to [0, 1], so the search space is the unit box.
Target variables stay in raw units and are only touched by analytics that
know their orientation.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

# Index reported when the implicit unit-box constraint is the one violated.
BOX_CONSTRAINT = -1

VARIABLE_KINDS = ("input", "target")
ORIENTATIONS = ("maximize", "minimize")
STATUSES = ("existing", "proposed")
PROVENANCES = (
    "seed",
    "esa",
    "random-sample",
    "random-walk",
    "pareto-improvement",
    "blank",
    "user-edited",
    "gradient-refined",
)


@dataclass(frozen=True)
class VariableSpec:
    """One column of a dataset.

    min/max define the normalization map for inputs and the display range
    for targets.  Targets carry an orientation so analytics know which way
    is better.
    """

    name: str
    min: float
    max: float
    kind: str = "input"
    orientation: str | None = None

    def __post_init__(self):
        if self.kind not in VARIABLE_KINDS:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if not np.isfinite(self.min) or not np.isfinite(self.max):
            raise ValueError(f"variable {self.name!r}: non-finite range")
        if self.min >= self.max:
            raise ValueError(
                f"variable {self.name!r}: min {self.min} must be < max {self.max}"
            )
        if self.orientation is not None and self.orientation not in ORIENTATIONS:
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if self.kind == "input" and self.orientation is not None:
            raise ValueError(
                f"variable {self.name!r}: orientation only makes sense on targets"
            )


@dataclass
class Configuration:
    """A single point in configuration space.

    values are normalized inputs in [0, 1]; targets are raw-unit outcome
    values (None until known).  targets_estimated marks surrogate output
    that has not been verified.
    """

    values: np.ndarray
    targets: np.ndarray | None = None
    status: str = "proposed"
    provenance: str = "seed"
    targets_estimated: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("values must be a flat vector")
        if np.any(self.values < 0.0) or np.any(self.values > 1.0):
            raise ValueError("normalized values must lie in [0, 1]")
        if self.targets is not None:
            self.targets = np.asarray(self.targets, dtype=float)
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.status == "existing":
            if self.targets is None:
                raise ValueError("existing rows must carry measured targets")
            if self.targets_estimated:
                raise ValueError("existing rows cannot carry estimated targets")

    def verified(self, targets) -> "Configuration":
        """Return the existing-status copy produced by a verification."""
        if self.status == "existing":
            raise ValueError("row is already verified; measurements are final")
        return replace(
            self,
            targets=np.asarray(targets, dtype=float),
            status="existing",
            targets_estimated=False,
        )


class Dataset:
    """An immutable-by-convention snapshot of rows plus variable specs.

    Mutation helpers return a new snapshot with version + 1; nothing in the
    package writes through an existing instance, which is what makes shared
    snapshots safe across agents and sessions.
    """

    def __init__(self, variables, rows=(), version=0):
        self.variables = list(variables)
        self.rows = list(rows)
        self.version = version
        if not self.input_specs:
            raise ValueError("dataset needs at least one input variable")
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self._input_matrix = None

    @property
    def input_specs(self):
        return [v for v in self.variables if v.kind == "input"]

    @property
    def target_specs(self):
        return [v for v in self.variables if v.kind == "target"]

    @property
    def n_inputs(self):
        return len(self.input_specs)

    def input_mins(self):
        return np.array([v.min for v in self.input_specs])

    def input_maxs(self):
        return np.array([v.max for v in self.input_specs])

    def normalize(self, raw):
        """Map raw input values onto [0, 1] per the variable ranges.

        Returns (values, clamped) where clamped flags coordinates that fell
        outside their declared range and were clipped.
        """
        raw = np.asarray(raw, dtype=float)
        d = self.n_inputs
        if raw.shape[-1:] != (d,):
            raise ValueError(
                f"dimension mismatch: expected {d} input values, got {raw.shape[-1] if raw.ndim else 0}"
            )
        lo, hi = self.input_mins(), self.input_maxs()
        values = (raw - lo) / (hi - lo)
        clamped = (values < 0.0) | (values > 1.0)
        return np.clip(values, 0.0, 1.0), clamped

    def denormalize(self, values):
        """Inverse of normalize (exact affine, no clamping)."""
        values = np.asarray(values, dtype=float)
        lo, hi = self.input_mins(), self.input_maxs()
        return lo + values * (hi - lo)

    def input_matrix(self):
        """(N, d) matrix of normalized input values, cached per snapshot."""
        if self._input_matrix is None:
            if self.rows:
                self._input_matrix = np.array([r.values for r in self.rows])
            else:
                self._input_matrix = np.empty((0, self.n_inputs))
        return self._input_matrix

    def target_matrix(self, names=None):
        """(N, t) matrix of raw target values for rows that have them."""
        specs = self.target_specs
        if names is not None:
            order = {v.name: i for i, v in enumerate(specs)}
            cols = [order[n] for n in names]
        else:
            cols = list(range(len(specs)))
        out = np.full((len(self.rows), len(cols)), np.nan)
        for i, row in enumerate(self.rows):
            if row.targets is not None:
                out[i] = np.asarray(row.targets)[cols]
        return out

    def with_rows(self, new_rows):
        """New snapshot with rows appended and the version bumped."""
        ds = Dataset(self.variables, self.rows + list(new_rows), self.version + 1)
        return ds

    def __len__(self):
        return len(self.rows)


# ---------------------------------------------------------------------------
# Constraints.  All operate on normalized coordinates; the unit box itself is
# implicit and always checked first.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoxConstraint:
    """Axis-aligned sub-box: satisfied iff lo <= x <= hi coordinate-wise."""

    lo: np.ndarray
    hi: np.ndarray
    kind: str = field(default="box", init=False)

    def violates(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        return np.any((X < lo) | (X > hi), axis=1)


@dataclass(frozen=True)
class Halfspace:
    """Linear constraint a.x - b <= 0; violation means the strict opposite."""

    coeffs: np.ndarray
    offset: float
    kind: str = field(default="halfspace", init=False)

    def violates(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X @ np.asarray(self.coeffs, dtype=float) - self.offset > 0.0


@dataclass(frozen=True)
class IntervalBrush:
    """Per-variable allowed intervals, the constraint form brushes produce.

    intervals maps input-variable index -> (lo, hi) in normalized units.
    Unbrushed variables are unconstrained.
    """

    intervals: tuple
    kind: str = field(default="interval-brush", init=False)

    def __init__(self, intervals):
        if isinstance(intervals, dict):
            intervals = tuple(sorted((int(k), (float(v[0]), float(v[1]))) for k, v in intervals.items()))
        object.__setattr__(self, "intervals", tuple(intervals))
        for _, (lo, hi) in self.intervals:
            if lo > hi:
                raise ValueError("brush interval with lo > hi")

    def violates(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        bad = np.zeros(len(X), dtype=bool)
        for j, (lo, hi) in self.intervals:
            bad |= (X[:, j] < lo) | (X[:, j] > hi)
        return bad


def evaluate_constraints(constraints, p):
    """Check p against the unit box then each constraint in declaration order.

    Returns None when satisfied, BOX_CONSTRAINT for a box violation, or the
    index of the first violated constraint.
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < 0.0) or np.any(p > 1.0):
        return BOX_CONSTRAINT
    for i, c in enumerate(constraints):
        if bool(c.violates(p)[0]):
            return i
    return None


def violates_any(constraints, X):
    """Vectorized feasibility test including the implicit box.

    Returns a boolean mask over the rows of X (True = infeasible).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    bad = np.any((X < 0.0) | (X > 1.0), axis=1)
    for c in constraints:
        bad |= c.violates(X)
    return bad


def feasible_box(constraints, d):
    """Intersection box when every constraint is axis-aligned, else None.

    Used to sample starts directly instead of by rejection.  Returns (lo, hi)
    arrays; raises if the intersection is empty.
    """
    lo = np.zeros(d)
    hi = np.ones(d)
    for c in constraints:
        if isinstance(c, BoxConstraint):
            lo = np.maximum(lo, c.lo)
            hi = np.minimum(hi, c.hi)
        elif isinstance(c, IntervalBrush):
            for j, (a, b) in c.intervals:
                lo[j] = max(lo[j], a)
                hi[j] = min(hi[j], b)
        else:
            return None
    if np.any(lo > hi):
        raise ValueError("constraints leave no feasible volume")
    return lo, hi
