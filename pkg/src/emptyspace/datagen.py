"""Synthetic data: demo sets, benchmark manifolds, and a wine-shaped table.

The manifold generators exist to exercise the neighborhood embedding on
shapes whose geometry is known exactly; the wine-shaped generator mimics the
shape of a well-known physicochemical quality table (11 inputs, integer
quality 3..8, heavily imbalanced) without containing a byte of it.
"""
from __future__ import annotations

import numpy as np

from .dataset import Configuration, Dataset, VariableSpec
from .oracles import QuadraticTwinOracle, evaluate_into_dataset


def gen_manifold(kind, seed=0):
    """Benchmark point clouds for the neighborhood embedding.

    Returns (points, agent).  Kinds:
      hyperboloid - 30x30 grid on [-1,1]^2, z = +/-2*sqrt(x^2/0.04 + y^2/0.04 + 1),
                    sign checkerboarded so both sheets appear; agent at the origin
                    between the sheets (900 points).
      paraboloid  - 10 uniform axis samples on [-5,5]^3 lifted to (x, y, z, z^2);
                    agent (0, 0, 0, 20) (1000 points).
      hypersphere - 1000 uniform angle triples on the unit 4-sphere; agent at
                    the center, so every neighbor distance is exactly 1.
    """
    if kind == "hyperboloid":
        axis = np.linspace(-1.0, 1.0, 30)
        xx, yy = np.meshgrid(axis, axis, indexing="ij")
        sign = np.where((np.add.outer(np.arange(30), np.arange(30)) % 2) == 0, 1.0, -1.0)
        zz = sign * 2.0 * np.sqrt(xx**2 / 0.04 + yy**2 / 0.04 + 1.0)
        pts = np.column_stack([xx.ravel(), yy.ravel(), zz.ravel()])
        return pts, np.zeros(3)
    if kind == "paraboloid":
        axis = np.linspace(-5.0, 5.0, 10)
        xx, yy, zz = np.meshgrid(axis, axis, axis, indexing="ij")
        pts = np.column_stack([xx.ravel(), yy.ravel(), zz.ravel(), (zz**2).ravel()])
        return pts, np.array([0.0, 0.0, 0.0, 20.0])
    if kind == "hypersphere":
        rng = np.random.default_rng(seed)
        psi = rng.uniform(0.0, 2.0 * np.pi, 1000)
        theta = rng.uniform(0.0, np.pi, 1000)
        phi = rng.uniform(0.0, np.pi, 1000)
        pts = np.column_stack(
            [
                np.cos(psi) * np.sin(theta) * np.sin(phi),
                np.sin(psi) * np.sin(theta) * np.sin(phi),
                np.cos(theta) * np.sin(phi),
                np.cos(phi),
            ]
        )
        return pts, np.zeros(4)
    raise ValueError(f"unknown manifold kind {kind!r}")


def gen_demo2d(size=300, seed=0):
    """Small 2D dataset with natural gaps, ready for end-to-end demos."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, 1.0, size=(size, 2))
    return evaluate_into_dataset(pts, QuadraticTwinOracle(d=2))


def gen_blob(d, size, seed, center=0.5, spread=0.12):
    """Gaussian cloud truncated to the unit box by resampling.

    The classic seed-data shape: measurements huddle around a known-good
    region and leave the rest of the box empty.
    """
    rng = np.random.default_rng(seed)
    out = np.empty((0, d))
    while len(out) < size:
        cand = rng.normal(center, spread, size=(size * 2, d))
        ok = cand[np.all((cand >= 0.0) & (cand <= 1.0), axis=1)]
        out = np.vstack([out, ok])
    return out[:size]


def gen_void(d, size, seed, center, radius=0.35):
    """Uniform box sample with a deliberately unexplored ball carved out.

    Models the situation the search targets: measurements cover the space
    except for a pocket nobody has tried yet.  Rejection keeps the rest of
    the distribution exactly uniform.
    """
    center = np.broadcast_to(np.asarray(center, dtype=float), (d,))
    rng = np.random.default_rng(seed)
    out = np.empty((0, d))
    while len(out) < size:
        cand = rng.uniform(0.0, 1.0, size=(size * 2, d))
        ok = cand[((cand - center) ** 2).sum(axis=1) > radius * radius]
        out = np.vstack([out, ok])
    return out[:size]


_WINE_COLUMNS = (
    # name, base mean, noise sd, per-quality-step shift, (lo, hi)
    ("fixed_acidity", 8.3, 1.6, 0.10, (4.0, 16.0)),
    ("volatile_acidity", 0.53, 0.16, -0.06, (0.10, 1.60)),
    ("citric_acid", 0.27, 0.17, 0.05, (0.0, 1.0)),
    ("residual_sugar", 2.5, 1.1, 0.02, (0.9, 15.0)),
    ("chlorides", 0.087, 0.04, -0.007, (0.012, 0.60)),
    ("free_sulfur_dioxide", 15.9, 9.0, -0.6, (1.0, 72.0)),
    ("total_sulfur_dioxide", 46.0, 30.0, -4.0, (6.0, 289.0)),
    ("density", 0.9967, 0.0018, -0.0004, (0.990, 1.004)),
    ("ph", 3.31, 0.15, -0.01, (2.7, 4.0)),
    ("sulphates", 0.66, 0.16, 0.05, (0.33, 2.0)),
    ("alcohol", 10.4, 1.0, 0.45, (8.4, 14.9)),
)

_QUALITY_LEVELS = np.array([3, 4, 5, 6, 7, 8])
_QUALITY_PROBS = np.array([0.005, 0.07, 0.43, 0.42, 0.07, 0.005])


def gen_wineshaped(size=1599, seed=0):
    """Imbalanced 11-input quality table shaped like the familiar one.

    Roughly 85% of rows land on quality 5 or 6 and about 1% on 3 or 8;
    inputs correlate loosely with quality through per-column shifts.
    """
    rng = np.random.default_rng(seed)
    quality = rng.choice(_QUALITY_LEVELS, size=size, p=_QUALITY_PROBS)
    offset = quality - 5.5  # centered on the bulk of the distribution

    cols = []
    for name, mean, sd, shift, (lo, hi) in _WINE_COLUMNS:
        col = rng.normal(mean + shift * offset * 3.0, sd)
        cols.append(np.clip(col, lo, hi))
    data = np.column_stack(cols)

    variables = [
        VariableSpec(name, lo, hi) for name, _, _, _, (lo, hi) in _WINE_COLUMNS
    ]
    variables.append(VariableSpec("quality", 3.0, 8.0, kind="target", orientation="maximize"))

    ds = Dataset(variables)
    rows = []
    for i in range(size):
        values, _ = ds.normalize(data[i])
        rows.append(Configuration(values, [float(quality[i])], status="existing"))
    return Dataset(variables, rows)
