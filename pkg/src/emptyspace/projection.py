"""Projections that the linked views are built on.

Two tools live here: plain PCA (global map, axis linkage through loading
vectors) and a cosine-preserving neighborhood embedding that shows where a
single point sits relative to its nearest neighbors without lying about the
distances to them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COINCIDENT_TOL = 1e-12


@dataclass
class PcaModel:
    """Fitted principal-component map.

    components has one orthonormal row per kept component; the loading
    vector of input variable j is components[:, j], i.e. where a unit move
    along that variable lands on the map.
    """

    mean: np.ndarray
    components: np.ndarray
    explained_variance_ratio: np.ndarray
    training_scores: np.ndarray


def fit_pca(points, n_components=2):
    """Fit by eigendecomposition of the covariance of mean-centered points.

    Deterministic up to nothing: each component is sign-fixed so its
    largest-magnitude entry is positive.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim != 2 or len(X) < 2:
        raise ValueError("PCA needs at least two points")
    n, d = X.shape
    if not 1 <= n_components <= d:
        raise ValueError("n_components must be within the input dimension")
    mean = X.mean(axis=0)
    cov = np.atleast_2d(np.cov(X, rowvar=False))
    total = float(np.trace(cov))
    # Constant columns leave residuals ~eps*scale after centering, so the
    # trace never reaches exact zero; compare against that noise floor.
    scale = float(np.abs(X).max())
    if total <= 1e-20 * max(1.0, scale * scale):
        raise ValueError("degenerate variance: all points identical")
    w, V = np.linalg.eigh(cov)
    order = np.argsort(w)[::-1][:n_components]
    comps = V[:, order].T.copy()
    for row in comps:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    ratios = np.clip(w[order], 0.0, None) / total
    model = PcaModel(mean, comps, ratios, None)
    model.training_scores = project(model, X)
    return model


def project(model, p):
    """Map a point (d,) or matrix (N, d) onto the component axes."""
    p = np.asarray(p, dtype=float)
    return (p - model.mean) @ model.components.T


def move_delta(model, j, delta):
    """Map displacement of a single input variable: delta times its loading.

    Exactly equals project(p + delta * e_j) - project(p) for any p, which is
    what lets an axis edit be drawn on the map without refitting anything.
    """
    return model.components[:, j] * float(delta)


def reconstruct(model, scores):
    """Back-map scores onto input space (exact when all components kept)."""
    scores = np.asarray(scores, dtype=float)
    return scores @ model.components + model.mean


def scree(model):
    """(component, ratio, cumulative ratio) triples for the kept components."""
    out = []
    cum = 0.0
    for i, r in enumerate(model.explained_variance_ratio):
        cum += float(r)
        out.append((i, float(r), cum))
    return out


@dataclass
class NeighborEmbedding:
    """2D layout of one point's neighbors, agent pinned at the origin.

    Every embedded neighbor keeps its true distance to the agent; the
    angles carry the (rank-2 approximated) between-neighbor cosines.
    gram_trace_fraction says how much of the cosine structure the two kept
    eigenvalues explain.
    """

    points: np.ndarray
    original_distances: np.ndarray
    eigenvalues: np.ndarray
    gram_trace_fraction: float

    @property
    def center(self):
        return np.zeros(2)


def cos_mds(agent, neighbors):
    """Embed neighbors of a point into 2D preserving agent-relative geometry.

    Builds unit vectors from the agent to each neighbor, eigendecomposes
    their plain Gram matrix (no double centering: the agent itself is the
    origin), keeps the top two eigenpairs, then rescales every embedded
    vector back to its original length.
    """
    agent = np.asarray(agent, dtype=float)
    P = np.atleast_2d(np.asarray(neighbors, dtype=float)) - agent
    n = len(P)
    if n < 2:
        raise ValueError("need at least two neighbors to embed")
    lengths = np.sqrt((P**2).sum(axis=1))
    if np.any(lengths < COINCIDENT_TOL):
        raise ValueError("neighbor coincides with the agent")
    U = P / lengths[:, None]

    G = U @ U.T
    w, V = np.linalg.eigh(G)
    if w[0] < -1e-9 * max(1.0, w[-1]):
        raise ValueError("Gram matrix unexpectedly indefinite")
    top = np.argsort(w)[::-1][:2]
    lam = np.clip(w[top], 0.0, None)
    E = V[:, top] * np.sqrt(lam)[None, :]
    for col in range(E.shape[1]):  # sign convention for layout stability
        c = E[:, col]
        if c[np.argmax(np.abs(c))] < 0:
            E[:, col] = -c

    norms = np.sqrt((E**2).sum(axis=1))
    dirs = np.where(
        norms[:, None] > 1e-15,
        E / np.where(norms > 0, norms, 1.0)[:, None],
        np.array([1.0, 0.0]),
    )
    points = dirs * lengths[:, None]
    fraction = float(lam.sum() / n)  # unit vectors: trace(G) == n
    return NeighborEmbedding(points, lengths, lam, fraction)
