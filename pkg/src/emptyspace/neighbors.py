"""Exact k-nearest-neighbor queries over the existing-configuration points.

Built on a kd-tree so queries stay cheap as datasets grow, but distances are
always recomputed with plain numpy so results (values, ordering, tie-breaks)
are defined by this module, not by tree internals.  Points coincident with
the query (distance < COINCIDENT_TOL) are excluded and the next neighbor
takes their slot; ties are broken by ascending row id.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

COINCIDENT_TOL = 1e-12


@dataclass
class NeighborSet:
    """Result of one query: ascending distances, matching ids and directions."""

    indices: np.ndarray
    distances: np.ndarray
    unit_vectors: np.ndarray  # rows point from the query toward each neighbor


def _distances(points, p):
    # Single shared distance formula so index and oracle agree bit for bit.
    return np.sqrt(((points - p) ** 2).sum(axis=1))


class NeighborIndex:
    """Immutable index over an (N, d) point matrix."""

    def __init__(self, points):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or len(points) == 0:
            raise ValueError("index needs a non-empty (N, d) point matrix")
        self.points = points
        self._tree = cKDTree(points)

    def __len__(self):
        return len(self.points)

    def query(self, point, k):
        """Exact k nearest neighbors of one point.

        Returns fewer than k only when the dataset runs out of
        non-coincident points.
        """
        p = np.asarray(point, dtype=float)
        n = len(self.points)
        k_req = min(int(k), n)
        if k_req < 1:
            raise ValueError("k must be >= 1")

        # Fetch enough candidates to survive coincident exclusions, growing
        # on the rare occasions the buffer is not enough.
        fetch = min(n, k_req + 4)
        while True:
            d, _ = self._tree.query(p, k=fetch)
            d = np.atleast_1d(d)
            non_coincident = int((d >= COINCIDENT_TOL).sum())
            if non_coincident >= k_req or fetch == n:
                break
            fetch = min(n, fetch * 2)

        keep = d[d >= COINCIDENT_TOL]
        if keep.size == 0:
            return NeighborSet(
                np.empty(0, dtype=int), np.empty(0), np.empty((0, self.points.shape[1]))
            )
        k_eff = min(k_req, keep.size)
        cut = keep[k_eff - 1]

        # Re-rank everything within the cut radius ourselves; the margin
        # catches candidates the tree rounded the other way on.
        ids = np.asarray(
            self._tree.query_ball_point(p, cut * (1.0 + 1e-9) + 1e-300), dtype=int
        )
        dist = _distances(self.points[ids], p)
        mask = dist >= COINCIDENT_TOL
        ids, dist = ids[mask], dist[mask]
        order = np.lexsort((ids, dist))[:k_eff]
        ids, dist = ids[order], dist[order]
        units = (self.points[ids] - p) / dist[:, None]
        return NeighborSet(ids, dist, units)

    def query_batch(self, X, k, workers=1):
        """Vectorized neighbor lookup for a batch of query points.

        Returns (indices, distances, diffs, counts): shapes (P, k_eff),
        (P, k_eff), (P, k_eff, d) and (P,).  diffs point from each query
        toward its neighbors.  counts[r] is the number of real neighbors in
        row r; when the dataset runs out of non-coincident points the tail
        slots repeat the last real neighbor and must be masked by the caller.
        Exclusion rules match query(); results do not depend on workers.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        n = len(self.points)
        k_eff = min(int(k), n)
        fetch = min(n, k_eff + 2)  # headroom for coincident hits
        d, i = self._tree.query(X, k=fetch, workers=workers)
        d = d.reshape(len(X), fetch)
        i = i.reshape(len(X), fetch)

        diffs = self.points[i] - X[:, None, :]
        dist = np.sqrt((diffs**2).sum(axis=2))
        valid = dist >= COINCIDENT_TOL
        n_valid = valid.sum(axis=1)

        # Stable sort pushes coincident slots to the back, keeping distance order.
        order = np.argsort(~valid, axis=1, kind="stable")[:, :k_eff]
        rows = np.arange(len(X))[:, None]
        out_i = i[rows, order]
        out_d = dist[rows, order]
        out_diff = diffs[rows, order]
        counts = np.minimum(n_valid, k_eff)

        # Rows that exhausted the headroom may be missing real neighbors that
        # hide behind coincident ones; redo those few through the exact path.
        for r in np.flatnonzero((n_valid < k_eff) & (fetch < n)):
            ns = self.query(X[r], k_eff)
            m = len(ns.indices)
            counts[r] = m
            out_i[r, :m] = ns.indices
            out_d[r, :m] = ns.distances
            out_diff[r, :m] = ns.unit_vectors * ns.distances[:, None]
            if 0 < m < k_eff:
                out_i[r, m:] = ns.indices[m - 1]
                out_d[r, m:] = ns.distances[m - 1]
                out_diff[r, m:] = out_diff[r, m - 1]
        short = np.flatnonzero((counts < k_eff) & (counts > 0))
        for r in short:  # pad exhausted rows so downstream masking is cheap
            m = counts[r]
            out_i[r, m:] = out_i[r, m - 1]
            out_d[r, m:] = out_d[r, m - 1]
            out_diff[r, m:] = out_diff[r, m - 1]
        return out_i, out_d, out_diff, counts


def brute_force_query(points, p, k):
    """Reference implementation: full scan, same exclusion and tie rules."""
    points = np.asarray(points, dtype=float)
    p = np.asarray(p, dtype=float)
    dist = _distances(points, p)
    ids = np.flatnonzero(dist >= COINCIDENT_TOL)
    order = np.lexsort((ids, dist[ids]))
    sel = ids[order][: min(k, ids.size)]
    d = dist[sel]
    units = (points[sel] - p) / d[:, None]
    return NeighborSet(sel, d, units)
