import numpy as np

from emptyspace.neighbors import COINCIDENT_TOL, NeighborIndex, brute_force_query


def test_matches_brute_force_on_random_triples():
    # The acceptance suite runs the 1,000-triple version; this is the
    # fast per-module guard.
    rng = np.random.default_rng(42)
    for trial in range(200):
        d = rng.choice([2, 5, 11, 20])
        n = int(rng.integers(5, 120))
        k = int(rng.integers(1, 12))
        points = rng.uniform(size=(n, d))
        q = rng.uniform(size=d)
        index = NeighborIndex(points)
        got = index.query(q, k)
        want = brute_force_query(points, q, k)
        assert got.indices.tolist() == want.indices.tolist(), f"trial {trial}"
        assert np.array_equal(got.distances, want.distances)


def test_query_from_a_dataset_point_excludes_itself():
    rng = np.random.default_rng(7)
    points = rng.uniform(size=(30, 4))
    index = NeighborIndex(points)
    res = index.query(points[13], 5)
    assert 13 not in res.indices.tolist()
    assert np.all(res.distances > COINCIDENT_TOL)


def test_duplicate_points_break_ties_by_row_order():
    points = np.array([[0.5, 0.5], [0.2, 0.2], [0.5, 0.5], [0.5, 0.5]])
    index = NeighborIndex(points)
    res = index.query(np.array([0.6, 0.5]), 3)
    # three coincident rows all at distance 0.1: lowest ids first
    assert res.indices.tolist() == [0, 2, 3]


def test_k_larger_than_available_neighbors():
    points = np.array([[0.1, 0.1], [0.9, 0.9], [0.1, 0.1]])
    index = NeighborIndex(points)
    res = index.query(np.array([0.1, 0.1]), 9)
    # both coincident rows drop out, one real neighbor remains
    assert res.indices.tolist() == [1]


def test_unit_vectors_point_toward_neighbors():
    rng = np.random.default_rng(3)
    points = rng.uniform(size=(40, 3))
    index = NeighborIndex(points)
    q = rng.uniform(size=3)
    res = index.query(q, 6)
    for i, idx in enumerate(res.indices):
        expect = (points[idx] - q) / np.linalg.norm(points[idx] - q)
        assert np.allclose(res.unit_vectors[i], expect, atol=1e-12)


def test_batch_equals_single_queries_bitwise():
    rng = np.random.default_rng(19)
    points = rng.uniform(size=(200, 5))
    index = NeighborIndex(points)
    X = rng.uniform(size=(50, 5))
    ids, dist, diff, counts = index.query_batch(X, 9)
    for i in range(len(X)):
        single = index.query(X[i], 9)
        m = counts[i]
        assert m == len(single.indices)
        assert ids[i, :m].tolist() == single.indices.tolist()
        assert np.array_equal(dist[i, :m], single.distances)
        # diff rows are the exact point differences; the single-query path
        # exposes them as unit vectors, so compare each in its exact form.
        assert np.array_equal(diff[i, :m], points[ids[i, :m]] - X[i])
        assert np.array_equal(
            single.unit_vectors, diff[i, :m] / dist[i, :m][:, None]
        )


def test_batch_handles_rows_sitting_on_data_points():
    rng = np.random.default_rng(23)
    points = rng.uniform(size=(25, 3))
    X = np.vstack([points[4], points[11], rng.uniform(size=3)])
    index = NeighborIndex(points)
    ids, dist, _, counts = index.query_batch(X, 6)
    for i in range(len(X)):
        single = index.query(X[i], 6)
        assert ids[i, : counts[i]].tolist() == single.indices.tolist()
        assert np.array_equal(dist[i, : counts[i]], single.distances)


def test_workers_do_not_change_results():
    rng = np.random.default_rng(31)
    points = rng.uniform(size=(300, 8))
    index = NeighborIndex(points)
    X = rng.uniform(size=(64, 8))
    a = index.query_batch(X, 7, workers=1)
    b = index.query_batch(X, 7, workers=4)
    for left, right in zip(a, b):
        assert np.array_equal(left, right)
