import numpy as np
import pytest

from emptyspace.pareto import (
    BudgetExhaustedError,
    ObjectivePair,
    ParetoState,
    area_gain,
    dominance_area,
    pareto_front,
)


def _pair(o1="maximize", o2="maximize", bounds=((0.0, 1.0), (0.0, 1.0))):
    return ObjectivePair(("a", "b"), (o1, o2), bounds)


def _grid_area(values, pair, cells=1000):
    """Midpoint-counting oracle over the unit square."""
    unit = pair.unit_normalized(values)
    c = (np.arange(cells) + 0.5) / cells
    cx, cy = np.meshgrid(c, c, indexing="ij")
    covered = np.zeros(cx.shape, dtype=bool)
    for x, y in unit:
        covered |= (cx <= x) & (cy <= y)
    return covered.mean()


def test_front_hand_case():
    pair = _pair(bounds=((0.0, 2.0), (0.0, 2.0)))
    values = np.array([[1.0, 1.0], [2.0, 0.5], [0.5, 2.0], [0.9, 0.9]])
    idx = pareto_front(values, pair)
    assert idx.tolist() == [1, 0, 2]  # best first objective first
    assert 3 not in idx.tolist()


def test_front_orientation_flip():
    pair = _pair("minimize", "minimize", bounds=((0.0, 2.0), (0.0, 2.0)))
    values = np.array([[1.0, 1.0], [2.0, 0.5], [0.5, 2.0], [0.9, 0.9]])
    idx = pareto_front(values, pair)
    #  (0.9,0.9) dominates (1,1); extremes stay
    assert set(idx.tolist()) == {1, 2, 3}


def test_front_keeps_lowest_index_for_duplicates():
    pair = _pair()
    values = np.array([[0.5, 0.5], [0.9, 0.1], [0.5, 0.5], [0.1, 0.9]])
    idx = pareto_front(values, pair)
    assert 0 in idx.tolist() and 2 not in idx.tolist()


def test_dominance_area_hand_case():
    pair = _pair()
    values = np.array([[1.0, 0.5], [0.5, 1.0]])
    assert dominance_area(values, pair) == 0.75


def test_dominance_area_single_point():
    pair = _pair()
    assert dominance_area(np.array([[0.4, 0.3]]), pair) == pytest.approx(0.12, abs=1e-12)


def test_dominance_area_matches_grid_oracle():
    rng = np.random.default_rng(33)
    orientations = ["maximize", "minimize"]
    for trial in range(20):
        o1, o2 = rng.choice(orientations), rng.choice(orientations)
        lo1, lo2 = rng.uniform(-2, 0, size=2)
        hi1, hi2 = rng.uniform(1, 3, size=2)
        pair = _pair(o1, o2, bounds=((lo1, hi1), (lo2, hi2)))
        n = int(rng.integers(1, 30))
        values = np.column_stack(
            [rng.uniform(lo1, hi1, size=n), rng.uniform(lo2, hi2, size=n)]
        )
        fast = dominance_area(values, pair)
        slow = _grid_area(values, pair)
        assert abs(fast - slow) < 2e-3, f"trial {trial}"


def test_orientation_duality():
    rng = np.random.default_rng(9)
    values = rng.uniform(size=(15, 2))
    a = dominance_area(values, _pair("maximize", "maximize"))
    b = dominance_area(1.0 - values, _pair("minimize", "minimize"))
    assert a == pytest.approx(b, abs=1e-12)


def test_area_gain_matches_direct_recompute():
    rng = np.random.default_rng(41)
    pair = _pair()
    for _ in range(50):
        existing = rng.uniform(size=(int(rng.integers(1, 20)), 2))
        cand = rng.uniform(size=(5, 2))
        gains = area_gain(cand, existing, pair)
        base = dominance_area(existing, pair)
        for i in range(5):
            direct = dominance_area(np.vstack([existing, cand[i : i + 1]]), pair) - base
            assert gains[i] == pytest.approx(direct, abs=1e-12)


def test_area_gain_zero_for_dominated_candidates():
    pair = _pair()
    existing = np.array([[0.9, 0.9]])
    cand = np.array([[0.5, 0.5], [0.9, 0.9], [0.95, 0.2]])
    gains = area_gain(cand, existing, pair)
    assert gains[0] == 0.0
    assert gains[1] == 0.0
    assert gains[2] > 0.0


def test_state_area_monotone_under_verifications():
    rng = np.random.default_rng(3)
    pair = _pair()
    state = ParetoState(pair, budget_cap=100.0)
    state.seed_existing([0, 1], np.array([[0.3, 0.6], [0.6, 0.3]]))
    state.set_proposals(list(range(100, 140)), rng.uniform(size=(40, 2)))
    area = state.area
    for pid in range(100, 140):
        measured = rng.uniform(size=2)
        state.update_on_verify(pid, measured, cost=1.0)
        assert state.area >= area - 1e-12
        area = state.area


def test_budget_refusal_leaves_state_untouched():
    pair = _pair()
    state = ParetoState(pair, budget_cap=2.0)
    state.seed_existing([0], np.array([[0.2, 0.2]]))
    state.set_proposals([10, 11, 12], np.array([[0.5, 0.5], [0.6, 0.6], [0.7, 0.7]]))
    state.update_on_verify(10, np.array([0.5, 0.5]), cost=1.0)
    state.update_on_verify(11, np.array([0.6, 0.6]), cost=1.0)
    before_area = state.area
    before_spent = state.budget_spent
    with pytest.raises(BudgetExhaustedError):
        state.update_on_verify(12, np.array([0.7, 0.7]), cost=1.0)
    assert state.area == before_area
    assert state.budget_spent == before_spent


def test_reverify_is_a_silent_no_op():
    # measurements are final: a second verify of the same row costs nothing,
    # changes nothing, and says so in the outcome (the pipeline layer is
    # what surfaces a warning to the caller)
    pair = _pair()
    state = ParetoState(pair, budget_cap=10.0)
    state.seed_existing([0], np.array([[0.2, 0.2]]))
    state.set_proposals([5], np.array([[0.5, 0.5]]))
    state.update_on_verify(5, np.array([0.5, 0.5]))
    spent = state.budget_spent
    area = state.area
    out = state.update_on_verify(5, np.array([0.9, 0.9]))
    assert not out.front_expanded
    assert out.area_before == out.area_after == pytest.approx(area)
    assert state.budget_spent == spent
    assert state.area == pytest.approx(area, abs=1e-15)


def test_snapshot_shape():
    pair = _pair()
    state = ParetoState(pair, budget_cap=5.0)
    state.seed_existing([0, 1], np.array([[0.3, 0.6], [0.6, 0.3]]))
    snap = state.snapshot()
    assert snap["dominance_area"] == pytest.approx(state.area)
    assert snap["budget_cap"] == 5.0
    assert len(snap["front_existing"]) == 2


def test_objective_pair_validation():
    with pytest.raises(ValueError):
        ObjectivePair(("a",), ("maximize",), ((0.0, 1.0),))
    with pytest.raises(ValueError):
        _pair("upward", "maximize")
    with pytest.raises(ValueError):
        _pair(bounds=((1.0, 1.0), (0.0, 1.0)))
