import json

import numpy as np
import pytest

from emptyspace.datagen import gen_demo2d, gen_manifold, gen_void, gen_wineshaped
from emptyspace.io import default_manifest_path, load_csv, save_csv


def test_round_trip_is_byte_stable(tmp_path):
    ds = gen_demo2d(40, seed=3)
    p1 = tmp_path / "a.csv"
    save_csv(ds, p1)
    again = load_csv(p1)
    p2 = tmp_path / "b.csv"
    save_csv(again, p2)
    assert p1.read_bytes() == p2.read_bytes()
    m1 = default_manifest_path(p1).read_bytes()
    m2 = default_manifest_path(p2).read_bytes()
    assert m1 == m2


def test_round_trip_preserves_values_exactly(tmp_path):
    ds = gen_demo2d(25, seed=8)
    path = tmp_path / "x.csv"
    save_csv(ds, path)
    again = load_csv(path)
    assert np.array_equal(ds.input_matrix(), again.input_matrix())
    assert np.array_equal(ds.target_matrix(), again.target_matrix())
    specs = {v.name: v for v in again.variables}
    for v in ds.variables:
        assert specs[v.name].kind == v.kind
        assert specs[v.name].orientation == v.orientation


def test_unknown_column_is_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x1,mystery\n0.1,0.2\n")
    manifest = tmp_path / "bad.manifest.json"
    manifest.write_text(
        json.dumps({"columns": {"x1": {"kind": "input", "min": 0, "max": 1}}})
    )
    with pytest.raises(ValueError, match="mystery"):
        load_csv(path, manifest)


def test_non_numeric_cell_names_row_and_column(tmp_path):
    ds = gen_demo2d(5, seed=1)
    path = tmp_path / "x.csv"
    save_csv(ds, path)
    lines = path.read_text().splitlines()
    lines[3] = lines[3].replace(lines[3].split(",")[0], "oops", 1)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError, match="row 4"):
        load_csv(path)


def test_constant_input_column_is_rejected(tmp_path):
    path = tmp_path / "flat.csv"
    path.write_text("x1,x2\n0.5,0.1\n0.5,0.9\n")
    manifest = tmp_path / "flat.manifest.json"
    manifest.write_text(
        json.dumps(
            {
                "columns": {
                    "x1": {"kind": "input", "min": 0.5, "max": 0.5},
                    "x2": {"kind": "input", "min": 0.0, "max": 1.0},
                }
            }
        )
    )
    with pytest.raises(ValueError):
        load_csv(path, manifest)


def test_loaded_rows_are_existing(tmp_path):
    ds = gen_demo2d(10, seed=2)
    path = tmp_path / "y.csv"
    save_csv(ds, path)
    again = load_csv(path)
    assert all(r.status == "existing" for r in again.rows)


# ------------------------------------------------------------- generators


def test_wineshaped_row_count_and_columns():
    ds = gen_wineshaped()
    assert len(ds) == 1599
    names = [v.name for v in ds.variables]
    assert "volatile_acidity" in names and "alcohol" in names
    assert "quality" in names


def test_wineshaped_quality_distribution():
    ds = gen_wineshaped(seed=0)
    quality = ds.target_matrix(["quality"])[:, 0]
    frac_mid = np.isin(quality, [5.0, 6.0]).mean()
    frac_ends = np.isin(quality, [3.0, 8.0]).mean()
    assert frac_mid > 0.75
    assert frac_ends < 0.03


def test_manifold_shapes():
    pts, agent = gen_manifold("hyperboloid", seed=0)
    assert pts.shape == (900, 3)
    assert np.array_equal(agent, np.zeros(3))
    z = pts[:, 2]
    assert np.all(np.abs(z) >= 2.0 - 1e-12)  # sheets never cross the gap

    pts, agent = gen_manifold("paraboloid", seed=0)
    assert pts.shape == (1000, 4)
    assert np.allclose(pts[:, 3], pts[:, 2] ** 2, atol=0)
    assert np.array_equal(agent, np.array([0.0, 0.0, 0.0, 20.0]))

    pts, agent = gen_manifold("hypersphere", seed=0)
    assert pts.shape == (1000, 4)
    assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) < 1e-12
    assert np.array_equal(agent, np.zeros(4))


def test_manifold_unknown_kind():
    with pytest.raises(ValueError):
        gen_manifold("torus", seed=0)


def test_void_generator_carves_the_pocket():
    center = np.full(4, 0.6)
    pts = gen_void(4, 500, seed=5, center=center, radius=0.3)
    assert pts.shape == (500, 4)
    d = np.linalg.norm(pts - center, axis=1)
    assert np.all(d > 0.3)
    assert np.all((pts >= 0.0) & (pts <= 1.0))


def test_generators_are_seed_deterministic():
    a = gen_wineshaped(seed=4).input_matrix()
    b = gen_wineshaped(seed=4).input_matrix()
    assert np.array_equal(a, b)
    c = gen_void(3, 50, seed=1, center=0.5)
    d = gen_void(3, 50, seed=1, center=0.5)
    assert np.array_equal(c, d)
