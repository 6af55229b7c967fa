import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from emptyspace.datagen import gen_demo2d
from emptyspace.gateway import create_app
from emptyspace.projection import fit_pca, move_delta


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def _session(client, **overrides):
    body = {"dataset": "demo2d", "seed": 0}
    body.update(overrides)
    r = client.post("/sessions", json=body)
    assert r.status_code == 200, r.text
    return r.json()


def _propose(client, sid, n=3, strategy="random-sampling", seed=5):
    r = client.post(
        f"/sessions/{sid}/search",
        json={"strategy": strategy, "batch_size": n, "seed": seed},
    )
    assert r.status_code == 200, r.text
    return r.json()


# ----------------------------------------------------------------- sessions


def test_session_creation_and_lookup(client):
    s = _session(client)
    assert s["rows"] == 300
    assert s["phase"] in ("Initial", "Developed", "Expert")
    assert s["objectives"]["names"] == ["merit", "expense"]
    assert s["budget"]["cap"] == 50.0
    again = client.get(f"/sessions/{s['session_id']}").json()
    assert again == s


def test_session_validation(client):
    assert client.post("/sessions", json={"dataset": "nope"}).status_code == 422
    r = client.post("/sessions", json={"dataset": "demo2d", "t1": 5.0, "t2": 9.0})
    assert r.status_code == 422
    assert client.get("/sessions/does-not-exist").status_code == 404


def test_sessions_are_isolated(client):
    a = _session(client)
    b = _session(client)
    pids = _propose(client, a["session_id"], 2)["proposal_ids"]
    r = client.post(
        f"/sessions/{a['session_id']}/verify", json={"proposal_ids": pids}
    )
    assert r.status_code == 200
    b_after = client.get(f"/sessions/{b['session_id']}").json()
    assert b_after["rows"] == 300
    assert b_after["dataset_version"] == b["dataset_version"]
    a_after = client.get(f"/sessions/{a['session_id']}").json()
    assert a_after["rows"] == 302


# ------------------------------------------------------------------ search


def test_search_returns_full_proposals(client):
    s = _session(client)
    out = _propose(client, s["session_id"], 4)
    assert len(out["proposal_ids"]) == 4
    for p in out["proposals"]:
        assert len(p["values"]) == 2
        assert all(0.0 <= v <= 1.0 for v in p["values"])
        assert p["status"] == "proposed"
    assert out["dataset_version"] == s["dataset_version"]


def test_search_rejects_bad_requests(client):
    s = _session(client)
    sid = s["session_id"]
    r = client.post(f"/sessions/{sid}/search", json={"batch_size": 0})
    assert r.status_code == 422
    r = client.post(f"/sessions/{sid}/search", json={"strategy": "bogus", "batch_size": 2})
    assert r.status_code == 422
    r = client.post(
        f"/sessions/{sid}/search",
        json={"batch_size": 2, "esa": {"not_a_param": 1}},
    )
    assert r.status_code == 422


def test_stale_version_pin_is_refused(client):
    s = _session(client)
    sid = s["session_id"]
    r = client.post(
        f"/sessions/{sid}/search",
        json={"batch_size": 2, "dataset_version": s["dataset_version"] + 7},
    )
    assert r.status_code == 409
    # a correct pin goes through
    r = client.post(
        f"/sessions/{sid}/search",
        json={"batch_size": 2, "dataset_version": s["dataset_version"]},
    )
    assert r.status_code == 200


def test_search_with_brush_respects_it(client):
    s = _session(client)
    out = client.post(
        f"/sessions/{s['session_id']}/search",
        json={"strategy": "random-sampling", "batch_size": 20, "seed": 3,
              "brushes": {"0": [0.4, 0.6]}},
    ).json()
    for p in out["proposals"]:
        assert 0.4 <= p["values"][0] <= 0.6


def test_search_job_round_trip(client):
    s = _session(client)
    sid = s["session_id"]
    r = client.post(
        f"/sessions/{sid}/search/jobs",
        json={"strategy": "random-sampling", "batch_size": 4, "seed": 9},
    )
    jid = r.json()["job_id"]
    deadline = time.time() + 10.0
    while time.time() < deadline:
        job = client.get(f"/sessions/{sid}/jobs/{jid}").json()
        if job["status"] != "running":
            break
        time.sleep(0.02)
    assert job["status"] == "done", job
    assert len(job["result"]["proposal_ids"]) == 4
    assert client.get(f"/sessions/{sid}/jobs/zzz").status_code == 404


# ------------------------------------------------------------------- edits


def test_edit_displacement_matches_loading_vectors(client):
    s = _session(client)
    sid = s["session_id"]
    pid = _propose(client, sid, 1)["proposal_ids"][0]
    deltas = {"0": 0.07, "1": -0.11}
    r = client.patch(
        f"/sessions/{sid}/proposals/{pid}", json={"deltas": deltas}
    )
    assert r.status_code == 200, r.text
    got = np.array(r.json()["displacement"])

    # same dataset the registry builds, so the fitted map matches bit for bit
    ds = gen_demo2d(300, 0)
    model = fit_pca(ds.input_matrix())
    expect = move_delta(model, 0, 0.07) + move_delta(model, 1, -0.11)
    assert np.allclose(got, expect, atol=1e-12)
    assert r.json()["proposal"]["provenance"] == "user-edited"


def test_edit_validation(client):
    s = _session(client)
    sid = s["session_id"]
    pid = _propose(client, sid, 1)["proposal_ids"][0]
    assert client.patch(
        f"/sessions/{sid}/proposals/{pid + 99}", json={"deltas": {"0": 0.1}}
    ).status_code == 404
    assert client.patch(
        f"/sessions/{sid}/proposals/{pid}", json={"deltas": {"7": 0.1}}
    ).status_code == 422
    assert client.patch(
        f"/sessions/{sid}/proposals/{pid}", json={"deltas": {"0": "wide"}}
    ).status_code == 422


# ------------------------------------------------------------------ verify


def test_verify_flow_and_reverify_warning(client):
    s = _session(client)
    sid = s["session_id"]
    pids = _propose(client, sid, 2)["proposal_ids"]
    r = client.post(f"/sessions/{sid}/verify", json={"proposal_ids": pids})
    out = r.json()
    assert r.status_code == 200
    assert len(out["outcomes"]) == 2
    for o in out["outcomes"]:
        assert o["area_after"] >= o["area_before"] - 1e-12
    assert out["dataset_version"] > s["dataset_version"]
    assert out["budget"]["spent"] > 0.0
    assert "dominance_area" in out["pareto"]

    again = client.post(f"/sessions/{sid}/verify", json={"proposal_ids": pids})
    assert again.status_code == 200
    assert again.json()["outcomes"] == []
    assert [w["proposal_id"] for w in again.json()["warnings"]] == pids

    assert client.post(f"/sessions/{sid}/verify", json={"proposal_ids": []}).status_code == 422
    assert client.post(
        f"/sessions/{sid}/verify", json={"proposal_ids": [424242]}
    ).status_code == 404


def test_budget_cap_verification_is_refused(client):
    s = _session(client, budget_cap=1e-9)
    sid = s["session_id"]
    pids = _propose(client, sid, 1)["proposal_ids"]
    r = client.post(f"/sessions/{sid}/verify", json={"proposal_ids": pids})
    assert r.status_code == 409
    assert "budget" in r.json()["detail"].lower()


# -------------------------------------------------------------------- view


def test_view_bundle(client):
    s = _session(client)
    sid = s["session_id"]
    pid = _propose(client, sid, 1)["proposal_ids"][0]
    r = client.get(
        f"/sessions/{sid}/view",
        params={"kde_bins": 24, "neighbor_pid": pid, "k": 7},
    )
    assert r.status_code == 200, r.text
    v = r.json()

    assert len(v["points"]["projected"]) == s["rows"]
    assert all(v["points"]["in_subset"])
    assert len(v["pca"]["loading_vectors"]) == 2
    assert len(v["pca"]["scree"]) == 2

    kde = v["kde"]
    assert len(kde["x"]) == len(kde["y"]) == 24
    assert 0.9 < kde["mass"] < 1.05  # grid padded to 3 bandwidths

    assert len(v["axes"]) == 2
    for ax in v["axes"]:
        assert len(ax["bins"]) == 11
        assert len(ax["density"]) == 10
        assert max(ax["density"]) == 1.0

    nb = v["neighbors"]
    assert nb["proposal_id"] == pid
    assert len(nb["row_ids"]) == 7
    d = nb["distances"]
    assert all(b >= a for a, b in zip(d, d[1:]))
    assert 0.0 < nb["gram_trace_fraction"] <= 1.0 + 1e-12
    for point, dist in zip(nb["embedded"], d):
        assert np.hypot(*point) == pytest.approx(dist, abs=1e-9)

    assert any(p["id"] == pid and "projected" in p for p in v["proposals"])


def test_view_target_filter(client):
    s = _session(client)
    sid = s["session_id"]
    v = client.get(f"/sessions/{sid}/view", params={"target_lo": 0.5}).json()
    flags = v["points"]["in_subset"]
    assert any(flags) and not all(flags)
    # local projection on a hopeless filter has nothing to fit
    r = client.get(
        f"/sessions/{sid}/view",
        params={"target_lo": 1e9, "global_pca": False},
    )
    assert r.status_code == 422


def test_view_exposes_thresholds_and_proposed_front(client):
    s = _session(client, t1=25.0, t2=12.0)
    sid = s["session_id"]
    assert s["thresholds"] == {"t1": 25.0, "t2": 12.0}

    pids = _propose(client, sid, 3)["proposal_ids"]
    v = client.get(f"/sessions/{sid}/view").json()
    assert v["thresholds"] == {"t1": 25.0, "t2": 12.0}

    # every live proposal with estimates sits on the snapshot proposed side,
    # keyed by proposal id, and the proposed front indexes into that list
    snap = v["pareto"]
    assert snap["proposed_ids"] == sorted(pids)
    assert len(snap["proposed_values"]) == len(pids)
    assert snap["front_proposed"]
    assert all(0 <= i < len(pids) for i in snap["front_proposed"])

    # verifying one drops it off the proposed side in the same response
    r = client.post(f"/sessions/{sid}/verify", json={"proposal_ids": [pids[0]]})
    assert r.status_code == 200
    after = r.json()["pareto"]
    assert pids[0] not in after["proposed_ids"]
    assert set(after["proposed_ids"]) == set(pids[1:])
