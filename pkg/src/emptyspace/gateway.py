"""JSON-over-HTTP gateway: session-scoped access for interactive clients.

All analytics are computed here, server-side; clients only render the
bundles.  Every session owns an isolated pipeline guarded by a lock, and
every response carries the dataset version it was computed against.  Writes
may pin the version they expect (optimistic concurrency); a stale pin is
refused with 409 rather than applied to newer state.
"""
from __future__ import annotations

import threading
import uuid
from dataclasses import replace

import numpy as np
from fastapi import Body, FastAPI, HTTPException, Query
from scipy import stats as sp_stats

from .dataset import IntervalBrush
from .datagen import gen_blob, gen_demo2d
from .neighbors import NeighborIndex
from .oracles import (
    LinearNoiseOracle,
    MultimodalTwinOracle,
    QuadraticTwinOracle,
    evaluate_into_dataset,
)
from .pareto import BudgetExhaustedError
from .pipeline import SearchPipeline, objective_pair_from_dataset
from .projection import cos_mds, fit_pca, move_delta, project, scree


def _builtin_registry():
    """Name -> factory for (dataset, oracle) pairs usable without files."""

    def demo2d(seed):
        return gen_demo2d(300, seed), QuadraticTwinOracle(d=2)

    def quad_blob(seed):
        oracle = QuadraticTwinOracle(d=5)
        return evaluate_into_dataset(gen_blob(5, 400, seed), oracle), oracle

    def multi_blob(seed):
        oracle = MultimodalTwinOracle(d=5)
        return evaluate_into_dataset(gen_blob(5, 400, seed), oracle), oracle

    def linear_blob(seed):
        oracle = LinearNoiseOracle(d=5)
        return evaluate_into_dataset(gen_blob(5, 400, seed), oracle), oracle

    return {
        "demo2d": demo2d,
        "quadratic-blob": quad_blob,
        "multimodal-blob": multi_blob,
        "linear-noise-blob": linear_blob,
    }


class SessionStore:
    def __init__(self):
        self._sessions = {}
        self._lock = threading.Lock()

    def add(self, session):
        with self._lock:
            self._sessions[session["id"]] = session

    def get(self, sid):
        with self._lock:
            s = self._sessions.get(sid)
        if s is None:
            raise HTTPException(404, f"unknown session {sid}")
        return s


def _check_version(session, pinned):
    if pinned is not None and pinned != session["pipeline"].ds.version:
        raise HTTPException(
            409,
            f"stale dataset version {pinned}; current is {session['pipeline'].ds.version}",
        )


def _proposal_payload(pipe, pid):
    cfg = pipe.proposals[pid]
    return {
        "id": pid,
        "values": cfg.values.tolist(),
        "targets": None if cfg.targets is None else np.asarray(cfg.targets).tolist(),
        "targets_estimated": bool(cfg.targets_estimated),
        "status": cfg.status,
        "provenance": cfg.provenance,
    }


def _sync_proposed(pipe):
    """Mirror live proposal estimates onto the pareto proposed side.

    Runs right before a snapshot leaves the server so clients get the
    proposed front without recomputing dominance themselves.  Keyed by
    proposal id; verified proposals drop off (they are existing rows now).
    """
    names = [v.name for v in pipe.ds.target_specs]
    cols = [names.index(n) for n in pipe.pair.names]
    ids, vals = [], []
    for pid in sorted(pipe.proposals):
        cfg = pipe.proposals[pid]
        if cfg.status != "existing" and cfg.targets is not None:
            ids.append(pid)
            vals.append(np.asarray(cfg.targets, dtype=float)[cols])
    pipe.pareto.set_proposals(ids, np.asarray(vals) if ids else np.empty((0, 2)))


def create_app(registry=None):
    registry = registry or _builtin_registry()
    app = FastAPI(title="emptyspace gateway", version="1")
    store = SessionStore()
    app.state.store = store

    @app.post("/sessions")
    def create_session(body: dict = Body(...)):
        name = body.get("dataset")
        if name not in registry:
            raise HTTPException(422, f"unknown dataset {name!r}; have {sorted(registry)}")
        t1 = float(body.get("t1", 20.0))
        t2 = float(body.get("t2", 10.0))
        if t2 >= t1:
            raise HTTPException(422, "thresholds need t2 < t1")
        seed = int(body.get("seed", 0))
        ds, oracle = registry[name](seed)
        pair = None
        if body.get("objectives"):
            pair = objective_pair_from_dataset(ds, body["objectives"])
        try:
            pipe = SearchPipeline(
                ds,
                oracle,
                pair=pair,
                budget_cap=float(body.get("budget_cap", 50.0)),
                t1=t1,
                t2=t2,
                seed=seed,
            )
        except ValueError as e:
            raise HTTPException(422, str(e))
        if body.get("train", True):
            pipe.retrain()
        sid = uuid.uuid4().hex[:12]
        session = {"id": sid, "pipeline": pipe, "lock": threading.Lock(), "jobs": {}}
        store.add(session)
        return _summary(session)

    def _summary(session):
        pipe = session["pipeline"]
        return {
            "session_id": session["id"],
            "dataset_version": pipe.ds.version,
            "rows": len(pipe.ds.rows),
            "phase": pipe.phase,
            "apes": pipe.apes,
            "objectives": {
                "names": list(pipe.pair.names),
                "orientations": list(pipe.pair.orientations),
                "bounds": [list(b) for b in pipe.pair.bounds],
            },
            "variables": [
                {"name": v.name, "min": v.min, "max": v.max, "kind": v.kind}
                for v in pipe.ds.variables
            ],
            "budget": {
                "spent": pipe.pareto.budget_spent,
                "cap": pipe.pareto.budget_cap,
            },
            "thresholds": {"t1": pipe.phase_state.t1, "t2": pipe.phase_state.t2},
        }

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return _summary(store.get(sid))

    def _run_search(session, body):
        pipe = session["pipeline"]
        strategy = body.get("strategy", "esa")
        size = int(body.get("batch_size", 50))
        if not 1 <= size <= 10_000:
            raise HTTPException(422, "batch_size out of range")
        constraints = []
        brushes = body.get("brushes") or {}
        if brushes:
            constraints.append(IntervalBrush({int(k): tuple(v) for k, v in brushes.items()}))
        if body.get("esa"):
            try:
                base = pipe.esa_params
                pipe.esa_params = replace(base, **body["esa"])
            except (TypeError, ValueError) as e:
                raise HTTPException(422, f"bad search parameters: {e}")
        seed = body.get("seed")
        try:
            pids = pipe.propose(strategy, size, seed=seed, constraints=tuple(constraints))
        except ValueError as e:
            raise HTTPException(422, str(e))
        return {
            "dataset_version": pipe.ds.version,
            "phase": pipe.phase,
            "proposal_ids": pids,
            "proposals": [_proposal_payload(pipe, pid) for pid in pids],
        }

    @app.post("/sessions/{sid}/search")
    def search(sid: str, body: dict = Body(...)):
        session = store.get(sid)
        with session["lock"]:
            _check_version(session, body.get("dataset_version"))
            return _run_search(session, body)

    @app.post("/sessions/{sid}/search/jobs")
    def submit_search_job(sid: str, body: dict = Body(...)):
        """Long searches: run in a worker thread, poll for the result."""
        session = store.get(sid)
        jid = uuid.uuid4().hex[:12]
        job = {"status": "running", "result": None, "error": None}
        session["jobs"][jid] = job

        def work():
            try:
                with session["lock"]:
                    _check_version(session, body.get("dataset_version"))
                    job["result"] = _run_search(session, body)
                job["status"] = "done"
            except HTTPException as e:
                job["error"] = e.detail
                job["status"] = "failed"
            except Exception as e:  # pragma: no cover - defensive
                job["error"] = str(e)
                job["status"] = "failed"

        threading.Thread(target=work, daemon=True).start()
        return {"job_id": jid}

    @app.get("/sessions/{sid}/jobs/{jid}")
    def poll_job(sid: str, jid: str):
        session = store.get(sid)
        job = session["jobs"].get(jid)
        if job is None:
            raise HTTPException(404, f"unknown job {jid}")
        return job

    @app.patch("/sessions/{sid}/proposals/{pid}")
    def edit_proposal(sid: str, pid: int, body: dict = Body(...)):
        session = store.get(sid)
        pipe = session["pipeline"]
        with session["lock"]:
            _check_version(session, body.get("dataset_version"))
            if pid not in pipe.proposals:
                raise HTTPException(404, f"unknown proposal {pid}")
            deltas = body.get("deltas") or {}
            try:
                deltas = {int(k): float(v) for k, v in deltas.items()}
            except (TypeError, ValueError):
                raise HTTPException(422, "deltas must map variable index -> delta")
            d = pipe.ds.n_inputs
            if any(not 0 <= j < d for j in deltas):
                raise HTTPException(422, "variable index out of range")
            model = fit_pca(pipe.ds.input_matrix())
            displacement = np.zeros(2)
            for j, dv in deltas.items():
                displacement += move_delta(model, j, dv)
            cfg = pipe.edit_proposal(pid, deltas)
            return {
                "dataset_version": pipe.ds.version,
                "proposal": _proposal_payload(pipe, pid),
                "displacement": displacement.tolist(),
            }

    @app.post("/sessions/{sid}/verify")
    def verify(sid: str, body: dict = Body(...)):
        session = store.get(sid)
        pipe = session["pipeline"]
        with session["lock"]:
            _check_version(session, body.get("dataset_version"))
            pids = body.get("proposal_ids") or []
            if not pids:
                raise HTTPException(422, "proposal_ids required")
            outcomes = []
            warnings = []
            for pid in pids:
                if int(pid) not in pipe.proposals:
                    raise HTTPException(404, f"unknown proposal {pid}")
            # Refuse the whole batch up front if it cannot fit in the budget;
            # otherwise a cap hit mid-list would absorb a prefix and 409 the
            # rest, leaving the client with no outcomes for rows it now owns.
            pending = list(
                dict.fromkeys(
                    int(pid)
                    for pid in pids
                    if pipe.proposals[int(pid)].status != "existing"
                )
            )
            if pending:
                X = np.stack([pipe.proposals[pid].values for pid in pending])
                total = float(pipe.oracle.cost(X).sum())
                remaining = pipe.pareto.budget_cap - pipe.pareto.budget_spent
                if total > remaining + 1e-12:
                    raise HTTPException(
                        409,
                        f"verification cost {total:g} exceeds remaining budget {remaining:g}",
                    )
            try:
                for pid in pids:
                    oc, warn = pipe.verify([int(pid)])
                    warnings.extend({"proposal_id": w, "note": "already verified"} for w in warn)
                    for vpid, o in oc:
                        outcomes.append(
                            {
                                "proposal_id": vpid,
                                "front_expanded": o.front_expanded,
                                "area_before": o.area_before,
                                "area_after": o.area_after,
                            }
                        )
            except BudgetExhaustedError as e:
                raise HTTPException(409, str(e))
            if outcomes:
                pipe.retrain()
            _sync_proposed(pipe)
            return {
                "dataset_version": pipe.ds.version,
                "outcomes": outcomes,
                "warnings": warnings,
                "phase": pipe.phase,
                "apes": pipe.apes,
                "budget": {"spent": pipe.pareto.budget_spent, "cap": pipe.pareto.budget_cap},
                "pareto": pipe.pareto.snapshot(),
            }

    @app.get("/sessions/{sid}/view")
    def view(
        sid: str,
        target_lo: float | None = Query(None),
        target_hi: float | None = Query(None),
        global_pca: bool = Query(True),
        neighbor_pid: int | None = Query(None),
        k: int = Query(9),
        kde_bins: int = Query(32),
    ):
        """The full visualization bundle for the linked views."""
        session = store.get(sid)
        pipe = session["pipeline"]
        with session["lock"]:
            X = pipe.ds.input_matrix()
            t_first = pipe.ds.target_matrix(pipe.pair.names)[:, 0]
            subset = np.ones(len(X), dtype=bool)
            if target_lo is not None:
                subset &= t_first >= target_lo
            if target_hi is not None:
                subset &= t_first <= target_hi
            fit_X = X if global_pca else X[subset]
            if len(fit_X) < 2:
                raise HTTPException(422, "subset too small to project")
            model = fit_pca(fit_X)
            proj = project(model, X)
            _sync_proposed(pipe)

            bundle = {
                "dataset_version": pipe.ds.version,
                "phase": pipe.phase,
                "apes": pipe.apes,
                "thresholds": {"t1": pipe.phase_state.t1, "t2": pipe.phase_state.t2},
                "error_history": [list(e) for e in pipe.phase_state.error_history],
                "pca": {
                    "mean": model.mean.tolist(),
                    "components": model.components.tolist(),
                    "explained_variance_ratio": model.explained_variance_ratio.tolist(),
                    "scree": [list(s) for s in scree(model)],
                    "loading_vectors": model.components.T.tolist(),
                },
                "points": {
                    "projected": proj.tolist(),
                    "in_subset": subset.tolist(),
                    "target": [None if np.isnan(v) else v for v in t_first.tolist()],
                    "provenance": [r.provenance for r in pipe.ds.rows],
                },
                "proposals": [
                    dict(
                        _proposal_payload(pipe, pid),
                        projected=project(model, pipe.proposals[pid].values).tolist(),
                    )
                    for pid in sorted(pipe.proposals)
                ],
                "pareto": pipe.pareto.snapshot(),
                "budget": {"spent": pipe.pareto.budget_spent, "cap": pipe.pareto.budget_cap},
            }

            bundle["kde"] = _kde_grid(proj[subset], kde_bins)
            bundle["axes"] = _axis_summaries(pipe, X, subset, t_first)
            if neighbor_pid is not None:
                if neighbor_pid not in pipe.proposals:
                    raise HTTPException(404, f"unknown proposal {neighbor_pid}")
                agent = pipe.proposals[neighbor_pid].values
                ns = pipe.index().query(agent, k)
                emb = cos_mds(agent, pipe.index().points[ns.indices])
                bundle["neighbors"] = {
                    "proposal_id": neighbor_pid,
                    "row_ids": ns.indices.tolist(),
                    "embedded": emb.points.tolist(),
                    "distances": emb.original_distances.tolist(),
                    "gram_trace_fraction": emb.gram_trace_fraction,
                }
            return bundle

    def _kde_grid(proj, bins):
        if len(proj) < 3:
            return None
        try:
            kde = sp_stats.gaussian_kde(proj.T)  # Scott's rule by default
        except np.linalg.LinAlgError:
            return None
        pad = 3.0 * np.sqrt(np.diag(kde.covariance))
        lo = proj.min(axis=0) - pad
        hi = proj.max(axis=0) + pad
        gx = np.linspace(lo[0], hi[0], bins)
        gy = np.linspace(lo[1], hi[1], bins)
        mx, my = np.meshgrid(gx, gy, indexing="ij")
        dens = kde(np.vstack([mx.ravel(), my.ravel()])).reshape(bins, bins)
        cell = (gx[1] - gx[0]) * (gy[1] - gy[0])
        return {
            "x": gx.tolist(),
            "y": gy.tolist(),
            "density": dens.tolist(),
            "cell_area": cell,
            "mass": float(dens.sum() * cell),
            "bandwidth_factor": float(kde.factor),
        }

    def _axis_summaries(pipe, X, subset, target, bins=10):
        """Per-axis density plus target-correlation shading, both in [0, 1]."""
        edges = np.linspace(0.0, 1.0, bins + 1)
        out = []
        known = ~np.isnan(target)
        for j, v in enumerate(pipe.ds.input_specs):
            col = X[subset][:, j]
            hist, _ = np.histogram(col, bins=edges)
            density = (hist / hist.max()).tolist() if hist.max() else [0.0] * bins
            corr = []
            for b in range(bins):
                m = known & (X[:, j] >= edges[b]) & (X[:, j] < edges[b + 1] + (b == bins - 1))
                corr.append(float(target[m].mean()) if m.any() else None)
            vals = [c for c in corr if c is not None]
            lo_c, hi_c = (min(vals), max(vals)) if vals else (0.0, 1.0)
            span = (hi_c - lo_c) or 1.0
            out.append(
                {
                    "variable": v.name,
                    "bins": edges.tolist(),
                    "density": density,
                    "correlation": [
                        None if c is None else (c - lo_c) / span for c in corr
                    ],
                }
            )
        return out

    return app
