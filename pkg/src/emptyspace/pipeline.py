"""Closed-loop orchestration: propose, estimate, verify, learn, repeat.

The pipeline owns a dataset snapshot chain, a Pareto ledger, one surrogate
per objective, and the phase machine gating what automation is allowed:

  Initial   - surrogate too weak; proposals go to a human, nothing auto-runs
  Developed - surrogate ranks proposals; the best of the proposed front get
              auto-verified within the round budget
  Expert    - proposals are additionally refined by surrogate gradient
              ascent before ranking

Also home to the offline experiment drivers (method comparison and the
iterated extrapolation protocol) that the CLI exposes.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree

from .dataset import Configuration
from .neighbors import NeighborIndex
from .pareto import (
    BudgetExhaustedError,
    ObjectivePair,
    ParetoState,
    area_gain,
    dominance_area,
    pareto_front,
)
from .search import EsaParams, run_batch
from .strategies import (
    blank_baseline,
    esa_proposals,
    pareto_improvement,
    random_sampling,
    random_walk,
)
from .surrogate import (
    InsufficientDataError,
    PhaseState,
    SurrogateConfig,
    advance_phase,
    refine,
    train_on_dataset,
)

STRATEGIES = ("esa", "random-sampling", "pareto-improvement", "blank")


@dataclass
class RoundReport:
    strategy: str
    phase_before: str
    phase_after: str
    proposals: int
    verified: int
    area_before: float
    area_after: float
    ape: float | None


def objective_pair_from_dataset(ds, names=None):
    """Build the objective pair from target specs (bounds = declared ranges)."""
    specs = ds.target_specs
    if names is not None:
        order = {v.name: v for v in specs}
        specs = [order[n] for n in names]
    if len(specs) < 2:
        raise ValueError("need two target variables for an objective pair")
    specs = specs[:2]
    return ObjectivePair(
        tuple(v.name for v in specs),
        tuple(v.orientation or "maximize" for v in specs),
        tuple((v.min, v.max) for v in specs),
    )


class SearchPipeline:
    """Single-writer session state; reads hand out snapshots."""

    def __init__(
        self,
        ds,
        oracle,
        pair=None,
        budget_cap=50.0,
        t1=20.0,
        t2=10.0,
        esa_params=None,
        surrogate_cfg=None,
        seed=0,
    ):
        self.ds = ds
        self.oracle = oracle
        self.pair = pair or objective_pair_from_dataset(ds)
        self.phase_state = PhaseState(t1=t1, t2=t2)
        self.esa_params = esa_params or EsaParams()
        self.surrogate_cfg = surrogate_cfg or SurrogateConfig()
        self.seed = seed
        self.models = {}
        self.apes = {}
        self.proposals = {}
        self._next_pid = 0
        self._round = 0
        self._index = None
        self._index_version = -1

        self.pareto = ParetoState(self.pair, budget_cap)
        cols = [list(n.name for n in ds.target_specs).index(m) for m in self.pair.names]
        for i, row in enumerate(ds.rows):
            if row.status == "existing" and row.targets is not None:
                self.pareto.seed_existing([i], [np.asarray(row.targets)[cols]])

    # -- infrastructure -----------------------------------------------------

    @property
    def phase(self):
        return self.phase_state.phase

    def index(self):
        if self._index is None or self._index_version != self.ds.version:
            self._index = NeighborIndex(self.ds.input_matrix())
            self._index_version = self.ds.version
        return self._index

    def estimate(self, values):
        """Surrogate estimates for one normalized point, or None."""
        if any(n not in self.models for n in self.pair.names):
            return None
        return np.array([self.models[n].predict(values) for n in self.pair.names])

    def retrain(self):
        """Refresh both surrogates; the worst APE drives the phase."""
        worst = None
        for name in self.pair.names:
            try:
                model, err = train_on_dataset(self.ds, name, self.surrogate_cfg)
            except InsufficientDataError:
                return None
            self.models[name] = model
            self.apes[name] = err
            worst = err if worst is None else max(worst, err)
        self.phase_state = advance_phase(self.phase_state, worst, self.ds.version)
        return worst

    # -- proposal handling ----------------------------------------------------

    def _register(self, cfg):
        pid = self._next_pid
        self._next_pid += 1
        # Hand-off estimates (pareto-improvement copies) are kept as given.
        if cfg.targets is None and self.phase != "Initial":
            est = self.estimate(cfg.values)
            if est is not None:
                cfg = replace(cfg, targets=est, targets_estimated=True)
        self.proposals[pid] = cfg
        return pid

    def propose(self, strategy, size, seed=None, constraints=(), starts=None):
        """Run one strategy and register its proposals; returns pid list."""
        if seed is None:
            seed = self.seed + 1000 * self._round + len(self.proposals)
        params = self._phase_params(constraints)
        if strategy == "esa":
            batch = esa_proposals(self.index(), params, size, seed, starts=starts)
            if self.phase != "Initial" and all(n in self.models for n in self.pair.names):
                batch = self._per_trajectory_best(batch)
        elif strategy == "random-sampling":
            batch = random_sampling(self.ds.n_inputs, size, seed, constraints)
        elif strategy == "random-walk":
            batch = random_walk(
                self.ds.n_inputs, size, params.n_steps, params.alpha, seed, starts=starts
            )
        elif strategy == "pareto-improvement":
            batch = pareto_improvement(self.ds, self.pareto, size, seed)
        elif strategy == "blank":
            batch = ProposalBatchShim([blank_baseline(self.ds.n_inputs)])
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        return [self._register(cfg) for cfg in batch.configurations]

    def _phase_params(self, constraints):
        # Momentum off while exploring blind: Initial wants many small
        # pockets, not long glides.
        gamma = 0.0 if self.phase == "Initial" else self.esa_params.gamma
        return replace(self.esa_params, gamma=gamma, constraints=tuple(constraints))

    def _per_trajectory_best(self, batch):
        """Swap each final point for the best sample along its trajectory."""
        chosen = []
        for traj in batch.raw_trajectories:
            pts = traj.positions()
            est = np.column_stack(
                [self.models[n].predict(pts) for n in self.pair.names]
            )
            gains = area_gain(est, self.pareto.existing_matrix(), self.pair)
            if gains.max() > 0:
                best = int(np.argmax(gains))
            else:
                unit = self.pair.unit_normalized(est)
                best = int(np.argmax(unit.sum(axis=1)))
            chosen.append(
                Configuration(pts[best].copy(), provenance="esa")
            )
        batch.configurations = chosen
        return batch

    def edit_proposal(self, pid, deltas):
        """Apply per-variable deltas (normalized units) to a proposal."""
        cfg = self.proposals[pid]
        values = cfg.values.copy()
        for j, dv in deltas.items():
            values[int(j)] = values[int(j)] + float(dv)
        values = np.clip(values, 0.0, 1.0)
        est = self.estimate(values) if self.phase != "Initial" else None
        self.proposals[pid] = Configuration(
            values,
            targets=est,
            targets_estimated=est is not None,
            provenance="user-edited",
        )
        return self.proposals[pid]

    # -- verification ---------------------------------------------------------

    def verify(self, pids):
        """Measure proposals with the oracle and absorb them as existing rows.

        Returns (outcomes, warnings): warnings carry pids that were already
        verified (idempotent no-ops).
        """
        outcomes, warnings = [], []
        for pid in pids:
            cfg = self.proposals.get(pid)
            if cfg is None:
                raise KeyError(f"unknown proposal {pid}")
            if cfg.status == "existing":
                warnings.append(pid)
                continue
            X = cfg.values[None, :]
            measured = self.oracle.evaluate(X)[0]
            cost = float(self.oracle.cost(X)[0])
            row_id = len(self.ds.rows)
            outcome = self.pareto.update_on_verify(row_id, measured, cost)
            full = self._full_targets(measured)
            verified_cfg = cfg.verified(full)
            self.ds = self.ds.with_rows([verified_cfg])
            self.proposals[pid] = verified_cfg
            outcomes.append((pid, outcome))
        return outcomes, warnings

    def _full_targets(self, measured):
        """Spread objective-pair measurements across the target columns."""
        names = [v.name for v in self.ds.target_specs]
        full = np.zeros(len(names))
        for v, name in zip(measured, self.pair.names):
            full[names.index(name)] = v
        return full

    # -- rounds ---------------------------------------------------------------

    def run_round(self, strategy, size, verify_budget, seed=None, constraints=()):
        """One full phase-gated round; see the module docstring."""
        phase_before = self.phase
        area_before = self.pareto.area
        pids = self.propose(strategy, size, seed=seed, constraints=constraints)
        self._round += 1

        verified = 0
        if phase_before != "Initial" and verify_budget > 0:
            if phase_before == "Expert":
                self._refine_all(pids, constraints)
            ranked = self._rank_proposed_front(pids)
            for pid in ranked[:verify_budget]:
                try:
                    self.verify([pid])
                    verified += 1
                except BudgetExhaustedError:
                    break
            if verified:
                self.retrain()
        report = RoundReport(
            strategy,
            phase_before,
            self.phase,
            len(pids),
            verified,
            area_before,
            self.pareto.area,
            max(self.apes.values()) if self.apes else None,
        )
        return report

    def _refine_all(self, pids, constraints):
        primary = self.pair.names[0]
        model = self.models.get(primary)
        if model is None:
            return
        orientation = self.pair.orientations[0]
        for pid in pids:
            cfg = self.proposals[pid]
            better = refine(model, cfg.values, orientation, constraints=constraints)
            if not np.array_equal(better, cfg.values):
                est = self.estimate(better)
                self.proposals[pid] = Configuration(
                    better,
                    targets=est,
                    targets_estimated=est is not None,
                    provenance="gradient-refined",
                )

    def _rank_proposed_front(self, pids):
        """Keep only proposals on the proposed front, best estimated gain first."""
        with_est = [
            (pid, self.proposals[pid].targets)
            for pid in pids
            if self.proposals[pid].targets is not None
        ]
        if not with_est:
            return []
        values = np.array([t for _, t in with_est])
        front = pareto_front(values, self.pair)
        gains = area_gain(values[front], self.pareto.existing_matrix(), self.pair)
        order = np.argsort(-gains, kind="stable")
        return [with_est[front[i]][0] for i in order]

    def snapshot(self):
        return {
            "dataset_version": self.ds.version,
            "rows": len(self.ds.rows),
            "phase": self.phase,
            "apes": dict(self.apes),
            "pareto": self.pareto.snapshot(),
            "proposals": {
                pid: {
                    "values": cfg.values.tolist(),
                    "targets": None if cfg.targets is None else np.asarray(cfg.targets).tolist(),
                    "estimated": cfg.targets_estimated,
                    "status": cfg.status,
                    "provenance": cfg.provenance,
                }
                for pid, cfg in self.proposals.items()
            },
        }


class ProposalBatchShim:
    def __init__(self, configurations):
        self.configurations = configurations


# ---------------------------------------------------------------------------
# Offline experiment drivers.
# ---------------------------------------------------------------------------


def per_trajectory_best(trajectories, oracle, existing_values, pair):
    """Pick each trajectory's best sample as judged by a perfect critic.

    Ranks by dominance-area gain over the existing front; when no sample
    would expand the area, falls back to the largest normalized objective
    sum.  Evaluation is batched across all samples.
    """
    lengths = [len(t) for t in trajectories]
    stacked = np.vstack(trajectories)
    values = oracle.evaluate(stacked)
    gains = area_gain(values, existing_values, pair)
    unit = pair.unit_normalized(values)
    fallback = unit.sum(axis=1)
    chosen = []
    at = 0
    for n in lengths:
        g = gains[at : at + n]
        if g.max() > 0:
            best = int(np.argmax(g))
        else:
            best = int(np.argmax(fallback[at : at + n]))
        chosen.append(stacked[at + best])
        at += n
    return np.array(chosen)


def compare_methods(
    oracle,
    d=5,
    stage_size=1000,
    agents=1500,
    n_seeds=20,
    params=None,
    master_seed=0,
    workers=1,
):
    """Shared-start comparison of esa vs random sampling vs random walk.

    Per master seed: the existing stage covers the box uniformly except for
    an unexplored pocket around the oracle's merit anchor (the regime the
    search is built for); all three methods get identical uniform starts;
    each method's reward is the dominance area of (existing + its chosen
    candidates).  The oracle plays the well-trained critic, scoring every
    trajectory sample.

    Returns (rows, summary): rows are per-(seed, method) rewards; summary
    carries means, standard deviations, and rank-sum p-values.
    """
    from scipy import stats

    from .datagen import gen_void
    from .oracles import evaluate_into_dataset

    params = params or EsaParams()
    pair = ObjectivePair(oracle.spec.names, oracle.spec.orientations, oracle.spec.bounds)
    pocket = getattr(oracle, "a", np.full(d, 0.7))
    rewards = {"esa": [], "random-sampling": [], "random-walk": []}
    rows = []
    for s in range(n_seeds):
        stage = gen_void(d, stage_size, seed=master_seed + 7919 * s + 1, center=pocket)
        ds = evaluate_into_dataset(stage, oracle)
        existing = ds.target_matrix()
        index = NeighborIndex(ds.input_matrix())
        rng = np.random.default_rng(master_seed + 7919 * s + 2)
        starts = rng.uniform(0.0, 1.0, size=(agents, d))

        esa_trajs = [
            t.positions() for t in run_batch(starts, index, params, workers=workers)
        ]
        rw = random_walk(
            d,
            agents,
            steps=params.n_steps,
            alpha=params.alpha,
            seed=master_seed + 7919 * s + 3,
            starts=starts,
            sample_interval=params.rollout_interval,
        )
        candidates = {
            "esa": per_trajectory_best(esa_trajs, oracle, existing, pair),
            "random-sampling": starts,
            "random-walk": per_trajectory_best(rw.trajectories, oracle, existing, pair),
        }
        for method, pts in candidates.items():
            values = np.vstack([existing, oracle.evaluate(pts)])
            reward = dominance_area(values, pair)
            rewards[method].append(reward)
            rows.append({"seed": s, "method": method, "reward": reward})

    def _ranksum(a, b, alternative):
        if np.all(np.asarray(a) == np.asarray(b)):
            return 1.0
        return float(stats.mannwhitneyu(a, b, alternative=alternative).pvalue)

    summary = {}
    for method, vals in rewards.items():
        arr = np.asarray(vals)
        summary[method] = {"mean": float(arr.mean()), "sd": float(arr.std(ddof=1))}
    summary["p_esa_gt_rs"] = _ranksum(rewards["esa"], rewards["random-sampling"], "greater")
    summary["p_esa_gt_rw"] = _ranksum(rewards["esa"], rewards["random-walk"], "greater")
    summary["p_rs_vs_rw"] = _ranksum(
        rewards["random-sampling"], rewards["random-walk"], "two-sided"
    )
    return rows, summary


def run_extrapolation(ds, iterations=6, agents=300, knn=8, params=None, workers=1):
    """Iterated outward search: seed agents at anti-hubs, grow the set.

    Each iteration seeds agents at the rows whose mean distance to their knn
    nearest neighbors is largest (the loneliest rows), runs the search, and
    appends the resting points to the working set.  Returns one array per
    iteration holding each result's nearest-neighbor distance to the
    iteration-0 points.
    """
    params = params or EsaParams()
    X0 = ds.input_matrix()
    base_tree = cKDTree(X0)
    working = X0.copy()
    out = []
    for _ in range(iterations):
        index = NeighborIndex(working)
        _, dist, _, counts = index.query_batch(working, knn)
        slot = np.arange(dist.shape[1])[None, :]
        mask = slot < counts[:, None]
        mean_dist = np.where(mask, dist, 0.0).sum(axis=1) / np.maximum(counts, 1)
        seeds = np.argsort(-mean_dist, kind="stable")[: min(agents, len(working))]
        starts = working[seeds]
        finals = np.array(
            [t.final() for t in run_batch(starts, index, params, workers=workers)]
        )
        d_to_base, _ = base_tree.query(finals, k=1)
        out.append(np.asarray(d_to_base, dtype=float))
        working = np.vstack([working, finals])
    return out
