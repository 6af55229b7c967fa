"""Command-line front door.

Subcommands: gen (synthetic datasets), run (one search batch over a CSV),
compare (method benchmark), figdata (canned experiment exports), scaling
(timing sweep), serve (HTTP gateway).  Everything except wall-clock timings
is a pure function of the inputs and --seed, so reruns are byte-identical.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .datagen import gen_blob, gen_demo2d, gen_manifold, gen_wineshaped
from .io import load_csv, save_csv
from .neighbors import NeighborIndex
from .oracles import evaluate_into_dataset, make_oracle
from .pipeline import compare_methods, run_extrapolation
from .projection import cos_mds
from .search import EsaParams, run_batch
from .strategies import sample_uniform


def _write_rows(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(c)) if isinstance(c, (float, np.floating)) else c for c in row])
    return path


def _load_params(args):
    params = EsaParams()
    if getattr(args, "params", None):
        params = EsaParams.from_json(Path(args.params).read_text())
    overrides = {}
    for name in ("k", "sigma", "epsilon", "n_steps", "alpha", "gamma", "delta", "rollout_interval"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    if overrides:
        from dataclasses import replace

        params = replace(params, **overrides)
    return params


def cmd_gen(args):
    out = Path(args.out)
    if args.dataset == "demo2d":
        ds = gen_demo2d(args.size or 300, args.seed)
    elif args.dataset == "wine-shaped":
        ds = gen_wineshaped(args.size or 1599, args.seed)
    elif args.dataset == "blob":
        oracle = make_oracle(args.oracle, d=args.d)
        ds = evaluate_into_dataset(gen_blob(args.d, args.size or 400, args.seed), oracle)
    elif args.dataset == "manifold":
        pts, agent = gen_manifold(args.kind, args.seed)
        header = [f"x{i + 1}" for i in range(pts.shape[1])]
        _write_rows(out, header, pts)
        agent_path = out.with_suffix(".agent.json")
        agent_path.write_text(json.dumps({"agent": agent.tolist()}))
        print(f"wrote {out} and {agent_path}")
        return 0
    else:
        raise SystemExit(f"unknown dataset {args.dataset!r}")
    csv_path, manifest_path = save_csv(ds, out)
    print(f"wrote {csv_path} ({len(ds)} rows) and {manifest_path}")
    return 0


def cmd_run(args):
    ds = load_csv(args.data, args.manifest)
    params = _load_params(args)
    index = NeighborIndex(ds.input_matrix())
    rng = np.random.default_rng(args.seed)
    starts = sample_uniform(ds.n_inputs, args.agents, rng, params.constraints)
    trajectories = run_batch(starts, index, params, workers=args.workers)

    names = [v.name for v in ds.input_specs]
    rows = []
    for i, t in enumerate(trajectories):
        raw = ds.denormalize(t.final())
        rows.append([i, t.termination, t.samples[-1][0], *raw])
    path = _write_rows(args.out, ["agent", "termination", "steps", *names], rows)
    print(f"wrote {path} ({len(rows)} configurations)")
    return 0


def cmd_compare(args):
    oracle = make_oracle(args.oracle, d=args.d)
    params = _load_params(args)
    rows, summary = compare_methods(
        oracle,
        d=args.d,
        stage_size=args.stage_size,
        agents=args.agents,
        n_seeds=args.seeds,
        params=params,
        master_seed=args.seed,
        workers=args.workers,
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_rows(
        outdir / "rewards.csv",
        ["seed", "method", "reward"],
        [[r["seed"], r["method"], r["reward"]] for r in rows],
    )
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    for m in ("esa", "random-sampling", "random-walk"):
        print(f"{m:>16}: mean {summary[m]['mean']:.4f} sd {summary[m]['sd']:.4f}")
    print(
        f"p(esa>rs)={summary['p_esa_gt_rs']:.2e} "
        f"p(esa>rw)={summary['p_esa_gt_rw']:.2e} "
        f"p(rs~rw)={summary['p_rs_vs_rw']:.3f}"
    )
    return 0


def cmd_figdata(args):
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.which == "fig4":
        return _figdata_fig4(outdir, args)
    if args.which == "extrapolation":
        return _figdata_extrapolation(outdir, args)
    if args.which == "cosmds":
        return _figdata_cosmds(outdir, args)
    raise SystemExit(f"unknown figdata target {args.which!r}")


def _figdata_fig4(outdir, args):
    """2D pocket-search snapshot: data, then agents with and without momentum."""
    rng = np.random.default_rng(args.seed)
    data = rng.uniform(0.0, 1.0, size=(300, 2))
    index = NeighborIndex(data)
    starts = rng.uniform(0.0, 1.0, size=(600, 2))
    _write_rows(outdir / "data.csv", ["x1", "x2"], data)

    for gamma, name in ((0.0, "finals_gamma0.csv"), (0.9, "samples_gamma09.csv")):
        params = EsaParams(gamma=gamma)
        trajs = run_batch(starts, index, params, workers=args.workers)
        if gamma == 0.0:
            rows = [[i, *t.final()] for i, t in enumerate(trajs)]
            _write_rows(outdir / name, ["agent", "x1", "x2"], rows)
        else:
            rows = [
                [i, s, *p] for i, t in enumerate(trajs) for s, p in t.samples
            ]
            _write_rows(outdir / name, ["agent", "step", "x1", "x2"], rows)
    print(f"wrote fig4 data into {outdir}")
    return 0


def _figdata_extrapolation(outdir, args):
    ds = gen_wineshaped(seed=args.seed)
    params = _load_params(args)
    hists = run_extrapolation(ds, iterations=6, agents=300, knn=8, params=params, workers=args.workers)
    rows = [[it, d] for it, arr in enumerate(hists) for d in arr]
    _write_rows(outdir / "distances.csv", ["iteration", "nn_distance"], rows)
    medians = [float(np.median(a)) for a in hists]
    (outdir / "medians.json").write_text(json.dumps({"medians": medians}, indent=2))
    print("medians:", " ".join(f"{m:.4f}" for m in medians))
    return 0


def _figdata_cosmds(outdir, args):
    for kind in ("hyperboloid", "paraboloid", "hypersphere"):
        pts, agent = gen_manifold(kind, args.seed)
        emb = cos_mds(agent, pts)
        rows = [
            [i, *emb.points[i], emb.original_distances[i]] for i in range(len(pts))
        ]
        _write_rows(outdir / f"{kind}.csv", ["point", "e1", "e2", "distance"], rows)
    print(f"wrote cosmds embeddings into {outdir}")
    return 0


def cmd_scaling(args):
    """Wall-time sweep over dataset size, dimension, and batch width."""
    rng = np.random.default_rng(args.seed)
    rows = []
    for n in args.sizes:
        for d in args.dims:
            data = rng.uniform(size=(n, d))
            index = NeighborIndex(data)
            for p in args.batches:
                starts = rng.uniform(size=(p, d))
                params = EsaParams(n_steps=args.steps)
                t0 = time.perf_counter()
                run_batch(starts, index, params, workers=args.workers)
                dt = time.perf_counter() - t0
                rows.append([n, d, p, args.steps, dt])
                print(f"N={n:>7} d={d:>3} agents={p:>5}: {dt:.3f}s")
    path = _write_rows(args.out, ["n_rows", "d", "agents", "steps", "seconds"], rows)
    # Informational power-law fit of time vs N at the largest (d, agents).
    by_n = [(r[0], r[4]) for r in rows if r[1] == args.dims[-1] and r[2] == args.batches[-1]]
    if len(by_n) >= 2:
        ns, ts = np.array([b[0] for b in by_n], float), np.array([b[1] for b in by_n])
        slope = np.polyfit(np.log(ns), np.log(ts), 1)[0]
        print(f"time ~ N^{slope:.2f} at d={args.dims[-1]}, agents={args.batches[-1]}")
    print(f"wrote {path}")
    return 0


def cmd_serve(args):
    import uvicorn

    from .gateway import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="emptyspace", description="empty-space mining toolkit"
    )
    parser.add_argument("--seed", type=int, default=0, help="master seed for everything random")
    # Accepted before or after the subcommand; SUPPRESS keeps the subparser
    # from clobbering a seed given up front.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a synthetic dataset as CSV + manifest", parents=[common])
    p.add_argument("dataset", choices=["demo2d", "wine-shaped", "blob", "manifold"])
    p.add_argument("--out", required=True)
    p.add_argument("--size", type=int)
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--oracle", default="quadratic")
    p.add_argument("--kind", default="hyperboloid", help="manifold kind")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", parents=[common], help="run one search batch over a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--manifest")
    p.add_argument("--params", help="JSON file with search parameters")
    p.add_argument("--agents", type=int, default=100)
    p.add_argument("--gamma", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--n-steps", dest="n_steps", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", parents=[common], help="benchmark esa vs random baselines")
    p.add_argument("--oracle", default="multimodal")
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--stage-size", dest="stage_size", type=int, default=1000)
    p.add_argument("--agents", type=int, default=1500)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--params", help="JSON file with search parameters")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("figdata", parents=[common], help="export canned experiment data")
    p.add_argument("which", choices=["fig4", "extrapolation", "cosmds"])
    p.add_argument("--params", help="JSON file with search parameters")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_figdata)

    p = sub.add_parser("scaling", parents=[common], help="timing sweep (informational)")
    p.add_argument("--sizes", type=int, nargs="+", default=[1000, 10000, 100000])
    p.add_argument("--dims", type=int, nargs="+", default=[2, 5, 11])
    p.add_argument("--batches", type=int, nargs="+", default=[10, 100])
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("serve", parents=[common], help="start the HTTP gateway")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
