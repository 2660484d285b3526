"""Command line: ``ustsr simulate``, ``ustsr trajectory`` and ``ustsr verify``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .experiments import ExperimentConfig, run_experiment, simulate_trajectory, trial_rows, write_csv, write_json, write_trace
from .strategies import STRATEGIES
from .verify import SUITES


def _simulate(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig(
        strategy=args.strategy,
        n=args.n,
        k=args.k,
        pattern=args.pattern,
        trials=args.trials,
        seed=args.seed,
        threads=args.threads,
        omega=args.omega,
        max_rounds_mult=args.max_rounds_mult,
        debug=args.debug,
        trace=args.trace_dir is not None,
    )
    results, summary = run_experiment(cfg)
    if args.trace_dir is not None:
        Path(args.trace_dir).mkdir(parents=True, exist_ok=True)
        for i, r in enumerate(results):
            write_trace(r, Path(args.trace_dir) / f"trial_{i:04d}.csv")
    if args.format == "json":
        payload = {"summary": summary, "trials": trial_rows(results)}
        if args.out:
            write_json(payload, args.out)
        else:
            import json

            json.dump(payload, sys.stdout, indent=2, sort_keys=True)
            print()
    else:
        if args.out:
            write_csv(results, args.out)
            write_json(summary, Path(args.out).with_suffix(".summary.json"))
        else:
            write_csv(results, "/dev/stdout")
    rate = summary["success_rate"]
    mean = summary.get("tau_mean")
    line = f"{cfg.strategy} n={cfg.n} k={cfg.k}: success {rate:.3f}"
    if mean is not None:
        line += f", mean tau {mean:.1f}"
    if summary.get("prediction") is not None:
        line += f", prediction {summary['prediction']:.1f}"
    print(line, file=sys.stderr)
    return 0


def _trajectory(args: argparse.Namespace) -> int:
    res = simulate_trajectory(args.n, args.trials, args.seed, k=args.k, omega=args.omega, drift=args.drift)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        out.write("t,alpha_predicted,alpha_simulated_mean,alpha_simulated_std\n")
        for row in zip(res["t"], res["predicted"], res["simulated"], res["simulated_std"]):
            out.write(",".join(f"{x:.6f}" for x in row) + "\n")
        out.write(f"# sup_gap={res['sup_gap']:.6f} at t={res['argmax_t']:.4f}, alpha0={res['alpha0']:.4f}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    print(f"sup gap {res['sup_gap']:.4f}", file=sys.stderr)
    return 0


def _verify(args: argparse.Namespace) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    for name in names:
        for label, ok, detail in SUITES[name](seed=args.seed):
            failed += not ok
            print(f"{'PASS' if ok else 'FAIL'}  {name:<10} {label}  {detail}".rstrip())
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ustsr", description="Builder strategies on uniform spanning tree rounds")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run seeded trials of one strategy")
    s.add_argument("--strategy", choices=STRATEGIES, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--pattern", default=None, help="k2, p3, triangle, star<r>, k<r>_chain, ...")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--omega", type=float, default=None)
    s.add_argument("--max-rounds-mult", type=float, default=10.0)
    s.add_argument("--out", default=None)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--trace-dir", default=None, help="write one per-round trace CSV per trial")
    s.add_argument("--debug", action="store_true", help="check the property survives 10 extra rounds")
    s.set_defaults(func=_simulate)

    t = sub.add_parser("trajectory", help="degree-deficit trajectory against the ODE")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--k", type=int, default=1)
    t.add_argument("--trials", type=int, default=100)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--omega", type=float, default=None)
    t.add_argument("--drift", choices=("exact", "quarter"), default="exact")
    t.add_argument("--out", default=None)
    t.set_defaults(func=_trajectory)

    v = sub.add_parser("verify", help="formula, sampler and validator self-checks")
    v.add_argument("--suite", choices=("all", *SUITES), default="all")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("USTSR_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
