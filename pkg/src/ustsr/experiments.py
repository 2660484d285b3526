"""Batches of seeded trials, their file outputs, and the degree-count trajectory experiment."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .analysis import ode_trajectory, summarize
from .process import TrialResult, run_seeded_trial
from .strategies import MinDegree, Strategy, build_strategy

SCHEMA_VERSION = 1
CSV_COLUMNS = ["trial", "seed", "tau", "success", "rounds", "wasted", "min_deg", "max_deg"]


@dataclass
class ExperimentConfig:
    strategy: str
    n: int
    k: int = 1
    pattern: str | None = None
    trials: int = 10
    seed: int = 0
    threads: int = 1
    omega: float | None = None
    max_rounds_mult: float = 10.0
    debug: bool = False
    trace: bool = False

    def make_strategy(self) -> Strategy:
        return build_strategy(self.strategy, k=self.k, pattern=self.pattern, omega=self.omega)

    @property
    def max_rounds(self) -> int:
        return math.ceil(self.max_rounds_mult * self.n * max(self.k, 1))


def _one(cfg: ExperimentConfig, index: int) -> TrialResult:
    return run_seeded_trial(
        cfg.make_strategy, cfg.n, cfg.seed, index, max_rounds=cfg.max_rounds, debug=cfg.debug, trace=cfg.trace
    )


def run_experiment(cfg: ExperimentConfig) -> tuple[list[TrialResult], dict]:
    """All trials of ``cfg`` plus their summary; results do not depend on ``threads``."""
    if cfg.threads > 1:
        with ProcessPoolExecutor(cfg.threads) as pool:
            results = list(pool.map(_one, [cfg] * cfg.trials, range(cfg.trials)))
    else:
        results = [_one(cfg, i) for i in range(cfg.trials)]
    summary = summarize(results, prediction=cfg.make_strategy().prediction(cfg.n))
    summary.update(schema=SCHEMA_VERSION, config=asdict(cfg))
    return results, summary


def trial_rows(results: Sequence[TrialResult]) -> list[dict]:
    return [
        {
            "trial": i,
            "seed": r.seed,
            "tau": r.hitting_time if r.success else "",
            "success": int(r.success),
            "rounds": r.rounds_used,
            "wasted": r.wasted_rounds,
            "min_deg": r.final_min_degree,
            "max_deg": r.final_max_degree,
        }
        for i, r in enumerate(results)
    ]


def write_csv(results: Sequence[TrialResult], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        w.writerows(trial_rows(results))


def write_json(payload: dict, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_trace(result: TrialResult, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round", "chosen_u", "chosen_v", "was_new", "min_deg"])
        for row in result.trace or []:
            w.writerow([row.round, row.chosen_u, row.chosen_v, int(row.was_new), row.min_deg])


def degree_deficit_path(n: int, k: int, seed: int, index: int, omega: float | None = None) -> tuple[int, np.ndarray]:
    """Scaled count of vertices of degree below ``k`` from the round it first drops under ``omega sqrt n``.

    Returns the start round and ``alpha_j = s_(start+j) / sqrt(n)`` until it hits 0.
    """
    omega = math.log(n) if omega is None else omega
    threshold = omega * math.sqrt(n)
    counts: list[int] = []

    def watch(rounds, g, strategy):
        counts.append(g.count_degree_below(k))

    run_seeded_trial(lambda: MinDegree(k), n, seed, index, observer=watch)
    s = np.asarray(counts)
    hits = np.flatnonzero(s <= threshold)
    start = int(hits[0]) if hits.size else len(s) - 1
    return start + 1, s[start:] / math.sqrt(n)


def simulate_trajectory(
    n: int, trials: int, seed: int, k: int = 1, omega: float | None = None, drift: str = "exact"
) -> dict:
    """Mean simulated deficit trajectory against the differential-equation solution."""
    paths = [degree_deficit_path(n, k, seed, i, omega)[1] for i in range(trials)]
    length = max(len(p) for p in paths)
    grid = np.zeros((trials, length))
    for i, p in enumerate(paths):
        grid[i, : len(p)] = p
    mean = grid.mean(axis=0)
    std = grid.std(axis=0, ddof=1) if trials > 1 else np.zeros(length)
    t = np.arange(length) / math.sqrt(n)
    alpha0 = float(mean[0])
    ode = ode_trajectory(alpha0, horizon=t[-1] + 1e-3, drift=drift)
    predicted = np.interp(t, ode.t, ode.alpha)
    gap = np.abs(mean - predicted)
    return {
        "n": n,
        "k": k,
        "trials": trials,
        "alpha0": alpha0,
        "t": t,
        "simulated": mean,
        "simulated_std": std,
        "predicted": predicted,
        "sup_gap": float(gap.max()),
        "argmax_t": float(t[int(gap.argmax())]),
        "absorption_time": ode.absorption_time,
    }
