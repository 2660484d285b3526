"""The round loop: sample a tree, let the strategy pick an edge, add it, test the property."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .graphs import SimpleGraph
from .sampling import make_rng, sample_ust_complete, trial_seed
from .strategies.base import Strategy

log = logging.getLogger(__name__)

Observer = Callable[[int, SimpleGraph, Strategy], None]


class ProtocolViolation(RuntimeError):
    """A strategy returned an edge that is not in the offered tree."""


@dataclass
class StoppingCondition:
    name: str
    predicate: Callable[[SimpleGraph, Strategy], bool]
    max_rounds: int


@dataclass
class TraceRow:
    round: int
    chosen_u: int
    chosen_v: int
    was_new: bool
    min_deg: int


@dataclass
class TrialResult:
    hitting_time: int | None
    success: bool
    rounds_used: int
    wasted_rounds: int
    final_min_degree: int
    final_max_degree: int
    witness: Any = None
    failure: str | None = None
    seed: int | None = None
    trace: list[TraceRow] | None = None
    stats: dict = field(default_factory=dict)


def default_max_rounds(n: int, k: int = 1) -> int:
    return 10 * n * max(k, 1)


def default_stop(strategy: Strategy, max_rounds: int) -> StoppingCondition:
    return StoppingCondition(strategy.name, lambda g, s: s.holds(g), max_rounds)


def run_trial(
    strategy: Strategy,
    n: int,
    rng: np.random.Generator,
    stop: StoppingCondition | None = None,
    max_rounds: int | None = None,
    trace: bool = False,
    observer: Observer | None = None,
    debug: bool = False,
) -> TrialResult:
    """Run one game until the property is certified, the strategy fails, or the budget runs out.

    The strategy is asked for an edge every round.  As soon as it reports
    ``maybe_done`` the exact predicate is evaluated on the graph built so
    far; the number of edges added up to then is the hitting time.
    """
    if stop is None:
        stop = default_stop(strategy, max_rounds or default_max_rounds(n))
    elif max_rounds is not None:
        stop = StoppingCondition(stop.name, stop.predicate, max_rounds)
    g = SimpleGraph(n)
    strategy.reset(n, rng)
    rounds = wasted = 0
    rows: list[TraceRow] | None = [] if trace else None
    tau = None
    failure = None
    while True:
        tree = sample_ust_complete(n, rng)
        e = strategy.choose(g, tree)
        if strategy.maybe_done:
            if stop.predicate(g, strategy):
                tau = rounds
            else:
                failure = "validator rejected the certified structure"
            break
        if strategy.failure:
            failure = strategy.failure
            break
        if rounds >= stop.max_rounds:
            failure = "round budget exhausted"
            break
        a, b = e
        if not tree.contains(a, b):
            raise ProtocolViolation(f"{strategy.name} chose ({a}, {b}) outside the offered tree")
        new = g.add_edge(a, b)
        rounds += 1
        wasted += not new
        if rows is not None:
            rows.append(TraceRow(rounds, a, b, new, g.min_degree))
        if observer is not None:
            observer(rounds, g, strategy)
    if debug and tau is not None:
        for _ in range(10):
            tree = sample_ust_complete(n, rng)
            a, b = strategy.choose(g, tree)
            g.add_edge(a, b)
            if not stop.predicate(g, strategy):
                raise AssertionError("property lost after the hitting time")
    if failure:
        log.debug("trial failed after %d rounds: %s", rounds, failure)
    return TrialResult(
        hitting_time=tau,
        success=tau is not None,
        rounds_used=rounds,
        wasted_rounds=wasted,
        final_min_degree=g.min_degree,
        final_max_degree=g.max_degree,
        witness=strategy.witness(),
        failure=failure,
        trace=rows,
        stats={"idle_rounds": strategy.idle_rounds, "edges": g.m},
    )


def run_seeded_trial(
    make_strategy: Callable[[], Strategy], n: int, seed: int, index: int, **kwargs
) -> TrialResult:
    s = trial_seed(seed, index)
    res = run_trial(make_strategy(), n, make_rng(s), **kwargs)
    res.seed = s
    return res


def run_batch(
    make_strategy: Callable[[], Strategy], n: int, trials: int, seed: int, **kwargs
) -> list[TrialResult]:
    """Independent trials; trial ``i`` depends only on ``(seed, i)``."""
    return [run_seeded_trial(make_strategy, n, seed, i, **kwargs) for i in range(trials)]
