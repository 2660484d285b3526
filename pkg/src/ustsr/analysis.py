"""Closed forms, the differential-equation model, and batch statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate, optimize, stats

from ._kernels import permutation_cycle_moments
from .strategies.min_degree import min_degree_prediction

__all__ = [
    "absorption_time",
    "absorption_offset_limit",
    "biclique_complement_tree_count",
    "bipartite_avoid_prob",
    "chi_square_uniform",
    "clique_avoid_prob",
    "drift_function",
    "expected_cycle_count",
    "alternating_cycle_expectation",
    "integral_bound_x",
    "isolated_chain_expectation",
    "markov_absorb_prob",
    "min_degree_prediction",
    "ode_trajectory",
    "sample_cycle_moments",
    "simulate_absorption",
    "summarize",
    "wilson_interval",
]


def clique_avoid_prob(n: int, k: int, exact: bool = False) -> float | Fraction:
    """Probability that a uniform spanning tree of ``K_n`` has no edge inside a fixed ``k``-set."""
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n - 1")
    p = Fraction(n - k, n) ** (k - 1)
    return p if exact else float(p)


def bipartite_avoid_prob(n: int, k: int, l: int, exact: bool = False) -> float | Fraction:
    """Probability of avoiding every edge between disjoint sets of sizes ``k`` and ``l``."""
    if k < 1 or l < 1 or k + l > n:
        raise ValueError("need k, l >= 1 and k + l <= n")
    p = Fraction((n - k) ** (l - 1) * (n - l) ** (k - 1) * (n - k - l), n ** (k + l - 1))
    return p if exact else float(p)


def biclique_complement_tree_count(n: int, k: int, l: int) -> int:
    """Spanning trees of ``K_n`` with all ``k x l`` biclique edges removed."""
    if k + l == n:
        return 0
    return (n - l) ** (k - 1) * (n - k) ** (l - 1) * (n - k - l) * n ** (n - k - l - 1)


def markov_absorb_prob(p: float, q: float) -> float:
    """Absorption probability through ``A -> C`` for the chain ``A <-> B -> C``."""
    if not (0 <= p <= 1 and 0 <= q <= 1) or p * q >= 1:
        raise ValueError("need p, q in [0, 1] with pq < 1")
    return (1 - p) / (1 - p * q)


def simulate_absorption(p: float, q: float, runs: int, rng: np.random.Generator) -> float:
    """Monte Carlo frequency of leaving through ``A -> C`` when started at ``A``."""
    active = np.ones(runs, dtype=bool)
    at_a = np.ones(runs, dtype=bool)
    via_a = np.zeros(runs, dtype=bool)
    while active.any():
        x = rng.random(runs)
        leave_a = active & at_a & (x >= p)
        leave_b = active & ~at_a & (x >= q)
        via_a |= leave_a
        active &= ~(leave_a | leave_b)
        at_a = np.where(active, ~at_a, at_a)
    return float(via_a.mean())


def expected_cycle_count(i: int) -> Fraction:
    """Expected number of length-``i`` cycles in the union of two random perfect bipartite matchings."""
    if i < 2 or i % 2:
        raise ValueError("cycle lengths are even and at least 2")
    return Fraction(2, i)


def alternating_cycle_expectation(i: int, n: int) -> Fraction:
    """Same expectation by counting alternating cycles and their probabilities."""
    m, j = n // 2, i // 2
    if not 1 <= j <= m:
        raise ValueError("cycle length out of range")
    falling = math.perm(m, j)
    sequences = Fraction(falling * falling, j)
    both_present = Fraction(math.factorial(m - j), math.factorial(m)) ** 2
    return sequences * both_present


def sample_cycle_moments(
    n: int, samples: int, rng: np.random.Generator, batch: int = 10_000
) -> tuple[np.ndarray, np.ndarray]:
    """Mean and standard error of the number of ``i``-cycles, indexed by ``i = 0..n``.

    Cycles of length ``2j`` correspond to ``j``-cycles of the uniform
    permutation that composes one matching with the inverse of the other.
    """
    m = n // 2
    total = np.zeros(m + 1)
    total_sq = np.zeros(m + 1)
    done = 0
    while done < samples:
        rows = min(batch, samples - done)
        perms = rng.permuted(np.tile(np.arange(m, dtype=np.int64), (rows, 1)), axis=1)
        t, t2 = permutation_cycle_moments(perms)
        total += t
        total_sq += t2
        done += rows
    mean_j = total / samples
    var_j = np.maximum(total_sq / samples - mean_j**2, 0.0)
    mean = np.zeros(n + 1)
    sem = np.zeros(n + 1)
    mean[0 : 2 * m + 1 : 2] = mean_j
    sem[0 : 2 * m + 1 : 2] = np.sqrt(var_j / samples)
    return mean, sem


def drift_function(kind: str = "exact") -> Callable[[float], float]:
    """Decrease rate of the scaled count of vertices below the target degree."""
    if kind == "exact":
        return lambda a: 2 - math.exp(-a * a)
    if kind == "quarter":
        return lambda a: 2 - math.exp(-a * a / 4)
    raise ValueError("drift is 'exact' or 'quarter'")


@dataclass
class Trajectory:
    t: np.ndarray
    alpha: np.ndarray
    absorption_time: float
    integral_x: float


def absorption_time(alpha0: float, drift: str = "exact") -> float:
    """Time for the solution of ``a' = -f(a)`` started at ``alpha0`` to reach 0."""
    f = drift_function(drift)
    return integrate.quad(lambda a: 1 / f(a), 0, alpha0)[0]


def absorption_offset_limit(drift: str = "exact") -> float:
    """Limit of ``absorption_time(a) - a/2`` as ``a`` grows."""
    f = drift_function(drift)
    return integrate.quad(lambda a: 1 / f(a) - 0.5, 0, np.inf)[0]


def integral_bound_x(alpha0: float, drift: str = "exact") -> float:
    """The ``x`` with ``integral_0^x f = alpha0``."""
    if drift == "exact":
        F = lambda x: 2 * x - math.sqrt(math.pi) / 2 * math.erf(x)
    else:
        F = lambda x: 2 * x - math.sqrt(math.pi) * math.erf(x / 2)
    if alpha0 <= 0:
        return 0.0
    return optimize.brentq(lambda x: F(x) - alpha0, 0, alpha0 + 1)


def ode_trajectory(
    alpha0: float, step: float = 1e-4, horizon: float | None = None, drift: str = "exact"
) -> Trajectory:
    """Fourth-order Runge-Kutta for ``a' = -f(a)``, clamped at zero once absorbed."""
    if alpha0 <= 0 or step <= 0:
        raise ValueError("need alpha0 > 0 and step > 0")
    f = drift_function(drift)
    T = absorption_time(alpha0, drift)
    end = horizon if horizon is not None else T
    steps = max(1, int(math.ceil(end / step)))
    t = np.linspace(0.0, steps * step, steps + 1)
    a = np.empty(steps + 1)
    a[0] = x = alpha0
    for i in range(steps):
        if x <= 0:
            a[i + 1] = 0.0
            continue
        k1 = f(x)
        k2 = f(x - step * k1 / 2)
        k3 = f(x - step * k2 / 2)
        k4 = f(x - step * k3)
        x = max(x - step * (k1 + 2 * k2 + 2 * k3 + k4) / 6, 0.0)
        a[i + 1] = x
    return Trajectory(t, a, T, integral_bound_x(alpha0, drift))


def isolated_chain_expectation(n: int) -> float:
    """Expected rounds to remove all isolated vertices when the count evolves as a Markov chain.

    With ``s`` isolated vertices the tree joins two of them with probability
    ``1 - (1 - s/n)^(s-1)``, dropping ``s`` by two; otherwise ``s`` drops by
    one.  Rare stalls of the min-degree strategy are ignored.
    """
    e = np.zeros(n + 1)
    for s in range(1, n + 1):
        p = 1 - (1 - s / n) ** (s - 1)
        e[s] = 1 + p * e[max(s - 2, 0)] + (1 - p) * e[s - 1]
    return float(e[n])


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("no trials")
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def chi_square_uniform(counts: Sequence[int]) -> float:
    """p-value of Pearson's test against equal cell probabilities."""
    return float(stats.chisquare(np.asarray(counts, dtype=float)).pvalue)


def summarize(results: Iterable, prediction: float | None = None) -> dict:
    """Mean, spread and success rate of a batch of ``TrialResult`` objects."""
    results = list(results)
    taus = np.array([r.hitting_time for r in results if r.success], dtype=float)
    ok = len(taus)
    lo, hi = wilson_interval(ok, len(results))
    out = {
        "trials": len(results),
        "successes": ok,
        "success_rate": ok / len(results),
        "success_ci95": [lo, hi],
        "wasted_mean": float(np.mean([r.wasted_rounds for r in results])),
    }
    if ok:
        q = np.quantile(taus, [0.05, 0.25, 0.5, 0.75, 0.95])
        out.update(
            tau_mean=float(taus.mean()),
            tau_std=float(taus.std(ddof=1)) if ok > 1 else 0.0,
            tau_median=float(q[2]),
            tau_quantiles=dict(zip(["q05", "q25", "q50", "q75", "q95"], map(float, q))),
        )
    if prediction is not None:
        out["prediction"] = prediction
    return out
