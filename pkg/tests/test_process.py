import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ustsr.graphs import is_perfect_matching
from ustsr.process import ProtocolViolation, StoppingCondition, run_batch, run_seeded_trial, run_trial
from ustsr.sampling import make_rng
from ustsr.strategies import MinDegree, PerfectMatching, SpanningTreeGreedy
from ustsr.strategies.base import Strategy


class OffTree(Strategy):
    """Always asks for a pair that is never offered, to exercise the protocol check."""

    def program(self):
        while True:
            yield (0, 0)

    def holds(self, g):
        return False


class Lazy(Strategy):
    """Passes every round."""

    def program(self):
        while True:
            yield None

    def holds(self, g):
        return False




def test_off_tree_edge_is_rejected():
    with pytest.raises(ProtocolViolation):
        run_trial(OffTree(), 10, make_rng(0))


def test_budget_exhaustion_counts_all_rounds():
    r = run_trial(Lazy(), 12, make_rng(1), max_rounds=30)
    assert not r.success and r.hitting_time is None
    assert r.rounds_used == 30
    assert r.failure == "round budget exhausted"
    assert r.stats["idle_rounds"] == r.rounds_used + 1


@given(st.integers(6, 60), st.integers(1, 3), st.integers(0, 2**32))
@settings(max_examples=25, deadline=None)
def test_round_bookkeeping(n, k, seed):
    # every round adds an edge or wastes one, and tau never exceeds the rounds used
    r = run_trial(MinDegree(k), n, make_rng(seed), trace=True)
    assert r.success
    assert r.rounds_used == r.stats["edges"] + r.wasted_rounds
    assert r.hitting_time == r.rounds_used
    assert len(r.trace) == r.rounds_used
    assert sum(row.was_new for row in r.trace) == r.stats["edges"]
    assert r.final_min_degree >= k


def test_hitting_time_is_first_round_with_property():
    n, k = 40, 2
    mins = []
    r = run_trial(MinDegree(k), n, make_rng(3), observer=lambda i, g, s: mins.append(g.min_degree))
    assert r.success
    first = next(i for i, m in enumerate(mins, start=1) if m >= k)
    assert r.hitting_time == first


def test_same_seed_same_result():
    a = run_seeded_trial(lambda: MinDegree(2), 200, 11, 4, trace=True)
    b = run_seeded_trial(lambda: MinDegree(2), 200, 11, 4, trace=True)
    assert a.hitting_time == b.hitting_time and a.seed == b.seed
    assert [(t.chosen_u, t.chosen_v) for t in a.trace] == [(t.chosen_u, t.chosen_v) for t in b.trace]


def test_batch_trials_are_independent_of_order():
    batch = run_batch(lambda: MinDegree(1), 100, 5, seed=9)
    alone = run_seeded_trial(lambda: MinDegree(1), 100, 9, 3)
    assert batch[3].hitting_time == alone.hitting_time
    assert len({r.seed for r in batch}) == 5


def test_custom_stopping_condition():
    stop = StoppingCondition("has matching", lambda g, s: is_perfect_matching(g, s.matcher.pairs()), 5000)
    r = run_trial(PerfectMatching(), 64, make_rng(2), stop=stop)
    assert r.success
    assert r.witness is not None and len(r.witness) == 32


def test_debug_mode_keeps_property():
    r = run_trial(MinDegree(2), 80, make_rng(4), debug=True)
    assert r.success


def test_validator_rejection_is_failure():
    class Liar(Lazy):
        def program(self):
            tree = yield None
            self.finish()
            yield None

    r = run_trial(Liar(), 10, make_rng(0))
    assert not r.success
    assert "validator" in r.failure


@pytest.mark.parametrize("n", [4, 16, 64])
def test_greedy_spanning_tree_takes_n_minus_one_rounds(n):
    results = run_batch(SpanningTreeGreedy, n, 100, seed=n)
    assert all(r.success and r.hitting_time == n - 1 and r.wasted_rounds == 0 for r in results)
