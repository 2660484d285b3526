import itertools
from collections import Counter

import numpy as np
import pytest

from ustsr.analysis import chi_square_uniform
from ustsr.graphs import (
    PatternGraph,
    SimpleGraph,
    is_hamiltonian_cycle_witness,
    is_perfect_matching,
    verify_h_cover,
    verify_h_factor,
    vertex_connectivity,
)
from ustsr.process import run_seeded_trial, run_trial
from ustsr.sampling import make_rng, prufer_decode, sample_ust_complete
from ustsr.strategies import (
    BipartiteMatcher,
    CentralFactor,
    ChainFactor,
    HCover,
    HamiltonCycle,
    KConnected,
    MinDegree,
    PerfectMatching,
    TreeFactor,
    build_strategy,
    factor_strategy,
)
from ustsr.strategies.base import Strategy
from ustsr.strategies.factors import ladder


@pytest.mark.parametrize("k", [1, 2, 3])
def test_min_degree_final_degrees(k):
    for i in range(3):
        r = run_seeded_trial(lambda: MinDegree(k), 300, 1, i)
        assert r.success
        assert r.final_min_degree == k
        assert r.final_max_degree <= k + 1


def test_min_degree_stays_balanced_during_the_run():
    # while working on level i no vertex goes above degree i + 1
    n, k = 200, 3

    def watch(rounds, g, s):
        assert g.max_degree <= s.level + 1

    r = run_trial(MinDegree(k), n, make_rng(8), observer=watch)
    assert r.success


def test_min_degree_ties_are_uniform():
    # empty graph on 4 vertices: every edge of the offered tree is in the top class
    tree = prufer_decode((3, 3), 4)
    s = MinDegree(1)
    s.reset(4, make_rng(0))
    counts = Counter()
    for _ in range(6000):
        g = SimpleGraph(4)
        s.level = 1
        counts[s._scan(g, tree, 0)[0]] += 1
    assert sorted(counts) == [0, 1, 2]
    assert chi_square_uniform([counts[i] for i in range(3)]) > 1e-3


def test_min_degree_prefers_two_deficient_endpoints():
    g = SimpleGraph.from_edges(5, [(0, 1)])
    tree = prufer_decode((1, 2, 3), 5)  # path 0-1-2-3-4
    s = MinDegree(1)
    s.reset(5, make_rng(0))
    i, c = s._scan(g, tree, 0)
    assert c == 0
    a, b = int(tree.u[i]), int(tree.v[i])
    assert g.degree(a) == 0 and g.degree(b) == 0


class MatchOnly(Strategy):
    def __init__(self, A, B, **kw):
        self.A, self.B, self.kw = A, B, kw

    def program(self):
        tree = yield
        self.matcher = BipartiteMatcher(self.n, self.A, self.B, **self.kw)
        yield from self.run_phase("matching", self.matcher.run(self, tree))
        self.finish(self.matcher.pairs())

    def holds(self, g):
        w = self.witness()
        return sorted(a for a, _ in w) == sorted(self.A) and all(g.has_edge(a, b) for a, b in w)


def test_matcher_saturates_a_and_respects_sides():
    n = 500
    A, B = list(range(0, 150)), list(range(150, 400))
    s = MatchOnly(A, B)
    r = run_trial(s, n, make_rng(3))
    assert r.success
    m = s.matcher
    assert m.done and len(m.pairs()) == 150
    assert {a for a, _ in m.pairs()} == set(A)
    assert {b for _, b in m.pairs()} <= set(B)
    assert all(m.mate[m.mate[a]] == a for a in A)
    assert sum(m.stage_rounds.values()) == m.rounds


def test_matcher_stages_run_in_order():
    s = MatchOnly(list(range(512)), list(range(512, 1024)))
    run_trial(s, 1024, make_rng(4))
    assert list(s.matcher.stage_rounds)[0] == "greedy"
    assert s.matcher.stage == "done"


@pytest.mark.parametrize("n", [64, 501, 1000])
def test_perfect_matching(n):
    r = run_seeded_trial(PerfectMatching, n, 2, 0)
    assert r.success
    assert len(r.witness) == n // 2


def test_hamilton_cycle():
    for i in range(3):
        r = run_seeded_trial(HamiltonCycle, 400, 5, i)
        assert r.success
        assert sorted(r.witness) == list(range(400))


def test_hamilton_witness_is_checked_against_g():
    s = HamiltonCycle()
    r = run_trial(s, 200, make_rng(6))
    g = SimpleGraph.from_edges(200, [(r.witness[i], r.witness[(i + 1) % 200]) for i in range(200)])
    assert is_hamiltonian_cycle_witness(g, r.witness)
    assert sum(s.initial_cycles) == 200
    assert s.merges == len(s.initial_cycles) - 1


def test_hamilton_needs_even_order():
    with pytest.raises(ValueError):
        run_trial(HamiltonCycle(), 11, make_rng(0))


@pytest.mark.parametrize("k", [3, 4])
def test_k_connected(k):
    s = KConnected(k)
    r = run_trial(s, 300, make_rng(k))
    assert r.success
    deg = s.H.degrees
    assert deg.min() >= k and deg.max() <= k + 1
    assert vertex_connectivity(s.H) >= k


class RecordingKConnected(KConnected):
    def _repair(self, tree):
        self.before_repair = self.H.degrees.copy()
        return (yield from super()._repair(tree))


def test_k_connected_degree_bounds_around_repair():
    for seed in range(4):
        s = RecordingKConnected(3)
        r = run_trial(s, 200, make_rng(seed))
        assert r.success
        assert s.before_repair.max() <= 3
        assert s.H.degrees.max() <= 4


def test_two_matchings_only_give_cycles():
    # with k = 2 the matched graph is 2-regular, hence a disjoint union of cycles
    s = KConnected(2)
    run_trial(s, 300, make_rng(2))
    assert s.H.degrees.min() >= 2 and s.H.degrees.max() <= 3


@pytest.mark.parametrize("pattern", ["k2", "p3", "star3", "p4"])
def test_tree_factor(pattern):
    h = PatternGraph.named(pattern)
    n = 600 - 600 % h.order
    r = run_trial(TreeFactor(h), n, make_rng(1))
    assert r.success
    assert len(r.witness) == n // h.order


PENDANT_TRIANGLE = PatternGraph(4, ((0, 1), (0, 2), (1, 2), (2, 3)), name="pendant triangle")


@pytest.mark.parametrize("pattern", ["p3", "star3", PENDANT_TRIANGLE])
def test_central_factor(pattern):
    h = PatternGraph.named(pattern) if isinstance(pattern, str) else pattern
    n = 600 - 600 % h.order
    r = run_seeded_trial(lambda: CentralFactor(h), n, 3, 0, max_rounds=20 * n)
    assert r.success, r.failure


def test_triangle_has_no_factor_strategy():
    with pytest.raises(ValueError):
        factor_strategy("triangle")
    with pytest.raises(ValueError):
        CentralFactor(PatternGraph.named("triangle"))


def test_factor_registry():
    assert isinstance(factor_strategy("p3"), TreeFactor)
    assert isinstance(factor_strategy(PENDANT_TRIANGLE), CentralFactor)
    with pytest.raises(ValueError):
        factor_strategy("c4")
    assert isinstance(factor_strategy("k3_chain"), ChainFactor)
    assert isinstance(build_strategy("cover", pattern="triangle"), HCover)
    with pytest.raises(ValueError):
        build_strategy("nope")


def test_ladder():
    assert ladder(3) == [(0, 1), (1, 2), (0, 2)]
    assert len(ladder(5)) == 10
    assert len(set(ladder(5))) == 10


@pytest.fixture(scope="module")
def chain_run():
    n = 600
    s = ChainFactor(3, lengths=(2, 4, 8))
    graphs = []
    r = run_seeded_trial(lambda: s, n, 0, 0, max_rounds=20 * n, observer=lambda i, g, st: graphs.append(g) if not graphs else None)
    return s, r, graphs[0]


def test_chain_quotas_are_never_exceeded(chain_run):
    s, r, _ = chain_run
    assert r.success, r.failure
    assert all(x <= q for x, q in zip(s.count[1:], s.quota[1:]))
    assert s.count[3] == s.quota[3]


def test_chain_sets_induce_their_level(chain_run):
    s, r, g = chain_run
    for members, lvl in zip(s.sets, s.level):
        inside = {
            (s.local[a], s.local[b]) if s.local[a] < s.local[b] else (s.local[b], s.local[a])
            for a, b in itertools.combinations(members, 2)
            if g.has_edge(a, b)
        }
        assert inside == set(ladder(3)[:lvl])


def test_chain_witness(chain_run):
    s, r, g = chain_run
    assert verify_h_factor(g, s.pattern, r.witness)
    assert all(len(row) == s.pattern.order for row in r.witness)


@pytest.mark.parametrize("pattern,n", [("triangle", 600), ("p3", 500), ("c4", 500)])
def test_cover(pattern, n):
    h = PatternGraph.named(pattern)
    s = HCover(h)
    graphs = []
    r = run_trial(s, n, make_rng(2), max_rounds=20 * n, observer=lambda i, g, st: graphs.append(g) if not graphs else None)
    assert r.success, r.failure
    assert verify_h_cover(graphs[0], h, r.witness)
    assert all(len(u) <= s.cap_size for sets in s.sets for u in sets.values())
