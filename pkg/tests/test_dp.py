import random

import pytest
from hypothesis import given, settings, strategies as st

from rankpath.dp import (
    DPConfig, _Pruner, dp_forget, dp_insert, dp_join, dp_leaf, build_tables, nice_for, sig_of_forest,
    sm_canon, sm_forget_predecessors, sm_rem, sm_valid, sm_xi, solve_dp,
)
from rankpath.exactalg import GF, QQ
from rankpath.framework import Framework
from rankpath.graph import Graph
from rankpath.matroid import LinearMatroid, vandermonde_uniform
from rankpath.oracle import brute_force

from _gen import random_framework

S_, T_, A_, B_, V_ = 0, 1, 2, 3, 4


def sm(*els):
    return sm_canon(els)


def test_sig_examples():
    G = Graph.from_edges(3, [(0, 2), (2, 1)])
    assert sig_of_forest(G, {0, 1}, {0, 1}, []) == sm((0,), (1,))
    assert sig_of_forest(G, {0, 1}, {0, 1, 2}, [(0, 2), (2, 1)]) == sm((0, 1))
    assert sig_of_forest(G, {0, 1}, {0, 2}, [(0, 2)]) is None


def test_sm_rem_examples():
    assert sm_rem(sm((A_, V_), (V_, B_)), V_) == sm((A_,), (B_,))
    assert sm_rem(sm((V_,)), V_) == ()
    assert sm_rem(sm((2, V_), (2, 3)), V_) == sm((2, 3))


def test_forget_predecessors():
    assert sm((A_, V_), (V_, B_)) in sm_forget_predecessors(sm((A_, B_)), V_)
    assert sm_forget_predecessors(sm((A_,), (B_,)), V_) == []
    assert sm_forget_predecessors(sm((S_, T_)), V_) == [sm((S_, V_), (V_, T_))]


def test_sm_xi_counts():
    assert len(sm_xi(sm((0,)))) == 2
    assert sm_xi(()) == [((), ())]
    m = sm((0, 1), (2,), (3,))
    assert len(sm_xi(m)) == 8


def test_two_semi_matchings_on_two_vertices():
    cands = [sm((0,), (1,)), sm((0, 1)), sm((0, 1), (0,)), sm((0,)), sm((1,))]
    ok = [m for m in cands if sm_valid(m) and {v for e in m for v in e} == {0, 1}]
    assert ok == [sm((0,), (1,)), sm((0, 1))]


def _pruner(n=5, k=2):
    M = vandermonde_uniform(GF(7), k, range(n))
    G = Graph(range(n))
    return Framework(G, M, 0, 1, k), _Pruner(Framework(G, M, 0, 1, k), DPConfig())


def test_leaf():
    G = Graph.from_edges(3, [(0, 2)])
    assert list(dp_leaf(G, 0, 1)) == [(sm((0,), (1,)), 0)]
    H = Graph.from_edges(2, [(0, 1)])
    cells = dp_leaf(H, 0, 1)
    assert len(cells) == 2
    assert all(i == 0 and list(v) == [()] for (m, i), v in cells.items())


def test_insert_neighbour_of_s():
    G = Graph.from_edges(3, [(0, 2)])
    _, pr = _pruner(3)
    child = {(sm((0,), (1,)), 0): [((), None)]}
    tab = dp_insert(child, 2, G, frozenset({0, 1, 2}), {0, 1}, pr)
    assert (sm((0, 2), (1,)), 0) in tab
    assert (sm((1, 2), (0,)), 0) not in tab  # no edge 1-2
    assert (sm((0,), (1,), (2,)), 0) in tab
    assert (sm((0,), (1,)), 0) in tab


def test_forget_internal_vertex():
    F, pr = _pruner(3)
    child = {(sm((0, 2), (1, 2)), 0): [((), None)]}
    tab = dp_forget(child, 2, F.matroid, 2, pr)
    assert tab[(sm((0, 1)), 1)][0][0] == (2,)
    assert (sm((0, 1)), 0) in tab


def test_forget_isolated_vertex_contributes_nothing():
    F, pr = _pruner(3)
    child = {(sm((0,), (1,), (2,)), 0): [((), None)]}
    assert dp_forget(child, 2, F.matroid, 2, pr) == {}


def test_forget_absent_vertex_keeps_key():
    F, pr = _pruner(3)
    key = (sm((0,), (1,)), 0)
    assert list(dp_forget({key: [((), None)]}, 2, F.matroid, 2, pr)) == [key]


def test_join_pair_with_singletons():
    F, pr = _pruner(5)
    left = {(sm((0, 1)), 1): [((3,), None)]}
    right = {(sm((0,), (1,)), 1): [((4,), None)]}
    tab = dp_join(left, right, F.matroid, 2, {0, 1}, pr)
    assert list(tab) == [(sm((0, 1)), 2)]
    assert tab[(sm((0, 1)), 2)][0][0] == (3, 4)


def test_join_rejects_duplicate_pair():
    F, pr = _pruner(5)
    both = {(sm((0, 1)), 0): [((), None)]}
    assert dp_join(both, both, F.matroid, 2, {0, 1}, pr) == {}


def test_path_uniform_k3():
    G = Graph.from_edges(3, [(0, 2), (2, 1)])
    F = Framework(G, vandermonde_uniform(GF(5), 3, range(3)), 0, 1, 3)
    res = solve_dp(F)
    assert res.answer and res.path == [0, 2, 1]


def test_single_edge_independent_terminals():
    G = Graph.from_edges(2, [(0, 1)])
    F = Framework(G, LinearMatroid.from_rows(QQ, [[1, 0], [0, 1]]), 0, 1, 2)
    assert solve_dp(F).answer
    assert not solve_dp(F, cfg=DPConfig(paper_literal_root=True)).answer


def test_k0_reachability():
    M = LinearMatroid.from_rows(QQ, [[0, 0, 0]])
    assert solve_dp(Framework(Graph.from_edges(3, [(0, 2), (2, 1)]), M, 0, 1, 0)).answer
    assert not solve_dp(Framework(Graph.from_edges(3, [(0, 2)]), M, 0, 1, 0)).answer


def test_tables_hold_independent_sets_of_size_i():
    rng = random.Random(8)
    for _ in range(30):
        F = random_framework(rng)
        tables, _ = build_tables(F, nice_for(F), DPConfig())
        for tab in tables.values():
            for (m, i), entries in tab.items():
                assert sm_valid(m)
                for S, _ in entries:
                    assert len(S) == i <= F.k
                    assert F.matroid.is_independent(S)
                    assert not set(S) & {F.s, F.t}


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_dp_matches_brute_force(seed):
    F = random_framework(random.Random(seed))
    want = brute_force(F).answer
    res = solve_dp(F)
    assert res.answer == want
    if res.answer:
        assert F.verify(res.path, res.independent_set)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_uniform_rep_and_no_pruning_agree(seed):
    F = random_framework(random.Random(seed))
    a = solve_dp(F).answer
    assert solve_dp(F, cfg=DPConfig(uniform_k_rep=True)).answer == a
    assert solve_dp(F, cfg=DPConfig(prune=False)).answer == a
    if (F.matroid.field.size() or 10**9) >= 101:
        assert solve_dp(F, cfg=DPConfig(randomized=True, seed=3)).answer == a


def test_literal_forget_diverges():
    rng = random.Random(5)
    div = 0
    for _ in range(100):
        n = rng.randint(3, 8)
        from _gen import random_planar_graph

        G = random_planar_graph(rng, n)
        F = Framework(G, vandermonde_uniform(GF(11), n, range(n)), 0, n - 1, rng.randint(1, n))
        if solve_dp(F, cfg=DPConfig(paper_literal_forget=True)).answer != brute_force(F).answer:
            div += 1
    assert div > 0


def test_deterministic_witness():
    rng = random.Random(12)
    for _ in range(10):
        F = random_framework(rng)
        a, b = solve_dp(F), solve_dp(F)
        assert (a.answer, a.path, a.independent_set) == (b.answer, b.path, b.independent_set)
