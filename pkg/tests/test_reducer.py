import pytest

from rankpath.exactalg import GF
from rankpath.framework import Framework
from rankpath.graph import Graph, Incomplete, biconnected_split, validate_td
from rankpath.instances import gen_wall_instance
from rankpath.matroid import LinearMatroid
from rankpath.oracle import exact_search
from rankpath.reducer import (
    BelowThreshold, Irrelevant, PathFound, constants_for, h_bound, reduce_loop, reduce_once,
)
from rankpath.wall import f_bound_fit, pack_height

RELAXED = constants_for(2, "relaxed")


def test_h_values():
    assert [h_bound(k) for k in (1, 2, 3)] == [9, 21, 37]


def test_stated_constants_k2():
    c = constants_for(2, "paper")
    assert (c.b, c.x, c.z, c.q, c.r, c.g) == (21, 3, 63, 71, 145, 5256)


def test_relaxed_defaults():
    c2, c3 = constants_for(2, "relaxed"), constants_for(3, "relaxed")
    assert (c2.q, c2.r) == (5, 13) and (c3.q, c3.r) == (7, 17)
    assert c2.q == f_bound_fit(1, 1, 1, 3) and c2.r == pack_height(1, 2, c2.q)


def test_explicit_relaxed_constants():
    c = constants_for(3, "relaxed:3,3,3,3,13")
    assert c.g == 504 and c.mode == "relaxed"
    assert constants_for(3, "relaxed:3,3,3,3,13,7").g == 7


@pytest.mark.parametrize("mode", ["relaxed:2,3,3,3,13", "relaxed:3,3", "relaxed:a,b,c,d,e", "bogus"])
def test_bad_constants(mode):
    with pytest.raises(ValueError):
        constants_for(2, mode)


def test_path_found_on_uniform_wall():
    for seed in range(3):
        b = gen_wall_instance(13, "uniform:2", seed)
        out = reduce_once(b.framework, RELAXED, b.wall)
        assert isinstance(out, PathFound)
        assert b.framework.verify(out.path, out.independent_set)


def test_irrelevant_keeps_answer():
    b = gen_wall_instance(13, "sparse:3:3:2:gfp101", 0)
    F = b.framework
    out = reduce_once(F, RELAXED, b.wall)
    assert isinstance(out, Irrelevant)
    assert out.vertex in b.wall.vertices()
    assert exact_search(F).answer == exact_search(F.delete(out.vertex)).answer


def test_vertex_off_block_chain_is_irrelevant():
    G = Graph(range(4), [(0, 1), (1, 2), (1, 3)])
    F = Framework(G, LinearMatroid.from_rows(GF(5), [[1, 1, 1, 1]]), 0, 2, 1)
    out = reduce_once(F, RELAXED)
    assert isinstance(out, Irrelevant) and out.vertex == 3


def test_below_threshold_on_small_grid():
    cols, rows = 6, 4
    n = cols * rows
    edges = [(v, v + 1) for v in range(n) if v % cols != cols - 1] + [(v, v + cols) for v in range(n - cols)]
    G = Graph(range(n), edges)
    F = Framework(G, LinearMatroid.from_rows(GF(29), [[1] * n]), 0, n - 1, 1)
    out = reduce_once(F, RELAXED)
    assert isinstance(out, BelowThreshold)
    assert validate_td(G, out.decomposition) == []


def test_reduce_loop_invariants():
    b = gen_wall_instance(13, "sparse:3:3:2:gfp101", 2)
    F0 = b.framework
    seen = []

    def check(before, after, v):
        assert v not in after.graph and after.graph.n == before.graph.n - 1
        assert tuple(sorted(after.matroid.ground)) == after.graph.vertices
        seen.append(v)

    res = reduce_loop(F0, RELAXED, b.wall, check, max_steps=4)
    assert res.deletions == seen
    assert len(set(res.deletions)) == len(res.deletions)
    assert F0.s in res.framework.graph and F0.t in res.framework.graph
    assert exact_search(F0).answer == exact_search(res.framework).answer


def test_reduce_loop_stops_on_path():
    b = gen_wall_instance(13, "uniform:2", 1)
    res = reduce_loop(b.framework, RELAXED, b.wall)
    assert isinstance(res.outcome, PathFound) and res.deletions == []


def test_terminals_stay_connected():
    b = gen_wall_instance(13, "sparse:3:3:2:gfp101", 0)
    res = reduce_loop(b.framework, RELAXED, b.wall, max_steps=3)
    F = res.framework
    assert biconnected_split(F.graph, F.s, F.t).parts
    assert isinstance(res.outcome, (Incomplete, PathFound, BelowThreshold))
