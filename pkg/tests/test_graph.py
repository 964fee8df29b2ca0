import random
from itertools import combinations

import networkx as nx
from hypothesis import given, settings, strategies as st

from rankpath.graph import (
    DisjointPaths, Exceeds, Graph, NotPlanar, Separator, TreeDecomposition, biconnected_split,
    check_rotation, count_faces, greedy_min_fill, is_path, make_nice, planar_embed, separates,
    td_from_ordering, treewidth_decompose, treewidth_exact, validate_nice, validate_td,
    vertex_disjoint_paths,
)

from _gen import random_planar_graph


def complete(n):
    return Graph.from_edges(n, combinations(range(n), 2))


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def grid(a, b):
    g = nx.grid_2d_graph(a, b)
    idx = {v: i for i, v in enumerate(sorted(g))}
    return Graph(idx.values(), [(idx[u], idx[v]) for u, v in g.edges()])


def test_embed_k4_has_four_faces():
    rot = planar_embed(complete(4))
    assert count_faces(complete(4), rot) == 4
    assert check_rotation(complete(4), rot) == []


def test_k5_not_planar():
    assert isinstance(planar_embed(complete(5)), NotPlanar)


def test_edgeless_graph_embeds():
    G = Graph(range(3))
    rot = planar_embed(G)
    assert check_rotation(G, rot) == []
    assert count_faces(G, rot) == 1


def test_split_two_connected():
    G = cycle(5)
    parts = biconnected_split(G, 0, 2).parts
    assert [(a, b) for _, a, b in parts] == [(0, 2)]
    assert parts[0][0] == G


def test_split_at_cut_vertex():
    # triangles {0,1,2} and {2,3,4} share the cut vertex 2
    G = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    parts = biconnected_split(G, 0, 4).parts
    assert [(a, b) for _, a, b in parts] == [(0, 2), (2, 4)]


def test_split_no_path():
    G = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert biconnected_split(G, 0, 3).no_path


def test_disjoint_paths_on_cycle():
    res = vertex_disjoint_paths(cycle(6), {0}, {3}, 2)
    assert isinstance(res, DisjointPaths)
    assert sorted(map(tuple, res.paths)) == [(0, 1, 2, 3), (0, 5, 4, 3)]


def test_separator_on_path():
    G = path_graph(4)
    res = vertex_disjoint_paths(G, {0}, {3}, 2)
    assert isinstance(res, Separator)
    assert len(res.vertices) == 1
    assert separates(G, {0}, {3}, res.vertices)


def test_trivial_path_same_vertex():
    res = vertex_disjoint_paths(path_graph(3), {1}, {1}, 1)
    assert isinstance(res, DisjointPaths)
    assert res.paths == [[1]]


def test_tree_width_one():
    G = Graph.from_edges(6, [(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)])
    td = treewidth_decompose(G, 1)
    assert isinstance(td, TreeDecomposition)
    assert td.width == 1
    assert validate_td(G, td) == []


def test_c5_exceeds_one():
    assert treewidth_decompose(cycle(5), 1) == Exceeds(1)
    assert treewidth_exact(cycle(5)) == 2


def test_grid4_exceeds_three():
    assert treewidth_decompose(grid(4, 4), 3) == Exceeds(3)
    assert treewidth_exact(grid(4, 4)) == 4


def test_validate_td_violations():
    G = path_graph(3)
    one = TreeDecomposition({0: frozenset(G.vertices)}, {0: None})
    assert validate_td(G, one) == []
    assert one.width == 2
    no_edge = TreeDecomposition({0: frozenset({0, 1}), 1: frozenset({2})}, {0: None, 1: 0})
    assert any("uncovered" in p for p in validate_td(G, no_edge))
    split = TreeDecomposition(
        {0: frozenset({0, 1}), 1: frozenset({1, 2}), 2: frozenset({0})}, {0: None, 1: 0, 2: 1})
    assert any("disconnected" in p for p in validate_td(G, split))


def test_nice_single_edge():
    G = Graph.from_edges(2, [(0, 1)])
    ntd = make_nice(td_from_ordering(G, [0, 1]), G, 0, 1)
    assert validate_nice(ntd, G) == []
    assert all(nd.bag == frozenset({0, 1}) for nd in ntd.nodes)


def test_nice_path_has_one_insert_forget_pair():
    G = path_graph(3)  # s=0, v=1, t=2
    ntd = make_nice(td_from_ordering(G, greedy_min_fill(G)), G, 0, 2)
    assert validate_nice(ntd, G) == []
    kinds = [(nd.kind, nd.vertex) for nd in ntd.nodes if nd.kind in ("insert", "forget")]
    assert sorted(kinds) == [("forget", 1), ("insert", 1)]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_nice_decomposition_is_valid(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 12)
    G = random_planar_graph(rng, n, 0.35)
    s, t = rng.sample(range(n), 2)
    td = td_from_ordering(G, greedy_min_fill(G))
    assert validate_td(G, td) == []
    ntd = make_nice(td, G, s, t)
    assert validate_nice(ntd, G) == []
    assert ntd.width <= td.width + 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_treewidth_verdicts_match_exact(seed):
    rng = random.Random(seed)
    G = random_planar_graph(rng, rng.randint(3, 10), 0.5)
    w = rng.randint(1, 4)
    tw = treewidth_exact(G)
    res = treewidth_decompose(G, w)
    if isinstance(res, Exceeds):
        assert tw > w
    else:
        assert validate_td(G, res) == []
        assert res.width <= 2 * w + 1
        assert tw <= res.width


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_menger_duality(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 10)
    G = random_planar_graph(rng, n, 0.4)
    a, b = rng.sample(range(n), 2)
    c = rng.randint(1, 3)
    res = vertex_disjoint_paths(G, {a}, {b}, c)
    if isinstance(res, DisjointPaths):
        assert len(res.paths) == c
        for p in res.paths:
            assert is_path(G, p, a, b)
        inner = [set(p[1:-1]) for p in res.paths]
        assert sum(map(len, inner)) == len(set().union(*inner))
    else:
        # the edge ab itself is one path that no vertex set can cut
        direct = G.has_edge(a, b)
        H = Graph(G.vertices, [e for e in G.edges() if e != tuple(sorted((a, b)))])
        assert len(res.vertices) + direct < c
        assert separates(H, {a}, {b}, res.vertices)
