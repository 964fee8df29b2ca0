import random
from itertools import combinations

import networkx as nx
import pytest

from rankpath.exactalg import QQ
from rankpath.graph import Graph, check_rotation, planar_embed
from rankpath.instances import (
    InstanceError, gen_random_planar, gen_wall_instance, matroid_from_spec, parse_instance,
    reduce_colored_path, reduce_longest_path, reduce_t_cycle, write_instance,
)
from rankpath.oracle import brute_force
from rankpath.wall import validate_wall

MINIMAL = """FRAMEWORK v1
FIELD rational
GRAPH 2 1
0 1
TERMINALS 0 1
K 1
MATROID 1 2
1 0
"""


def _nx(G):
    H = nx.Graph()
    H.add_nodes_from(G.vertices)
    H.add_edges_from(G.edges())
    return H


def _random_graph(rng, n, p):
    return Graph(range(n), [e for e in combinations(range(n), 2) if rng.random() < p])


def longest_path_at_least(G, s, t, k):
    H = _nx(G)
    if not nx.has_path(H, s, t):
        return False
    return any(len(p) >= k for p in nx.all_simple_paths(H, s, t))


def cycle_through(G, T):
    H = _nx(G)
    for cyc in nx.simple_cycles(H):
        if len(cyc) >= 3 and set(T) <= set(cyc):
            return True
    return False


def colored_path(G, s, t, colour, k):
    H = _nx(G)
    if not nx.has_path(H, s, t):
        return False
    return any(len({colour[v] for v in p}) >= k for p in nx.all_simple_paths(H, s, t))


# -- format -----------------------------------------------------------------

def test_minimal_round_trip():
    assert write_instance(parse_instance(MINIMAL)) == MINIMAL


def test_rational_canonical_form():
    text = MINIMAL.replace("1 0\n", "3/6 0\n")
    assert "1/2 0" in write_instance(parse_instance(text))


@pytest.mark.parametrize("edit, message", [
    (("MATROID 1 2", "MATROID 1 3"), "ground set size mismatch"),
    (("FIELD rational", "FIELD gfp 4"), "modulus 4 is not prime"),
    (("FIELD rational", "FIELD reals"), "line 2"),
    (("0 1\nTERM", "0 2\nTERM"), "dangling vertex id 2"),
])
def test_parse_errors(edit, message):
    with pytest.raises(InstanceError, match=message):
        parse_instance(MINIMAL.replace(*edit))


def test_error_carries_position():
    with pytest.raises(InstanceError) as info:
        parse_instance(MINIMAL.replace("MATROID 1 2", "MATROID 1 3"))
    assert info.value.line == 7 and info.value.col > 1


def test_generated_bundles_round_trip():
    for seed in range(5):
        for bundle in (gen_random_planar(9, 0.4, "random:3:2:gfp101", seed),
                       gen_wall_instance(3, "partition:3:2", seed, subdivide=1)):
            text = write_instance(bundle)
            assert write_instance(parse_instance(text)) == text


# -- reductions -------------------------------------------------------------

def test_longest_path_matroid_is_uniform():
    for n in range(2, 11):
        k = min(n, 4)
        G = Graph(range(n), [])
        M = reduce_longest_path(G, 0, 1, k).matroid
        for size in range(k + 2):
            for S in combinations(range(n), size):
                assert M.rank(S) == min(size, k)


def test_longest_path_reduction_matches_direct_search():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(2, 9)
        G = _random_graph(rng, n, 0.35)
        k = rng.randint(0, n)
        F = reduce_longest_path(G, 0, n - 1, k)
        assert brute_force(F).answer == longest_path_at_least(G, 0, n - 1, k)


def test_t_cycle_c4_opposite():
    G = Graph(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
    answers = [brute_force(F).answer for F in reduce_t_cycle(G, [0, 2])]
    assert len(answers) == 4 and any(answers)


def test_t_cycle_empty_terminal_set():
    G = Graph(range(5), [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
    out = {(F.s, F.t): brute_force(F).answer for F in reduce_t_cycle(G, [])}
    assert all(F.k == 0 for F in reduce_t_cycle(G, []))
    assert out == {(0, 1): True, (0, 2): True, (1, 2): True, (2, 3): False, (3, 4): False}


def test_t_cycle_on_tree_is_no():
    G = Graph(range(6), [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])
    assert not any(brute_force(F).answer for F in reduce_t_cycle(G, [2, 4]))


def test_t_cycle_reduction_matches_cycle_search():
    rng = random.Random(12)
    for _ in range(100):
        n = rng.randint(3, 8)
        G = _random_graph(rng, n, 0.4)
        T = rng.sample(range(n), rng.randint(1, 3))
        got = any(brute_force(F).answer for F in reduce_t_cycle(G, T))
        assert got == cycle_through(G, T)


def test_colored_path_small_cases():
    G = Graph(range(4), [(0, 1), (1, 2), (2, 3)])
    assert not brute_force(reduce_colored_path(G, 0, 3, {v: 0 for v in range(4)}, 2)).answer
    assert brute_force(reduce_colored_path(G, 0, 3, {v: v for v in range(4)}, 4)).answer


def test_colored_path_reduction_matches_direct_search():
    rng = random.Random(13)
    for _ in range(100):
        rows, cols = rng.randint(1, 3), rng.randint(2, 4)
        n = rows * cols
        edges = [(v, v + 1) for v in range(n) if v % cols != cols - 1] + [(v, v + cols) for v in range(n - cols)]
        G = Graph(range(n), [e for e in edges if rng.random() < 0.8])
        colour = {v: rng.randrange(3) for v in range(n)}
        k = rng.randint(0, 4)
        F = reduce_colored_path(G, 0, n - 1, colour, k)
        assert brute_force(F).answer == colored_path(G, 0, n - 1, colour, k)


def test_colored_rank_counts_colours():
    rng = random.Random(3)
    G = Graph(range(8), [])
    colour = {v: rng.randrange(3) for v in range(8)}
    M = reduce_colored_path(G, 0, 1, colour, 2).matroid
    for S in combinations(range(8), 3):
        assert M.rank(S) == len({colour[v] for v in S})


# -- generators -------------------------------------------------------------

def test_wall_instance_certificate_validates():
    b = gen_wall_instance(7, "uniform:2", 0)
    assert validate_wall(b.framework.graph, b.wall) == []
    W = b.wall
    comp = set(W.vertices())
    assert b.framework.s not in comp and b.framework.t not in comp


def test_generators_are_deterministic():
    for make in (lambda: gen_random_planar(12, 0.5, "sparse:4:3:2:rational", 7),
                 lambda: gen_wall_instance(5, "random:3:2:gfp2", 7, subdivide=2)):
        assert write_instance(make()) == write_instance(make())


def test_random_planar_embeds():
    for seed in range(10):
        b = gen_random_planar(15, 0.6, "uniform:3", seed)
        G = b.framework.graph
        rot = planar_embed(G)
        assert check_rotation(G, rot) == []
        assert check_rotation(G, b.embedding) == []


def test_matroid_specs():
    rng = random.Random(0)
    M, k = matroid_from_spec("sparse:2:3:1:rational", range(6), rng)
    assert k == 1 and M.field is QQ
    assert sum(1 for v in range(6) if M.rank([v]) == 1) <= 2
    with pytest.raises(ValueError):
        matroid_from_spec("bogus:1", range(3), rng)
