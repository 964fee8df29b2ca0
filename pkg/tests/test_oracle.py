import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rankpath.exactalg import GF, QQ
from rankpath.framework import Framework
from rankpath.graph import Graph
from rankpath.instances import reduce_t_cycle
from rankpath.matroid import LinearMatroid, representative_family, truncated_for, vandermonde_uniform
from rankpath.oracle import (
    OracleLimit, brute_force, brute_force_subsets, check_representative, check_truncation, exact_search,
)

from _gen import random_dense_matroid, random_framework


def test_edge_with_rank_two_terminals():
    G = Graph.from_edges(2, [(0, 1)])
    F = Framework(G, LinearMatroid.from_rows(QQ, [[1, 0], [0, 1]]), 0, 1, 2)
    res = brute_force(F)
    assert res.answer and res.path == [0, 1]


def test_disconnected_terminals():
    G = Graph.from_edges(3, [(0, 2)])
    F = Framework(G, LinearMatroid.from_rows(QQ, [[1, 1, 1]]), 0, 1, 0)
    res = brute_force(F)
    assert not res.answer and res.path is None


def test_c4_long_arc():
    # C4 = 0-1-2-3-0, terminals 0,1 adjacent; opposite vertices 2? use T = {2, 3}
    G = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    fld = GF(5)
    rows = [[0, 0, 1, 0], [0, 0, 0, 1]]
    F = Framework(G, LinearMatroid.from_rows(fld, rows), 0, 1, 2)
    res = brute_force(F)
    assert res.answer and res.path == [0, 3, 2, 1]


def test_size_limit():
    G = Graph.from_edges(20, [(i, i + 1) for i in range(19)])
    F = Framework(G, LinearMatroid.from_rows(QQ, [[0] * 20]), 0, 19, 0)
    with pytest.raises(OracleLimit):
        brute_force(F)


def test_check_representative_examples():
    M = vandermonde_uniform(GF(7), 2, range(4))
    fam = [(0,), (1,), (2,)]
    assert check_representative(M, fam, fam, 1)
    assert not check_representative(M, fam, [], 0)


def test_check_truncation_detects_wrong_matroid():
    M = vandermonde_uniform(GF(7), 3, range(5))
    N = vandermonde_uniform(GF(7), 1, range(5))
    assert check_truncation(M, truncated_for(M, 2), 2)
    assert not check_truncation(M, N, 2)


def test_representative_outputs_pass_check():
    rng = random.Random(4)
    done = 0
    while done < 40:
        M = random_dense_matroid(rng, rng.randint(3, 8), rng.randint(2, 4), rng.choice([GF(2), GF(101), QQ]))
        if M.rank_total < 2:
            continue
        p, q = 1, M.rank_total - 1
        fam = [X for X in combinations(M.ground, p) if M.is_independent(X)]
        out = representative_family(truncated_for(M, p + q), fam, p, q)
        assert check_representative(M, fam, out, q)
        done += 1


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6))
def test_readings_agree(seed):
    """Rank of the path versus an independent k-subset on it: same decision."""
    F = random_framework(random.Random(seed))
    assert brute_force(F).answer == brute_force_subsets(F)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_exact_search_matches_brute_force(seed):
    F = random_framework(random.Random(seed), n_max=11)
    res = exact_search(F)
    assert res.answer == brute_force(F).answer
    if res.answer:
        assert F.verify(res.path)
