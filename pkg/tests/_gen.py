"""Random instances shared by the test modules."""

import random
from itertools import combinations

from rankpath.exactalg import GF, QQ
from rankpath.framework import Framework
from rankpath.graph import Graph, is_planar
from rankpath.matroid import LinearMatroid

FIELDS = (GF(2), GF(101), QQ)


def random_planar_graph(rng, n, p=0.4):
    while True:
        G = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])
        if is_planar(G):
            return G


def random_matroid(rng, n, r, fld=None, density=0.7):
    fld = fld or rng.choice(FIELDS)
    rows = [[rng.randint(-1, 1) if rng.random() < density else 0 for _ in range(n)] for _ in range(r)]
    if fld is not QQ:
        rows = [[x % fld.p for x in row] for row in rows]
    return LinearMatroid.from_rows(fld, rows)


def random_framework(rng, n_max=9, k_max=4):
    n = rng.randint(2, n_max)
    G = random_planar_graph(rng, n)
    M = random_matroid(rng, n, rng.randint(1, 4))
    return Framework(G, M, 0, n - 1, rng.randint(0, k_max))


def random_dense_matroid(rng, n, r, fld):
    if fld is QQ:
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(r)]
    else:
        rows = [[rng.randrange(fld.p) for _ in range(n)] for _ in range(r)]
    return LinearMatroid.from_rows(fld, rows)
