"""Dynamic programming over a nice tree decomposition with s,t in every bag.

A table cell is keyed by (semi-matching, i).  The semi-matching is a sorted
tuple of sorted tuples: pairs (a, b) with a < b and singletons (v,).  Its
covered set is the set X of bag vertices that the partial forest touches.
Each cell stores sets S of i forgotten vertices, independent in the matroid,
pruned to a representative subfamily.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .framework import Framework
from .graph import Graph, NiceTreeDecomposition, is_path, make_nice, treewidth_decompose, TreeDecomposition
from .matroid import representative_family, truncated_for


# ---------------------------------------------------------------------------
# semi-matchings


def sm_canon(elements) -> tuple:
    return tuple(sorted(tuple(sorted(e)) for e in elements))


def sm_cover(m) -> set:
    return {v for e in m for v in e}


def sm_pairs(m):
    return [e for e in m if len(e) == 2]


def _degrees(pairs):
    deg = {}
    for a, b in pairs:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    return deg


def _find(par, x):
    while par.setdefault(x, x) != x:
        par[x] = par[par[x]]
        x = par[x]
    return x


def _acyclic(pairs) -> bool:
    par = {}
    for a, b in pairs:
        ra, rb = _find(par, a), _find(par, b)
        if ra == rb:
            return False
        par[ra] = rb
    return True


def sm_valid(m) -> bool:
    pairs = sm_pairs(m)
    if len(set(pairs)) != len(pairs):
        return False
    if any(len(e) not in (1, 2) or (len(e) == 2 and e[0] == e[1]) for e in m):
        return False
    deg = _degrees(pairs)
    if any(d > 2 for d in deg.values()):
        return False
    singles = [e[0] for e in m if len(e) == 1]
    if len(set(singles)) != len(singles) or any(v in deg for v in singles):
        return False
    return _acyclic(pairs)


def sm_from_pairs(X, pairs) -> tuple:
    deg = _degrees(pairs)
    return sm_canon(list(pairs) + [(v,) for v in X if v not in deg])


def sm_rem(m, v) -> tuple:
    """(m minus elements at v) plus singletons for partners left uncovered."""
    if v not in sm_cover(m):
        raise ValueError(f"{v} not covered")
    at_v = [e for e in m if v in e]
    rest = [e for e in m if v not in e]
    covered = sm_cover(rest)
    extra = []
    for e in at_v:
        if len(e) == 2:
            u = e[0] if e[1] == v else e[1]
            if u not in covered and (u,) not in extra:
                extra.append((u,))
    return sm_canon(rest + extra)


def sm_merge(m, v):
    """Forget an internal vertex: pairs {a,v},{v,b} become {a,b}.  None if v
    is not internal."""
    at_v = [e for e in m if v in e]
    if len(at_v) != 2 or any(len(e) != 2 for e in at_v):
        return None
    a = at_v[0][0] if at_v[0][1] == v else at_v[0][1]
    b = at_v[1][0] if at_v[1][1] == v else at_v[1][1]
    rest = [e for e in m if v not in e]
    return sm_canon(rest + [(a, b)])


def sm_forget_predecessors(m, v) -> list:
    """All m' over U(m)+v in which v is internal and merging v gives m."""
    if v in sm_cover(m):
        return []
    out = []
    for e in m:
        if len(e) == 2:
            a, b = e
            rest = [f for f in m if f != e]
            cand = sm_canon(rest + [(a, v), (v, b)])
            if sm_valid(cand) and sm_merge(cand, v) == sm_canon(m):
                out.append(cand)
    return sorted(set(out))


def sm_xi(m) -> list:
    """All ordered bipartitions of the element set."""
    els = list(m)
    out = []
    for mask in range(1 << len(els)):
        left = tuple(e for i, e in enumerate(els) if mask >> i & 1)
        right = tuple(e for i, e in enumerate(els) if not mask >> i & 1)
        out.append((left, right))
    return out


def sig_of_forest(G: Graph, X, vertices, edges):
    """Signature of a linear forest with respect to the bag X, or None.

    Components avoiding X are ignored; a component touching X must have both
    path ends in X.
    """
    X = set(X)
    vertices = set(vertices)
    adj = {v: [] for v in vertices}
    for a, b in edges:
        if a not in vertices or b not in vertices or not G.has_edge(a, b):
            return None
        adj[a].append(b)
        adj[b].append(a)
    if any(len(n) > 2 for n in adj.values()):
        return None
    if not _acyclic([tuple(sorted(e)) for e in edges]) or len({tuple(sorted(e)) for e in edges}) != len(edges):
        return None
    seen = set()
    out = []
    for v in sorted(vertices):
        if v in seen:
            continue
        comp = []
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if not X & set(comp):
            continue
        if len(comp) == 1:
            out.append((v,))
            continue
        ends = [x for x in comp if len(adj[x]) == 1]
        if any(e not in X for e in ends):
            return None
        start = min(ends)
        walk = [start]
        prev = None
        while len(walk) < len(comp):
            nxt = [y for y in adj[walk[-1]] if y != prev][0]
            prev = walk[-1]
            walk.append(nxt)
        marks = [x for x in walk if x in X]
        for a, b in zip(marks, marks[1:]):
            out.append((a, b))
    return sm_canon(out)


# ---------------------------------------------------------------------------
# tables


@dataclass
class DPConfig:
    uniform_k_rep: bool = False
    paper_literal_forget: bool = False
    paper_literal_root: bool = False
    prune: bool = True
    randomized: bool = False
    seed: int = 0


@dataclass
class DPResult:
    answer: bool
    path: list | None
    independent_set: list
    stats: list = field(default_factory=list)  # (node, kind, keys, entries)
    verified: bool = True


class _Pruner:
    def __init__(self, F: Framework, cfg: DPConfig):
        self.M = F.matroid
        self.k = F.k
        self.cfg = cfg
        self.trunc = {}

    def _mt(self, rank):
        if rank not in self.trunc:
            self.trunc[rank] = truncated_for(self.M, rank, self.cfg.randomized, self.cfg.seed)
        return self.trunc[rank]

    def prune(self, i, entries):
        """entries: list of (S, prov) with distinct S; returns the kept ones."""
        if not self.cfg.prune or len(entries) <= 1 or self.k == 0:
            return entries
        if self.cfg.uniform_k_rep:
            rank = min(i + self.k, self.M.rank_total)
            q = rank - i
        else:
            rank = min(self.k, self.M.rank_total)
            q = rank - i
        if len(entries) <= comb(i + q, i):
            return entries
        Mt = self._mt(rank)
        if self.cfg.randomized and (Mt.rank_total < rank or not all(Mt.is_independent(S) for S, _ in entries)):
            return entries  # unlucky sample: keep everything rather than guess
        keep = set(representative_family(Mt, [S for S, _ in entries], i, q))
        return [e for e in entries if e[0] in keep]


def _add(cell_map, key, S, prov):
    cell = cell_map.setdefault(key, {})
    if S not in cell:
        cell[S] = prov


def _finish(cell_map, pruner):
    out = {}
    for key in sorted(cell_map):
        entries = sorted(cell_map[key].items())
        out[key] = pruner.prune(key[1], entries)
    return out


def dp_leaf(G: Graph, s, t):
    cells = {}
    _add(cells, (sm_canon([(s,), (t,)]), 0), (), ("leaf", None))
    if G.has_edge(s, t):
        _add(cells, (sm_canon([(s, t)]), 0), (), ("leaf", (s, t)))
    return cells


def _attach_options(m, v, bag_nbrs, terminals):
    """Ways to add v to m with edges to at most two covered neighbours."""
    pairs = sm_pairs(m)
    deg = _degrees(pairs)
    cover = sm_cover(m)
    cands = [u for u in sorted(bag_nbrs) if u in cover and deg.get(u, 0) < (1 if u in terminals else 2)]
    par = {}
    for a, b in pairs:
        ra, rb = _find(par, a), _find(par, b)
        par[ra] = rb
    opts = [()]
    opts += [(u,) for u in cands]
    for a, b in combinations(cands, 2):
        if _find(par, a) != _find(par, b):
            opts.append((a, b))
    out = []
    for N in opts:
        if v in terminals and len(N) > 1:
            continue
        new_pairs = pairs + [tuple(sorted((u, v))) for u in N]
        X = cover | {v}
        out.append((N, sm_from_pairs(X, new_pairs)))
    return out


def dp_insert(child, v, G: Graph, bag, terminals, pruner):
    nbrs = [u for u in G.neighbors(v) if u in bag]
    cells = {}
    for key in child:
        m, i = key
        for idx, (S, _) in enumerate(child[key]):
            _add(cells, key, S, ("ins", key, idx, None))
            for N, m2 in _attach_options(m, v, nbrs, terminals):
                _add(cells, (m2, i), S, ("ins", key, idx, N))
    return _finish(cells, pruner)


def dp_forget(child, v, M, k, pruner, literal=False):
    cells = {}
    for key in child:
        m, i = key
        cover = sm_cover(m)
        for idx, (S, _) in enumerate(child[key]):
            if v not in cover:
                _add(cells, key, S, ("fgt", key, idx, False))
                continue
            if literal:
                m2 = sm_rem(m, v)
            else:
                m2 = sm_merge(m, v)
                if m2 is None:
                    continue
            _add(cells, (m2, i), S, ("fgt", key, idx, False))
            if i + 1 <= k:
                S2 = tuple(sorted(S + (v,)))
                if M.is_independent(S2):
                    _add(cells, (m2, i + 1), S2, ("fgt", key, idx, True))
    return _finish(cells, pruner)


def _join_sm(m1, m2, terminals):
    p1, p2 = sm_pairs(m1), sm_pairs(m2)
    if set(p1) & set(p2):
        return None
    pairs = p1 + p2
    deg = _degrees(pairs)
    if any(d > (1 if v in terminals else 2) for v, d in deg.items()):
        return None
    if not _acyclic(pairs):
        return None
    return sm_from_pairs(sm_cover(m1) | sm_cover(m2), pairs)


def dp_join(left, right, M, k, terminals, pruner):
    cells = {}
    for kl in left:
        for kr in right:
            i = kl[1] + kr[1]
            if i > k:
                continue
            m = _join_sm(kl[0], kr[0], terminals)
            if m is None:
                continue
            for a, (S1, _) in enumerate(left[kl]):
                for b, (S2, _) in enumerate(right[kr]):
                    S = tuple(sorted(S1 + S2))
                    if i and not M.is_independent(S):
                        continue
                    _add(cells, (m, i), S, ("join", kl, a, kr, b))
    return _finish(cells, pruner)


def build_tables(F: Framework, ntd: NiceTreeDecomposition, cfg: DPConfig):
    G, M, k = F.graph, F.matroid, F.k
    terminals = {F.s, F.t}
    pruner = _Pruner(F, cfg)
    tables = {}
    stats = []
    for x in ntd.postorder():
        nd = ntd.nodes[x]
        if nd.kind == "leaf":
            tab = _finish(dp_leaf(G, F.s, F.t), pruner)
        elif nd.kind == "insert":
            tab = dp_insert(tables[nd.children[0]], nd.vertex, G, nd.bag, terminals, pruner)
        elif nd.kind == "forget":
            tab = dp_forget(tables[nd.children[0]], nd.vertex, M, k, pruner, cfg.paper_literal_forget)
        else:
            tab = dp_join(tables[nd.children[0]], tables[nd.children[1]], M, k, terminals, pruner)
        tables[x] = tab
        stats.append((x, nd.kind, len(tab), sum(len(v) for v in tab.values())))
    return tables, stats


def _root_choice(F: Framework, tab, literal_root: bool):
    s, t, k, M = F.s, F.t, F.k, F.matroid
    target = sm_canon([(s, t)])
    for key in sorted(tab):
        m, i = key
        if m != target:
            continue
        for idx, (S, _) in enumerate(tab[key]):
            if literal_root:
                if i == k:
                    return key, idx, ()
                continue
            need = max(0, k - i)
            if need > 2:
                continue
            for Z in combinations(sorted((s, t)), need):
                if M.is_independent(S + Z):
                    return key, idx, Z
    return None


def _collect_edges(ntd, tables, node, key, idx, edges, sets):
    stack = [(node, key, idx)]
    while stack:
        x, key, idx = stack.pop()
        nd = ntd.nodes[x]
        S, prov = tables[x][key][idx]
        kind = prov[0]
        if kind == "leaf":
            if prov[1] is not None:
                edges.append(prov[1])
        elif kind == "ins":
            _, ck, ci, N = prov
            if N is not None:
                edges.extend(tuple(sorted((u, nd.vertex))) for u in N)
            stack.append((nd.children[0], ck, ci))
        elif kind == "fgt":
            _, ck, ci, took = prov
            if took:
                sets.append(nd.vertex)
            stack.append((nd.children[0], ck, ci))
        else:
            _, kl, a, kr, b = prov
            stack.append((nd.children[0], kl, a))
            stack.append((nd.children[1], kr, b))


def _path_from_edges(s, t, edges):
    adj = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    path = [s]
    prev = None
    while path[-1] != t:
        nxt = [y for y in adj.get(path[-1], []) if y != prev]
        if len(nxt) != 1:
            return None
        prev = path[-1]
        path.append(nxt[0])
        if len(path) > len(edges) + 1:
            return None
    if len(path) != len(edges) + 1:
        return None
    return path


def solve_dp(F: Framework, ntd: NiceTreeDecomposition | None = None, cfg: DPConfig | None = None) -> DPResult:
    cfg = cfg or DPConfig()
    G = F.graph
    if F.k > F.matroid.rank_total:
        return DPResult(False, None, [])
    if ntd is None:
        ntd = nice_for(F)
    tables, stats = build_tables(F, ntd, cfg)
    choice = _root_choice(F, tables[ntd.root], cfg.paper_literal_root)
    if choice is None:
        return DPResult(False, None, [], stats)
    key, idx, Z = choice
    edges, sets = [], []
    _collect_edges(ntd, tables, ntd.root, key, idx, edges, sets)
    path = _path_from_edges(F.s, F.t, edges)
    S = tuple(tables[ntd.root][key][idx][0])
    ind = sorted(S + Z)
    ok = path is not None and is_path(G, path, F.s, F.t) and set(ind) <= set(path) \
        and F.matroid.is_independent(ind) and F.matroid.rank(path) >= F.k
    if not ok and not (cfg.paper_literal_forget or cfg.paper_literal_root):
        raise AssertionError("witness reconstruction failed verification")
    return DPResult(True, path if ok else None, ind if ok else [], stats, ok)


def nice_for(F: Framework) -> NiceTreeDecomposition:
    td = treewidth_decompose(F.graph, max(F.graph.n, 1))
    if not isinstance(td, TreeDecomposition):  # pragma: no cover - w = n always succeeds
        raise RuntimeError("no decomposition")
    return make_nice(td, F.graph, F.s, F.t)
