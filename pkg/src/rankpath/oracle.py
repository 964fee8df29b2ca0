"""Ground truth by exhaustive search, plus exhaustive checkers."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .framework import Framework
from .graph import Graph, bfs_order, chain_blocks, thread_chain
from .matroid import LinearMatroid


class OracleLimit(ValueError):
    pass


@dataclass
class OracleResult:
    answer: bool
    path: list | None
    rank: int
    independent_set: list


def _result(F: Framework, best, best_rank):
    if best is None:
        return OracleResult(False, None, -1, [])
    ind = F.witness_set(best)
    return OracleResult(best_rank >= F.k, best, best_rank, ind if best_rank >= F.k else [])


def brute_force(F: Framework, limit: int = 15) -> OracleResult:
    """Enumerate every simple s-t path (DFS, ascending ids) and keep the first
    path of maximum rank."""
    G = F.graph
    if G.n > limit:
        raise OracleLimit(f"{G.n} vertices exceeds oracle limit {limit}")
    M = F.matroid
    top = M.rank_total
    best = None
    best_rank = -1
    path = [F.s]
    on = {F.s}
    stack = [iter(G.neighbors(F.s))]
    if F.s == F.t:  # pragma: no cover - frameworks forbid it
        return _result(F, [F.s], M.rank([F.s]))
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on.discard(path.pop())
            continue
        if nxt in on:
            continue
        if nxt == F.t:
            cand = path + [nxt]
            r = M.rank(cand)
            if r > best_rank:
                best, best_rank = cand, r
                if r == top:
                    break
            continue
        path.append(nxt)
        on.add(nxt)
        stack.append(iter(G.neighbors(nxt)))
    return _result(F, best, best_rank)


def brute_force_subsets(F: Framework, limit: int = 15) -> bool:
    """Decision by the other reading: some simple path contains an independent
    k-subset."""
    G = F.graph
    if G.n > limit:
        raise OracleLimit("too large")
    M = F.matroid
    found = False

    def visit(path, on):
        nonlocal found
        if found:
            return
        u = path[-1]
        if u == F.t:
            for X in combinations(sorted(path), F.k):
                if M.is_independent(X):
                    found = True
                    return
            return
        for w in G.neighbors(u):
            if w not in on:
                on.add(w)
                path.append(w)
                visit(path, on)
                path.pop()
                on.discard(w)

    visit([F.s], {F.s})
    return found


def longest_path_bruteforce(G: Graph, s, t) -> int:
    """Most vertices on a simple s-t path, -1 if none."""
    best = -1

    def visit(u, on):
        nonlocal best
        if u == t:
            best = max(best, len(on))
            return
        for w in G.neighbors(u):
            if w not in on:
                on.add(w)
                visit(w, on)
                on.discard(w)

    visit(s, {s})
    return best


def colored_path_bruteforce(G: Graph, s, t, coloring) -> int:
    """Most distinct colours on a simple s-t path, -1 if none."""
    best = -1

    def visit(u, on):
        nonlocal best
        if u == t:
            best = max(best, len({coloring[v] for v in on}))
            return
        for w in G.neighbors(u):
            if w not in on:
                on.add(w)
                visit(w, on)
                on.discard(w)

    visit(s, {s})
    return best


def has_cycle_through(G: Graph, T) -> bool:
    """Some cycle of G contains every vertex of T."""
    T = set(T)
    return any(_cycle_search(G, u, v, T) for u, v in G.edges())


def _cycle_search(G, u, v, T):
    def visit(x, on):
        if x == u:
            return len(on) >= 3 and T <= on
        for w in G.neighbors(x):
            if w in on and w != u:
                continue
            if w == u and (x == v or w in on):
                continue
            on.add(w)
            if visit(w, on):
                return True
            on.discard(w)
        return False

    return visit(v, {v})


# ---------------------------------------------------------------------------
# exhaustive checks


def check_representative(M: LinearMatroid, family, subfamily, q: int, limit: int = 12) -> bool:
    if M.n > limit:
        raise OracleLimit("ground set too large")
    family = [tuple(X) for X in family]
    subfamily = [tuple(X) for X in subfamily]
    fam = {tuple(sorted(X)) for X in family}
    if any(tuple(sorted(X)) not in fam for X in subfamily):
        return False
    for size in range(q + 1):
        for Y in combinations(M.ground, size):
            Ys = set(Y)

            def fits(X):
                return not (Ys & set(X)) and M.is_independent(list(X) + list(Y))

            if any(fits(X) for X in family) and not any(fits(X) for X in subfamily):
                return False
    return True


def check_truncation(M: LinearMatroid, Mt: LinearMatroid, k: int, limit: int = 12) -> bool:
    if M.n > limit:
        raise OracleLimit("ground set too large")
    if tuple(M.ground) != tuple(Mt.ground):
        return False
    for size in range(k + 2):
        for X in combinations(M.ground, size):
            want = size <= k and M.is_independent(X)
            if Mt.is_independent(X) != want:
                return False
    return True


# ---------------------------------------------------------------------------
# exact search for large graphs with few nonloops


class SearchBudget(RuntimeError):
    pass


def exact_search(F: Framework, budget: int = 200000) -> OracleResult:
    """Decide the instance by a DFS over simple paths with sound pruning.

    Pruning: the unused part of a path must stay inside the blocks of the
    u-t chain after removing the prefix, so the rank of the prefix plus the
    nonloops in those blocks bounds what can still be collected.  A branch
    succeeds as soon as enough independent vertices can be picked at most
    one per chain block (plus forced cut vertices), since a 2-connected block
    has a path between its two chain vertices through any chosen vertex.
    Intended for graphs with few nonloop vertices; raises SearchBudget when
    the node budget runs out.
    """
    G, M, s, t, k = F.graph, F.matroid, F.s, F.t, F.k
    nonloop = set(M.nonloops())
    counter = [0]

    if t not in bfs_order(G, s):
        return OracleResult(False, None, -1, [])

    def attempt(prefix):
        counter[0] += 1
        if counter[0] > budget:
            raise SearchBudget("exact search budget exhausted")
        u = prefix[-1]
        chain = chain_blocks(G, prefix[:-1], u, t)
        if chain is None:
            return None
        region = set().union(*(c[0] for c in chain)) if chain else {u}
        have = list(prefix)
        if M.rank(have + [v for v in region if v in nonloop]) < k:
            return None
        done = _pick_per_block(F, prefix, chain, nonloop)
        if done is not None:
            return done
        # branch towards neighbours inside the region, nearest useful first
        dist = _distances_to(G, region - set(prefix), {v for v in region if v in nonloop} - set(prefix))
        nbrs = [w for w in G.neighbors(u) if w in region and w not in prefix]
        nbrs.sort(key=lambda w: (dist.get(w, 10**9), w))
        for w in nbrs:
            res = attempt(prefix + [w])
            if res is not None:
                return res
        return None

    path = attempt([s])
    if path is None:
        return OracleResult(False, None, -1, [])
    if not F.verify(path):  # pragma: no cover - construction bug guard
        raise AssertionError("exact search produced an invalid witness")
    return OracleResult(True, path, M.rank(path), F.witness_set(path))


def _distances_to(G, allowed, targets):
    from collections import deque

    dist = {x: 0 for x in targets if x in allowed}
    dq = deque(sorted(dist))
    while dq:
        x = dq.popleft()
        for w in G.neighbors(x):
            if w in allowed and w not in dist:
                dist[w] = dist[x] + 1
                dq.append(w)
    return dist


def _pick_per_block(F, prefix, chain, nonloop):
    M, k = F.matroid, F.k
    forced = list(prefix)
    for vs, a, b, _ in chain:
        forced += [a, b]
    forced = list(dict.fromkeys(forced))
    base = M.rank(forced)
    if base >= k:
        return thread_chain(prefix, chain, {})
    need = k - base
    options = []
    for idx, (vs, a, b, g) in enumerate(chain):
        if g.n <= 2:
            continue
        for v in sorted(vs - {a, b}):
            if v in nonloop:
                options.append((idx, v))
    for size in range(1, need + 1):
        for combo in combinations(options, size):
            blocks = [i for i, _ in combo]
            if len(set(blocks)) != len(blocks):
                continue
            if M.rank(forced + [v for _, v in combo]) >= k:
                return thread_chain(prefix, chain, dict(combo))
    return None
