"""Irrelevant-vertex reduction on walls: find a rank-k path through a packing
of subwalls, or name a vertex whose deletion keeps the answer."""

from __future__ import annotations

from dataclasses import dataclass, field

from .framework import Framework
from .graph import (
    Graph,
    Incomplete,
    TreeDecomposition,
    biconnected_split,
    chain_blocks,
    shortest_path,
    thread_chain,
)
from .matroid import extend_independent
from .oracle import SearchBudget, exact_search
from .wall import (
    PackingError,
    WallError,
    WallModel,
    ceil_sqrt,
    central_vertex,
    compass_of,
    equal_rank_packing,
    f_bound,
    f_bound_fit,
    find_wall,
    grid_packing,
    pack_height,
)


def h_bound(k: int) -> int:
    return 2 * k * (k + 2) + 2 * k + 1


@dataclass(frozen=True)
class ReductionConstants:
    mode: str
    b: int
    x: int
    z: int
    q: int
    r: int
    g: int

    def describe(self) -> str:
        return f"{self.mode} b={self.b} x={self.x} z={self.z} q={self.q} r={self.r} g={self.g}"


DEFAULT_RELAXED_G = 4


def constants_for(k: int, mode: str = "paper") -> ReductionConstants:
    """Evaluate the constant chain.

    ``paper`` follows the stated formulas; ``relaxed`` picks the smallest
    values for which the packing steps fit; ``relaxed:b,x,z,q,r[,g]`` takes
    explicit values.
    """
    if mode == "paper":
        if k <= 1:
            raise ValueError("paper constants need k >= 2")
        b = h_bound(k)
        x = k + 1
        z = (k + 1) * b
        q = f_bound(k - 1, z, x, 3)
        r = 1 + ceil_sqrt(k) * (q + 1)
        return ReductionConstants("paper", b, x, z, q, r, 36 * (r + 1))
    if mode == "relaxed":
        kk = max(k, 2)
        q = f_bound_fit(kk - 1, 1, 1, 3)
        r = pack_height(1, kk, q)
        return ReductionConstants("relaxed", h_bound(kk), 1, 1, q, r, DEFAULT_RELAXED_G)
    if mode.startswith("relaxed:"):
        try:
            vals = [int(v) for v in mode.split(":", 1)[1].split(",")]
        except ValueError:
            raise ValueError(f"bad constants {mode!r}") from None
        if len(vals) not in (5, 6):
            raise ValueError("relaxed constants are b,x,z,q,r[,g]")
        b, x, z, q, r = vals[:5]
        g = vals[5] if len(vals) == 6 else 36 * (r + 1)
        for name, v in (("b", b), ("z", z), ("q", q), ("r", r)):
            if v < 1 or v % 2 == 0:
                raise ValueError(f"{name} must be odd and positive")
        if x < 1 or q < 3 or r < 3 or g < 0:
            raise ValueError("x >= 1, q >= 3, r >= 3, g >= 0 required")
        return ReductionConstants("relaxed", b, x, z, q, r, g)
    raise ValueError(f"unknown constants mode {mode!r}")


@dataclass
class PathFound:
    path: list
    independent_set: list


@dataclass
class Irrelevant:
    vertex: int
    note: str = ""


@dataclass
class BelowThreshold:
    decomposition: TreeDecomposition


def _subwall_avoiding(G: Graph, W: WallModel, height: int, avoid) -> WallModel | None:
    avoid = set(avoid)
    if not compass_of(G, W) & avoid:
        return W
    for y0 in range(W.height - height, -1, -1):
        for x0 in range(0, 2 * (W.height - height) + 1):
            try:
                S = W.subwall(x0, y0, height)
            except WallError:
                continue
            if not compass_of(G, S) & avoid:
                return S
    return None


def route_through(F: Framework, targets, budget: int = 20000):
    """Simple s-t path visiting ``targets``; greedy with a block-chain finish,
    exact search as the fallback.  None if both fail."""
    G, s, t = F.graph, F.s, F.t
    remaining = list(targets)
    prefix = [s]
    while True:
        u = prefix[-1]
        chain = chain_blocks(G, prefix[:-1], u, t)
        if chain is None:
            break
        picks = _one_per_block(chain, remaining)
        if picks is not None:
            path = thread_chain(prefix, chain, picks)
            if path is not None and F.verify(path):
                return path
            break
        if not remaining:
            break
        nxt = remaining[0]
        allowed = set(G.vertices) - set(prefix[:-1]) - set(remaining[1:]) - {t}
        seg = shortest_path(G, u, nxt, allowed)
        if seg is None:
            break
        prefix += seg[1:]
        remaining.pop(0)
    try:
        res = exact_search(F, budget)
    except SearchBudget:
        return None
    return res.path if res.answer else None


def _one_per_block(chain, targets):
    """Picks mapping chain index -> target when every target is a chain
    vertex or sits alone in its block."""
    picks = {}
    forced = set()
    for vs, a, b, _ in chain:
        forced |= {a, b}
    for v in targets:
        if v in forced:
            continue
        idx = next((i for i, c in enumerate(chain) if v in c[0]), None)
        if idx is None or idx in picks or chain[idx][3].n <= 2:
            return None
        picks[idx] = v
    return picks


def reduce_once(F: Framework, consts: ReductionConstants, wall: WallModel | None = None):
    G, M, s, t, k = F.graph, F.matroid, F.s, F.t, F.k

    split = biconnected_split(G, s, t)
    on_chain = set()
    for g, _, _ in split.parts:
        on_chain |= set(g.vertices)
    off = [v for v in G.vertices if v not in on_chain and v not in (s, t)]
    if off:
        return Irrelevant(off[0], "outside the s-t block chain")

    found = find_wall(G, consts.r, wall)
    if isinstance(found, TreeDecomposition):
        return BelowThreshold(found)
    if isinstance(found, Incomplete):
        return found
    W0 = _subwall_avoiding(G, found, consts.r, (s, t))
    if W0 is None:
        return Incomplete("no subwall with compass avoiding the terminals")
    try:
        P = grid_packing(W0, 1, k, consts.q)
    except PackingError as exc:
        return Incomplete(f"packing: {exc}")
    compasses = [compass_of(G, Wi) for Wi in P.walls[1:]]
    ranks = [M.rank(C) for C in compasses]

    if all(rk >= k for rk in ranks):
        S = []
        for C in compasses:
            v = extend_independent(M, S, C)
            if v is None:  # pragma: no cover - augmentation always succeeds here
                return Incomplete("augmentation failed")
            S.append(v)
        path = route_through(F, S)
        if path is None:
            return Incomplete("could not route through the packing")
        ind = S if set(S) <= set(path) else F.witness_set(path)
        if not F.verify(path, ind):  # pragma: no cover
            raise AssertionError("constructed path fails verification")
        return PathFound(path, sorted(ind))

    low = next(i for i, rk in enumerate(ranks) if rk < k)
    try:
        Q = equal_rank_packing(F, P.walls[low + 1], k - 1, consts.z, consts.x, 3, G)
    except PackingError as exc:
        return Incomplete(f"equal-rank packing: {exc}")
    v = central_vertex(Q.walls[1])
    return Irrelevant(v, f"centre of a subwall of packed wall {low + 1}")


@dataclass
class LoopResult:
    outcome: object  # PathFound | BelowThreshold | Incomplete
    framework: Framework
    deletions: list = field(default_factory=list)
    log: list = field(default_factory=list)


def reduce_loop(F: Framework, consts: ReductionConstants, wall: WallModel | None = None,
                check=None, max_steps: int | None = None) -> LoopResult:
    """Apply reduce_once until it stops naming deletable vertices.

    ``check(before, after, v)`` is called on every deletion when given.
    """
    deletions, log = [], []
    steps = 0
    while True:
        out = reduce_once(F, consts, wall)
        if not isinstance(out, Irrelevant):
            log.append(f"stop: {type(out).__name__}")
            return LoopResult(out, F, deletions, log)
        v = out.vertex
        G2 = F.delete(v)
        if check is not None:
            check(F, G2, v)
        log.append(f"delete {v}: {out.note}")
        deletions.append(v)
        F = G2
        steps += 1
        if max_steps is not None and steps >= max_steps:
            return LoopResult(Incomplete("step limit reached"), F, deletions, log)
