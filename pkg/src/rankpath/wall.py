"""Walls: elementary and subdivided walls in a host graph, layers, compasses,
subwalls, discovery and packings.

Positions are (x, y) with 1 <= x <= 2h, 1 <= y <= h.  A vertical edge
(x, y)-(x, y+1) is present iff (x + y) % 2 == parity; the two resulting
degree-one corners are dropped.  The textbook convention is parity 0.  A
subwall at offset (x0, y0) has local parity (parity - x0 - y0) % 2.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from math import isqrt

from .graph import Graph, TreeDecomposition, bfs_order, treewidth_decompose, Incomplete, Exceeds


class WallError(ValueError):
    pass


class PackingError(WallError):
    pass


def ceil_sqrt(n: int) -> int:
    s = isqrt(n)
    return s if s * s == n else s + 1


def elementary_positions(h: int, parity: int = 0) -> list:
    if parity == 0:
        drop = {(1, h), (2 * h, 1)}
    else:
        drop = {(1, 1), (2 * h, h)}
    return [(x, y) for y in range(1, h + 1) for x in range(1, 2 * h + 1) if (x, y) not in drop]


def elementary_edges(h: int, parity: int = 0) -> list:
    pos = set(elementary_positions(h, parity))
    out = []
    for (x, y) in sorted(pos):
        if (x + 1, y) in pos:
            out.append(((x, y), (x + 1, y)))
        if (x + y) % 2 == parity and (x, y + 1) in pos:
            out.append(((x, y), (x, y + 1)))
    return sorted(out)


def _ekey(a, b):
    return (a, b) if a < b else (b, a)


def perimeter_positions(h: int, parity: int = 0) -> list:
    """Boundary cycle of the elementary wall, counterclockwise from the lowest
    leftmost position."""
    pos = set(elementary_positions(h, parity))
    adj = {p: set() for p in pos}
    for a, b in elementary_edges(h, parity):
        adj[a].add(b)
        adj[b].add(a)
    start = min(pos, key=lambda p: (p[1], p[0]))
    cycle = [start]
    cur, d = start, (1, 0)
    while True:
        for nd in ((d[1], -d[0]), d, (-d[1], d[0]), (-d[0], -d[1])):
            nxt = (cur[0] + nd[0], cur[1] + nd[1])
            if nxt in adj[cur]:
                break
        cur, d = nxt, nd
        if cur == start:
            break
        cycle.append(cur)
    return cycle


@dataclass
class WallModel:
    height: int
    branch: dict  # position -> host vertex
    paths: dict = field(default_factory=dict)  # edge key -> tuple of internal host vertices
    parity: int = 0

    def positions(self):
        return elementary_positions(self.height, self.parity)

    def edges(self):
        return elementary_edges(self.height, self.parity)

    def internal(self, a, b) -> tuple:
        return tuple(self.paths.get(_ekey(a, b), ()))

    def edge_path(self, a, b) -> list:
        """Host path from branch(a) to branch(b)."""
        mid = list(self.paths.get(_ekey(a, b), ()))
        if a > b:
            mid.reverse()
        return [self.branch[a]] + mid + [self.branch[b]]

    def vertices(self) -> set:
        out = set(self.branch.values())
        for a, b in self.edges():
            out.update(self.internal(a, b))
        return out

    def host_edges(self) -> set:
        out = set()
        for a, b in self.edges():
            p = self.edge_path(a, b)
            for u, v in zip(p, p[1:]):
                out.add(_ekey(u, v))
        return out

    @property
    def layer_count(self) -> int:
        return self.height // 2

    def subwall(self, x0: int, y0: int, h: int) -> "WallModel":
        if h < 3 or h % 2 == 0:
            raise WallError("subwall height must be odd and at least 3")
        par = (self.parity - x0 - y0) % 2
        branch = {}
        for (x, y) in elementary_positions(h, par):
            gp = (x + x0, y + y0)
            if gp not in self.branch:
                raise WallError(f"subwall position {gp} outside the wall")
            branch[(x, y)] = self.branch[gp]
        paths = {}
        for a, b in elementary_edges(h, par):
            ga, gb = (a[0] + x0, a[1] + y0), (b[0] + x0, b[1] + y0)
            if (gb[0] - ga[0], gb[1] - ga[1]) == (0, 1) and (ga[0] + ga[1]) % 2 != self.parity:
                raise WallError("subwall edge missing in parent")
            mid = self.internal(ga, gb)
            if mid:
                paths[(a, b)] = mid
        return WallModel(h, branch, paths, par)

    def inner(self, i: int) -> "WallModel":
        """The wall whose perimeter is the i-th layer (i = 1 is the wall itself)."""
        if i == 1:
            return self
        if not 1 <= i <= self.layer_count:
            raise WallError(f"no layer {i}")
        return self.subwall(2 * (i - 1), i - 1, self.height - 2 * (i - 1))

    def perimeter_cycle(self) -> list:
        ring = perimeter_positions(self.height, self.parity)
        out = []
        for a, b in zip(ring, ring[1:] + ring[:1]):
            out.extend(self.edge_path(a, b)[:-1])
        return out

    def layers(self) -> list:
        return [self.inner(i).perimeter_cycle() for i in range(1, self.layer_count + 1)]

    def interior_branch(self) -> list:
        ring = set(perimeter_positions(self.height, self.parity))
        return sorted(self.branch[p] for p in self.positions() if p not in ring)


# ---------------------------------------------------------------------------
# construction


def build_elementary_wall(r: int, parity: int = 0, first_id: int = 0):
    if r < 3 or r % 2 == 0:
        raise WallError("wall height must be odd and at least 3")
    pos = elementary_positions(r, parity)
    ids = {p: first_id + i for i, p in enumerate(pos)}
    G = Graph(ids.values(), [(ids[a], ids[b]) for a, b in elementary_edges(r, parity)])
    return G, WallModel(r, ids, {}, parity)


def subdivide_wall(G: Graph, W: WallModel, scheme=None, seed: int = 0, max_extra: int = 2):
    """Replace wall edges by longer paths.

    ``scheme`` maps elementary edges to a count of new vertices; when None a
    seeded random scheme with up to ``max_extra`` vertices per edge is used.
    """
    if scheme is None:
        rng = random.Random(seed)
        scheme = {e: rng.randint(0, max_extra) for e in W.edges()}
    nxt = max(G.vertices, default=-1) + 1
    new_paths = dict(W.paths)
    verts = list(G.vertices)
    edges = set(G.edges())
    for a, b in W.edges():
        extra = scheme.get((a, b), scheme.get((b, a), 0))
        if not extra:
            continue
        p = W.edge_path(a, b)
        # subdivide the last host edge of the current path
        u, v = p[-2], p[-1]
        edges.discard(_ekey(u, v))
        chain = list(range(nxt, nxt + extra))
        nxt += extra
        verts.extend(chain)
        seq = [u] + chain + [v]
        for x, y in zip(seq, seq[1:]):
            edges.add(_ekey(x, y))
        new_paths[_ekey(a, b)] = tuple(p[1:-1]) + tuple(chain)
    return Graph(verts, edges), WallModel(W.height, dict(W.branch), new_paths, W.parity)


# ---------------------------------------------------------------------------
# validation, compass, rank


def validate_wall(G: Graph, W: WallModel) -> list:
    problems = []
    h = W.height
    if h < 3 or h % 2 == 0:
        return ["height must be odd and at least 3"]
    pos = W.positions()
    if set(W.branch) != set(pos):
        problems.append("branch map does not match elementary positions")
        return problems
    ids = list(W.branch.values())
    if len(set(ids)) != len(ids):
        problems.append("branch map not injective")
    for v in ids:
        if v not in G:
            problems.append(f"branch vertex {v} not in host")
    if problems:
        return problems
    branch_set = set(ids)
    used = set()
    for key in W.paths:
        if key not in set(W.edges()):
            problems.append(f"path given for non-edge {key}")
    for a, b in W.edges():
        mid = W.internal(a, b)
        for v in mid:
            if v in branch_set:
                problems.append(f"subdivision vertex {v} is a branch vertex")
            if v in used:
                problems.append(f"subdivision vertex {v} reused")
            if v not in G:
                problems.append(f"subdivision vertex {v} not in host")
            used.add(v)
        p = W.edge_path(a, b)
        if any(not G.has_edge(u, v) for u, v in zip(p, p[1:])):
            problems.append(f"edge path missing for {a}-{b}")
    for i, cyc in enumerate(_safe_layers(W), start=1):
        if len(set(cyc)) != len(cyc) or any(not G.has_edge(u, v) for u, v in zip(cyc, cyc[1:] + cyc[:1])):
            problems.append("perimeter not a cycle" if i == 1 else f"layer {i} not a cycle")
    layers = _safe_layers(W)
    if len(layers) != h // 2:
        problems.append("wrong layer count")
    seen = set()
    for cyc in layers:
        if seen & set(cyc):
            problems.append("layers not disjoint")
        seen |= set(cyc)
    return problems


def _safe_layers(W):
    try:
        return W.layers()
    except (WallError, KeyError):
        return []


def compass_of(G: Graph, W: WallModel) -> set:
    perim = set(W.perimeter_cycle())
    inner = W.vertices() - perim
    if not inner:
        return perim
    keep = set(G.vertices) - perim
    start = min(inner)
    comp = set(bfs_order(G, start, keep))
    if not inner <= comp:
        raise WallError("wall interior is not connected off the perimeter")
    return perim | comp


def rho(F, W: WallModel, G: Graph | None = None) -> int:
    G = F.graph if G is None else G
    return F.matroid.rank(compass_of(G, W))


# ---------------------------------------------------------------------------
# discovery


def _grid_coordinates(G: Graph):
    """Coordinates if G is an a x b grid graph (a, b >= 2), else None."""
    n = G.n
    corners = [v for v in G.vertices if G.degree(v) == 2]
    if len(corners) != 4 or any(G.degree(v) not in (2, 3, 4) for v in G.vertices):
        return None
    c0 = corners[0]
    dist0 = _bfs_dist(G, c0)
    if len(dist0) != n:
        return None
    others = sorted(corners[1:], key=lambda v: (dist0[v], v))
    cA = others[0]
    dA = dist0[cA]
    distA = _bfs_dist(G, cA)
    a = dA + 1
    if n % a:
        return None
    b = n // a
    coords = {}
    for v in G.vertices:
        twice = dist0[v] - distA[v] + dA
        if twice % 2:
            return None
        x = twice // 2
        y = dist0[v] - x
        coords[v] = (x, y)
    if len(set(coords.values())) != n:
        return None
    if any(not (0 <= x < a and 0 <= y < b) for x, y in coords.values()):
        return None
    for u, v in G.edges():
        (x1, y1), (x2, y2) = coords[u], coords[v]
        if abs(x1 - x2) + abs(y1 - y2) != 1:
            return None
    if G.m != 2 * a * b - a - b:
        return None
    return coords, a, b


def _bfs_dist(G, src):
    dist = {src: 0}
    dq = deque([src])
    while dq:
        u = dq.popleft()
        for w in G.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                dq.append(w)
    return dist


def wall_in_grid(G: Graph, q: int):
    got = _grid_coordinates(G)
    if got is None:
        return None
    coords, a, b = got
    inv = {c: v for v, c in coords.items()}
    best = None
    for swap in (False, True):
        wide, tall = (a, b) if not swap else (b, a)
        h = min(wide // 2, tall)
        if h % 2 == 0:
            h -= 1
        if h >= 3 and (best is None or h > best[0]):
            best = (h, swap)
    if best is None or best[0] < q:
        return None
    h, swap = best
    branch = {}
    for (x, y) in elementary_positions(h, 0):
        c = (x - 1, y - 1) if not swap else (y - 1, x - 1)
        branch[(x, y)] = inv[c]
    return WallModel(h, branch, {}, 0)


def find_wall(G: Graph, q: int, certificate: WallModel | None = None):
    """A validated wall of height >= q, a decomposition of width <= 9q, or
    Incomplete.

    A certificate that no longer validates (after deletions) is cut down to
    its largest intact subwall before anything else is tried.
    """
    if certificate is not None:
        if certificate.height >= q and not validate_wall(G, certificate):
            return certificate
        W = largest_intact_subwall(G, certificate, q)
        if W is not None:
            return W
    W = wall_in_grid(G, q)
    if W is not None and not validate_wall(G, W):
        return W
    td = treewidth_decompose(G, max((9 * q - 1) // 2, 1))
    if isinstance(td, TreeDecomposition) and td.width <= 9 * q:
        return td
    if isinstance(td, Exceeds):
        return Incomplete("treewidth exceeds bound but no wall was found")
    return Incomplete("no wall certificate and no decomposition")


def largest_intact_subwall(G: Graph, W: WallModel, min_height: int = 3):
    """Largest subwall of a (possibly damaged) certificate that still
    validates in G; ties broken by offset (top row first, then left)."""
    for h in range(W.height, max(min_height, 3) - 1, -2):
        for y0 in range(W.height - h, -1, -1):
            for x0 in range(0, 2 * (W.height - h) + 1):
                try:
                    S = W.subwall(x0, y0, h)
                except WallError:
                    continue
                if not validate_wall(G, S):
                    return S
    return None


# ---------------------------------------------------------------------------
# packings


@dataclass
class WallPacking:
    z: int
    r: int
    q: int
    walls: list  # walls[0] is W0


def pack_height(z: int, r: int, q: int) -> int:
    """Smallest height that fits r subwalls of height q inside W^(z+1)."""
    return 2 * z - 1 + ceil_sqrt(r) * (q + 1)


def pack_height_stated(z: int, r: int, q: int) -> int:
    return z + ceil_sqrt(r) * (q + 1)


def grid_packing(W: WallModel, z: int, r: int, q: int) -> WallPacking:
    if z % 2 == 0 or q % 2 == 0 or q < 3 or r < 1:
        raise PackingError("z and q must be odd, q >= 3, r >= 1")
    need = pack_height(z, r, q)
    if W.height < need:
        raise PackingError(f"height {W.height} below packing bound {need}")
    side = ceil_sqrt(r)
    base_x, base_y = 2 * z, z  # offset of W^(z+1)
    slots = []
    for row in range(side - 1, -1, -1):
        for col in range(side):
            slots.append((base_x + col * 2 * (q + 1), base_y + row * (q + 1)))
    walls = [W] + [W.subwall(x0, y0, q) for x0, y0 in slots[:r]]
    return WallPacking(z, r, q, walls)


def validate_packing(G: Graph, P: WallPacking) -> list:
    problems = []
    W0 = P.walls[0]
    if W0.height % 2 == 0 or W0.height < 2 * P.z:
        problems.append("W0 height too small")
    if validate_wall(G, W0):
        problems.append("W0 invalid")
        return problems
    try:
        core = W0.inner(P.z + 1).vertices()
    except WallError:
        return problems + ["W0 has no layer z+1"]
    comps = []
    for i, Wi in enumerate(P.walls[1:], start=1):
        if Wi.height < P.q:
            problems.append(f"W{i} shorter than q")
        if validate_wall(G, Wi):
            problems.append(f"W{i} invalid")
            continue
        if not Wi.vertices() <= core:
            problems.append(f"W{i} leaves W0^(z+1)")
        comps.append(compass_of(G, Wi))
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            if comps[i] & comps[j]:
                problems.append(f"compasses of W{i + 1} and W{j + 1} intersect")
    if len(P.walls) != P.r + 1:
        problems.append("wrong number of walls")
    return problems


def f_bound(k: int, z: int, r: int, q: int) -> int:
    """Height recursion for equal-rank packings, as stated."""
    v = z + ceil_sqrt(r) * (q + 1)
    for _ in range(k - 1):
        v = z + ceil_sqrt(r) * (v + 1)
    return v


def f_bound_fit(k: int, z: int, r: int, q: int) -> int:
    """Same recursion with the packing bound that actually fits."""
    v = pack_height(z, r, q)
    for _ in range(k - 1):
        v = pack_height(z, r, v)
    return v


def _largest_tile(height, z, r):
    w = (height - 2 * z + 1) // ceil_sqrt(r) - 1
    if w % 2 == 0:
        w -= 1
    return w


def equal_rank_packing(F, W: WallModel, k: int, z: int, x: int, q: int, G: Graph | None = None) -> WallPacking:
    """(z, x, q)-packing with every inner compass of the same rank as W0.

    Zooms into the first subwall of smaller rank until ranks agree; tiles are
    taken as tall as the current wall allows, which leaves room for the final
    zoom when a subwall has rank zero.
    """
    G = F.graph if G is None else G
    if W.height < f_bound_fit(k, z, x, q):
        raise PackingError(f"height {W.height} below {f_bound_fit(k, z, x, q)}")
    if rho(F, W, G) > k:
        raise PackingError("compass rank exceeds k")
    cur = W
    while True:
        w = _largest_tile(cur.height, z, x)
        if w < q:
            raise PackingError("rank drop with no room left to zoom")
        P = grid_packing(cur, z, x, w)
        r0 = rho(F, cur, G)
        low = [i for i in range(1, len(P.walls)) if rho(F, P.walls[i], G) < r0]
        if not low:
            return P
        cur = P.walls[low[0]]


def central_vertex(W: WallModel) -> int:
    """Smallest-id interior branch vertex of the innermost 3-subwall."""
    inner = W.inner(W.layer_count)
    return min(inner.interior_branch())
