"""Graphs, embeddings, blocks, disjoint paths and tree decompositions.

All traversals visit neighbours in ascending id order.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import networkx as nx


class GraphError(ValueError):
    pass


class Graph:
    """Simple undirected graph on integer ids; treat as immutable."""

    __slots__ = ("_adj", "_vertices")

    def __init__(self, vertices: Iterable = (), edges: Iterable = ()):
        adj = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at {u}")
            if u not in adj or v not in adj:
                raise GraphError(f"edge {u}-{v} has an unknown endpoint")
            adj[u].add(v)
            adj[v].add(u)
        self._vertices = tuple(sorted(adj))
        self._adj = {v: tuple(sorted(adj[v])) for v in self._vertices}

    @classmethod
    def from_edges(cls, n: int, edges):
        return cls(range(n), edges)

    @property
    def vertices(self) -> tuple:
        return self._vertices

    def __contains__(self, v):
        return v in self._adj

    def __len__(self):
        return len(self._vertices)

    def neighbors(self, v) -> tuple:
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_edge(self, u, v) -> bool:
        a = self._adj.get(u)
        return a is not None and v in a and v in self._adj

    def edges(self) -> list:
        return [(u, v) for u in self._vertices for v in self._adj[u] if u < v]

    @property
    def n(self):
        return len(self._vertices)

    @property
    def m(self):
        return sum(len(a) for a in self._adj.values()) // 2

    def subgraph(self, keep: Iterable) -> "Graph":
        keep = set(keep)
        return Graph(keep, [(u, v) for u, v in self.edges() if u in keep and v in keep])

    def delete_vertex(self, v) -> "Graph":
        if v not in self._adj:
            raise GraphError(f"unknown vertex {v}")
        return self.subgraph(u for u in self._vertices if u != v)

    def add_edges(self, edges) -> "Graph":
        return Graph(self._vertices, self.edges() + list(edges))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self._vertices)
        g.add_edges_from(self.edges())
        return g

    def __eq__(self, other):
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self):
        return hash(tuple(self._adj.items()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def bfs_order(G: Graph, start, allowed=None) -> dict:
    """Parent map of a BFS from ``start`` inside ``allowed`` (all if None)."""
    parent = {start: None}
    dq = deque([start])
    while dq:
        u = dq.popleft()
        for w in G.neighbors(u):
            if w not in parent and (allowed is None or w in allowed):
                parent[w] = u
                dq.append(w)
    return parent


def shortest_path(G: Graph, a, b, allowed=None):
    if allowed is not None and (a not in allowed or b not in allowed):
        return None
    par = bfs_order(G, a, allowed)
    if b not in par:
        return None
    path = [b]
    while par[path[-1]] is not None:
        path.append(par[path[-1]])
    return path[::-1]


def components(G: Graph, within=None) -> list:
    """Connected components (sorted lists), ordered by smallest member."""
    within = set(G.vertices) if within is None else set(within)
    seen = set()
    out = []
    for v in sorted(within):
        if v in seen:
            continue
        comp = set(bfs_order(G, v, within))
        seen |= comp
        out.append(sorted(comp))
    return out


def is_path(G: Graph, path, s=None, t=None) -> bool:
    if not path or len(set(path)) != len(path):
        return False
    if s is not None and path[0] != s:
        return False
    if t is not None and path[-1] != t:
        return False
    return all(G.has_edge(a, b) for a, b in zip(path, path[1:]))


# ---------------------------------------------------------------------------
# planarity


@dataclass(frozen=True)
class RotationSystem:
    """Clockwise neighbour order around each vertex."""

    order: dict

    def successor(self, v, u):
        ring = self.order[v]
        return ring[(ring.index(u) + 1) % len(ring)]


@dataclass(frozen=True)
class NotPlanar:
    reason: str = "graph is not planar"


def count_faces(G: Graph, rot: RotationSystem) -> int:
    """Faces of the embedding, with one shared outer face across components."""
    darts = {(u, v) for u in G.vertices for v in G.neighbors(u)}
    traced = 0
    while darts:
        start = min(darts)
        d = start
        while True:
            darts.discard(d)
            u, v = d
            d = (v, rot.successor(v, u))
            if d == start:
                break
        traced += 1
    traced += sum(1 for v in G.vertices if G.degree(v) == 0)
    c = len(components(G))
    return traced - c + 1 if c else 1


def check_rotation(G: Graph, rot: RotationSystem) -> list:
    problems = []
    for v in G.vertices:
        ring = rot.order.get(v)
        if ring is None or sorted(ring) != list(G.neighbors(v)):
            problems.append(f"rotation at {v} does not list its neighbours")
    if problems:
        return problems
    c = len(components(G))
    if G.n - G.m + count_faces(G, rot) != 1 + c:
        problems.append("Euler check failed")
    return problems


def planar_embed(G: Graph):
    ok, emb = nx.check_planarity(G.to_networkx())
    if not ok:
        return NotPlanar()
    order = {v: tuple(emb.neighbors_cw_order(v)) if G.degree(v) else () for v in G.vertices}
    rot = RotationSystem(order)
    problems = check_rotation(G, rot)
    if problems:  # pragma: no cover - would be a networkx bug
        raise GraphError("; ".join(problems))
    return rot


def is_planar(G: Graph) -> bool:
    return not isinstance(planar_embed(G), NotPlanar)


# ---------------------------------------------------------------------------
# blocks


@dataclass
class BlockSplit:
    parts: list  # (Graph, s', t') in order from s to t
    no_path: bool = False


def biconnected_split(G: Graph, s, t) -> BlockSplit:
    """Blocks on the s-t path of the block-cut tree, with cut vertices as terminals."""
    if s not in G or t not in G:
        raise GraphError("terminal not in graph")
    if t not in bfs_order(G, s):
        return BlockSplit([], True)
    g = G.to_networkx()
    blocks = [frozenset(b) for b in nx.biconnected_components(g)]
    blocks.sort(key=lambda b: sorted(b))
    cuts = set(nx.articulation_points(g))
    # block-cut tree, nodes ("B", idx) and ("C", v)
    tree = {}
    for i, b in enumerate(blocks):
        tree.setdefault(("B", i), [])
        for v in sorted(b & cuts):
            tree[("B", i)].append(("C", v))
            tree.setdefault(("C", v), []).append(("B", i))

    def home(v):
        if v in cuts:
            return ("C", v)
        return ("B", next(i for i, b in enumerate(blocks) if v in b))

    a, b = home(s), home(t)
    par = {a: None}
    dq = deque([a])
    while dq:
        x = dq.popleft()
        for y in tree[x]:
            if y not in par:
                par[y] = x
                dq.append(y)
    chain = [b]
    while par[chain[-1]] is not None:
        chain.append(par[chain[-1]])
    chain.reverse()
    parts = []
    cur = s
    block_nodes = [x for x in chain if x[0] == "B"]
    for idx, node in enumerate(block_nodes):
        blk = blocks[node[1]]
        if idx + 1 < len(block_nodes):
            nxt = blocks[block_nodes[idx + 1][1]]
            end = next(iter(sorted(blk & nxt)))
        else:
            end = t
        if cur not in blk:  # s is a cut vertex shared with a block not on the chain
            raise GraphError("block chain broken")
        parts.append((G.subgraph(blk), cur, end))
        cur = end
    if s == t:
        parts = []
    return BlockSplit(parts, False)


# ---------------------------------------------------------------------------
# disjoint paths


@dataclass
class DisjointPaths:
    paths: list


@dataclass
class Separator:
    vertices: list


def vertex_disjoint_paths(G: Graph, A, B, c: int):
    """Either ``c`` A-B paths or a vertex set of size < c meeting every A-B path.

    Paths are vertex-disjoint except that the sole member of a singleton A or
    B is shared.  Augmentation is by BFS with ascending ids.  A direct edge
    between singleton ends counts as one path and cannot be cut by vertices.
    """
    A, B = set(A), set(B)
    shareA = len(A) == 1
    shareB = len(B) == 1

    def cap(v):
        if (shareA and v in A) or (shareB and v in B):
            return c
        return 1

    # nodes: ("S",), ("T",), (v, 0) in-node, (v, 1) out-node
    flow = {}
    capac = {}
    adj = {}

    def arc(x, y, cp):
        capac[(x, y)] = capac.get((x, y), 0) + cp
        capac.setdefault((y, x), 0)
        adj.setdefault(x, [])
        adj.setdefault(y, [])
        if y not in adj[x]:
            adj[x].append(y)
        if x not in adj[y]:
            adj[y].append(x)

    S, T = ("S",), ("T",)
    for v in G.vertices:
        arc((v, 0), (v, 1), cap(v))
    for u, v in G.edges():
        ecap = 1 if cap(u) > 1 and cap(v) > 1 else c
        arc((u, 1), (v, 0), ecap)
        arc((v, 1), (u, 0), ecap)
    for a in sorted(A):
        arc(S, (a, 0), c)
    for b in sorted(B):
        arc((b, 1), T, c)
    def order_key(y):
        if y == S:
            return (-1, 0)
        if y == T:
            return (1, 0, 0)
        return (0, y[0], y[1])

    for x in adj:
        adj[x].sort(key=order_key)

    def res(x, y):
        return capac[(x, y)] - flow.get((x, y), 0)

    total = 0
    while total < c:
        par = {S: None}
        dq = deque([S])
        while dq and T not in par:
            x = dq.popleft()
            for y in adj.get(x, ()):
                if y not in par and res(x, y) > 0:
                    par[y] = x
                    dq.append(y)
        if T not in par:
            break
        y = T
        while par[y] is not None:
            x = par[y]
            flow[(x, y)] = flow.get((x, y), 0) + 1
            flow[(y, x)] = flow.get((y, x), 0) - 1
            y = x
        total += 1
    if total >= c:
        return DisjointPaths(_decompose_flow(flow, adj, S, T, c))
    # min cut from residual reachability
    seen = {S}
    dq = deque([S])
    while dq:
        x = dq.popleft()
        for y in adj.get(x, ()):
            if y not in seen and res(x, y) > 0:
                seen.add(y)
                dq.append(y)
    sep = sorted({x[0] for x in seen if len(x) == 2 and x[1] == 0 and (x[0], 1) not in seen})
    return Separator(sep)


def _decompose_flow(flow, adj, S, T, c):
    used = {k: v for k, v in flow.items() if v > 0}
    paths = []
    for _ in range(c):
        x = S
        walk = []
        while x != T:
            nxt = None
            for y in adj[x]:
                if used.get((x, y), 0) > 0:
                    nxt = y
                    break
            used[(x, nxt)] -= 1
            if len(nxt) == 2 and nxt[1] == 0:
                walk.append(nxt[0])
            x = nxt
        # drop any repeated vertex loops (cannot occur with unit capacities,
        # kept as a guard for shared terminals)
        clean = []
        for v in walk:
            if v in clean:
                clean = clean[: clean.index(v) + 1]
            else:
                clean.append(v)
        paths.append(clean)
    return paths


def separates(G: Graph, A, B, sep) -> bool:
    keep = set(G.vertices) - set(sep)
    start = [a for a in A if a in keep]
    reach = set()
    for a in start:
        reach |= set(bfs_order(G, a, keep))
    return not (reach & set(B))


def chain_blocks(G: Graph, blocked, u, t):
    """Blocks of G - blocked on the u-t chain: list of (vertex set, entry, exit)."""
    keep = set(G.vertices) - set(blocked)
    if u not in keep or t not in keep:
        return None
    H = G.subgraph(keep)
    if t not in bfs_order(H, u):
        return None
    split = biconnected_split(H, u, t)
    return [(set(g.vertices), a, b, g) for g, a, b in split.parts]


def thread_chain(prefix, chain, picks):
    """Extend ``prefix`` through the chain blocks, detouring through the
    picked vertex of a block (by two disjoint paths) where one is given."""
    path = list(prefix)
    for idx, (vs, a, b, g) in enumerate(chain):
        x = picks.get(idx)
        if x is None:
            seg = shortest_path(g, a, b)
        else:
            res = vertex_disjoint_paths(g, {x}, {a, b}, 2)
            if not isinstance(res, DisjointPaths):  # pragma: no cover - blocks are 2-connected
                return None
            p1, p2 = res.paths
            if p1[-1] != a:
                p1, p2 = p2, p1
            seg = p1[::-1] + p2[1:]
        path += seg[1:]
    return path


# ---------------------------------------------------------------------------
# tree decompositions


@dataclass
class TreeDecomposition:
    bags: dict  # node -> frozenset
    parent: dict  # node -> node or None

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def children(self) -> dict:
        ch = {x: [] for x in self.bags}
        for x, p in self.parent.items():
            if p is not None:
                ch[p].append(x)
        for x in ch:
            ch[x].sort()
        return ch

    def root(self):
        roots = [x for x, p in self.parent.items() if p is None]
        return min(roots) if roots else None


@dataclass(frozen=True)
class Exceeds:
    w: int


@dataclass(frozen=True)
class Incomplete:
    reason: str


def validate_td(G: Graph, T: TreeDecomposition, claimed_width=None) -> list:
    problems = []
    nodes = set(T.bags)
    if set(T.parent) != nodes:
        problems.append("parent map does not match bag nodes")
        return problems
    roots = [x for x, p in T.parent.items() if p is None]
    if len(roots) != 1 and nodes:
        problems.append("tree is not connected or has no root")
    for x, p in T.parent.items():
        if p is not None and p not in nodes:
            problems.append(f"node {x} has unknown parent")
    # acyclicity: walking parents must reach the root
    for x in nodes:
        seen = set()
        y = x
        while y is not None and y not in seen:
            seen.add(y)
            y = T.parent.get(y)
        if y is not None:
            problems.append("parent links contain a cycle")
            break
    if problems:
        return problems
    covered = set().union(*T.bags.values()) if T.bags else set()
    for v in G.vertices:
        if v not in covered:
            problems.append(f"vertex {v} uncovered")
    for u, v in G.edges():
        if not any(u in b and v in b for b in T.bags.values()):
            problems.append(f"edge {u}-{v} uncovered")
    for v in G.vertices:
        occ = {x for x, b in T.bags.items() if v in b}
        if len(occ) <= 1:
            continue
        tops = [x for x in occ if T.parent[x] not in occ]
        if len(tops) != 1:
            problems.append(f"occupancy of {v} disconnected")
    if claimed_width is not None and T.width > claimed_width:
        problems.append(f"width {T.width} exceeds claimed {claimed_width}")
    return problems


def td_from_ordering(G: Graph, order) -> TreeDecomposition:
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(G.neighbors(v)) for v in G.vertices}
    bags = {}
    parent = {}
    for v in order:
        later = adj[v]
        bags[pos[v]] = frozenset(later | {v})
        for a, b in combinations(sorted(later), 2):
            adj[a].add(b)
            adj[b].add(a)
        for u in later:
            adj[u].discard(v)
        parent[pos[v]] = min((pos[u] for u in later), default=None)
    if not bags:
        return TreeDecomposition({0: frozenset()}, {0: None})
    roots = sorted(x for x, p in parent.items() if p is None)
    for x in roots[:-1]:
        parent[x] = roots[-1]
    return TreeDecomposition(bags, parent)


def greedy_min_fill(G: Graph) -> list:
    """Min-fill elimination ordering (ties: min degree, then id), lazy heap."""
    adj = {v: set(G.neighbors(v)) for v in G.vertices}

    def fill(v):
        nb = sorted(adj[v])
        return sum(1 for a, b in combinations(nb, 2) if b not in adj[a])

    heap = [(fill(v), len(adj[v]), v) for v in G.vertices]
    heapq.heapify(heap)
    done = set()
    order = []
    while heap:
        f, d, v = heapq.heappop(heap)
        if v in done:
            continue
        if (f, d) != (fill(v), len(adj[v])):
            heapq.heappush(heap, (fill(v), len(adj[v]), v))
            continue
        order.append(v)
        done.add(v)
        nb = sorted(adj[v])
        for a, b in combinations(nb, 2):
            adj[a].add(b)
            adj[b].add(a)
        touched = set(nb)
        for u in nb:
            adj[u].discard(v)
            touched |= adj[u]
        del adj[v]
        for u in sorted(touched):
            if u in adj:
                heapq.heappush(heap, (fill(u), len(adj[u]), u))
    return order


def minor_min_width(G: Graph) -> int:
    """Lower bound on treewidth by contracting a min-degree vertex into its
    min-degree neighbour."""
    return _mmw({v: set(G.neighbors(v)) for v in G.vertices})


def _mmw(adj) -> int:
    adj = {v: set(s) for v, s in adj.items()}
    best = 0
    while len(adj) > best + 1:
        v = min(adj, key=lambda x: (len(adj[x]), x))
        best = max(best, len(adj[v]))
        if not adj[v]:
            del adj[v]
            continue
        u = min(adj[v], key=lambda x: (len(adj[x]), x))
        for w in adj[v]:
            adj[w].discard(v)
            if w != u:
                adj[w].add(u)
                adj[u].add(w)
        del adj[v]
    return best


def exact_treewidth_at_most(G: Graph, w: int, budget: int = 200_000):
    """Elimination ordering of width <= w, or None if none exists.

    Raises TimeoutError when the node budget is exhausted.
    """
    if G.n == 0:
        return []
    start = {v: frozenset(G.neighbors(v)) for v in G.vertices}
    failed = set()
    counter = [0]

    def search(adj, order):
        counter[0] += 1
        if counter[0] > budget:
            raise TimeoutError("treewidth search budget exhausted")
        if len(adj) <= w + 1:
            return order + sorted(adj)
        key = frozenset(adj)
        if key in failed:
            return None
        # forced moves: simplicial or almost simplicial vertex of low degree
        for v in sorted(adj):
            nb = adj[v]
            if len(nb) <= w and all(b in adj[a] for a, b in combinations(sorted(nb), 2)):
                res = search(_eliminate(adj, v), order + [v])
                if res is None:
                    failed.add(key)
                return res
        if _mmw(adj) > w:
            failed.add(key)
            return None
        cands = sorted((v for v in adj if len(adj[v]) <= w), key=lambda v: (len(adj[v]), v))
        for v in cands:
            res = search(_eliminate(adj, v), order + [v])
            if res is not None:
                return res
        failed.add(key)
        return None

    return search(start, [])


def _eliminate(adj, v):
    nb = adj[v]
    out = {}
    for u, s in adj.items():
        if u == v:
            continue
        if u in nb:
            s = (s | nb) - {u, v}
        out[u] = frozenset(s)
    return out


EXACT_LIMIT = 30


def treewidth_decompose(G: Graph, w: int, exact_limit: int = EXACT_LIMIT):
    """Decomposition of width <= 2w+1, or Exceeds(w), or Incomplete.

    Greedy first; when greedy is above w and the graph is small an exact
    search decides whether treewidth <= w.
    """
    order = greedy_min_fill(G)
    td = td_from_ordering(G, order)
    if td.width <= w:
        return td
    if G.n <= exact_limit:
        try:
            exact = exact_treewidth_at_most(G, w)
        except TimeoutError:
            exact = "timeout"
        if exact is None:
            return Exceeds(w)
        if exact != "timeout":
            return td_from_ordering(G, exact)
    if minor_min_width(G) > w:
        return Exceeds(w)
    if td.width <= 2 * w + 1:
        return td
    return Incomplete("treewidth undecided by heuristics")


def treewidth_exact(G: Graph) -> int:
    lo = minor_min_width(G)
    hi = td_from_ordering(G, greedy_min_fill(G)).width
    for w in range(lo, hi):
        if exact_treewidth_at_most(G, w) is not None:
            return w
    return hi


# ---------------------------------------------------------------------------
# nice tree decompositions


@dataclass
class NiceNode:
    kind: str  # leaf | insert | forget | join
    bag: frozenset
    vertex: object = None
    children: list = field(default_factory=list)


@dataclass
class NiceTreeDecomposition:
    nodes: list
    root: int
    s: object
    t: object

    @property
    def width(self):
        return max(len(x.bag) for x in self.nodes) - 1

    def postorder(self) -> list:
        out = []
        stack = [(self.root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
                continue
            stack.append((x, True))
            for c in reversed(self.nodes[x].children):
                stack.append((c, False))
        return out

    def as_td(self) -> TreeDecomposition:
        parent = {self.root: None}
        for i, nd in enumerate(self.nodes):
            for c in nd.children:
                parent[c] = i
        return TreeDecomposition({i: nd.bag for i, nd in enumerate(self.nodes)}, parent)


def make_nice(T: TreeDecomposition, G: Graph, s, t) -> NiceTreeDecomposition:
    problems = validate_td(G, T)
    if problems:
        raise GraphError("invalid decomposition: " + "; ".join(problems))
    if s not in G or t not in G:
        raise GraphError("terminals not in graph")
    st = frozenset((s, t))
    nodes: list = []

    def new(kind, bag, vertex=None, children=()):
        nodes.append(NiceNode(kind, frozenset(bag), vertex, list(children)))
        return len(nodes) - 1

    def lift(node, target):
        """Forget then insert to turn the top bag of ``node`` into target."""
        bag = set(nodes[node].bag)
        for v in sorted(bag - target):
            bag.discard(v)
            node = new("forget", bag, v, [node])
        for v in sorted(target - bag):
            bag.add(v)
            node = new("insert", bag, v, [node])
        return node

    children = T.children()
    root = T.root()
    built = {}
    for x in _td_postorder(children, root):
        B = set(T.bags[x]) | st
        subs = [lift(built.pop(c), B) for c in children[x]]
        if not subs:
            top = lift(new("leaf", st), B)
        else:
            top = subs[0]
            for other in subs[1:]:
                top = new("join", B, None, [top, other])
        built[x] = top
    top = lift(built[root], set(st))
    return NiceTreeDecomposition(nodes, top, s, t)


def _td_postorder(children, root):
    out = []
    stack = [(root, False)]
    while stack:
        x, done = stack.pop()
        if done:
            out.append(x)
            continue
        stack.append((x, True))
        for c in reversed(children[x]):
            stack.append((c, False))
    return out


def validate_nice(ntd: NiceTreeDecomposition, G: Graph) -> list:
    problems = validate_td(G, ntd.as_td())
    st = frozenset((ntd.s, ntd.t))
    if ntd.nodes[ntd.root].bag != st:
        problems.append("root bag is not {s,t}")
    for i, nd in enumerate(ntd.nodes):
        if not st <= nd.bag:
            problems.append(f"node {i} lacks a terminal")
        ch = [ntd.nodes[c] for c in nd.children]
        if nd.kind == "leaf":
            if ch or nd.bag != st:
                problems.append(f"bad leaf {i}")
        elif nd.kind == "insert":
            if len(ch) != 1 or nd.bag != ch[0].bag | {nd.vertex} or nd.vertex in ch[0].bag:
                problems.append(f"bad insert {i}")
        elif nd.kind == "forget":
            if len(ch) != 1 or ch[0].bag != nd.bag | {nd.vertex} or nd.vertex in nd.bag:
                problems.append(f"bad forget {i}")
        elif nd.kind == "join":
            if len(ch) != 2 or any(c.bag != nd.bag for c in ch):
                problems.append(f"bad join {i}")
        else:
            problems.append(f"unknown kind {nd.kind}")
    return problems
