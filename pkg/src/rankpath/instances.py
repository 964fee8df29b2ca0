"""Instance files, reductions from classic path problems, and generators."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import isqrt

from .exactalg import GF, QQ, FieldError, next_prime, parse_field
from .framework import Framework
from .graph import Graph, RotationSystem, check_rotation, planar_embed
from .matroid import LinearMatroid, vandermonde_uniform
from .wall import WallModel, build_elementary_wall, subdivide_wall, validate_wall


class InstanceError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line} col {col}: {msg}")
        self.line, self.col, self.msg = line, col, msg


@dataclass
class InstanceBundle:
    framework: Framework
    embedding: RotationSystem | None = None
    wall: WallModel | None = None
    meta: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# parsing


class _Lines:
    def __init__(self, text):
        self.items = []
        self.meta = {}
        for no, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if stripped.startswith("# meta "):
                for tok in stripped[len("# meta "):].split():
                    key, _, val = tok.partition("=")
                    self.meta[key] = val
                continue
            body = raw.split("#", 1)[0].rstrip()
            if body.strip():
                self.items.append((no, body))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else (None, None)

    def take(self, what):
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 0
            raise InstanceError(last + 1, 1, f"unexpected end of file, expected {what}")
        item = self.items[self.pos]
        self.pos += 1
        return item


def _col(line, token, start=0):
    return line.find(token, start) + 1 if token else 1


def _ints(no, line, count=None, what="integer"):
    out = []
    for tok in line.split():
        try:
            out.append(int(tok))
        except ValueError:
            raise InstanceError(no, _col(line, tok), f"expected {what}, got {tok!r}") from None
    if count is not None and len(out) != count:
        raise InstanceError(no, 1, f"expected {count} values, got {len(out)}")
    return out


def _header(lines, tag, nargs):
    no, line = lines.take(tag)
    parts = line.split()
    if parts[0] != tag:
        raise InstanceError(no, _col(line, parts[0]), f"expected {tag}, got {parts[0]!r}")
    if len(parts) - 1 != nargs and nargs >= 0:
        raise InstanceError(no, 1, f"{tag} takes {nargs} values")
    return no, line, parts[1:]


def parse_instance(text: str, check_wall: bool = True) -> InstanceBundle:
    lines = _Lines(text)
    no, line = lines.take("FRAMEWORK")
    if line.split() != ["FRAMEWORK", "v1"]:
        raise InstanceError(no, 1, "expected 'FRAMEWORK v1'")

    no, line, args = _header(lines, "FIELD", -1)
    try:
        fld = parse_field(" ".join(args))
    except FieldError as exc:
        raise InstanceError(no, _col(line, args[0] if args else ""), str(exc)) from None

    no, line, args = _header(lines, "GRAPH", 2)
    n, m = _ints(no, " ".join(args), 2)
    if n < 0 or m < 0:
        raise InstanceError(no, 1, "negative size")
    edges = []
    for _ in range(m):
        eno, eline = lines.take("edge")
        u, v = _ints(eno, eline, 2, "vertex id")
        for tok, x in ((eline.split()[0], u), (eline.split()[1], v)):
            if not 0 <= x < n:
                raise InstanceError(eno, _col(eline, tok), f"dangling vertex id {x}")
        if u == v:
            raise InstanceError(eno, 1, "self loop")
        edges.append((u, v))
    G = Graph(range(n), edges)
    if G.m != m:
        raise InstanceError(no, 1, "duplicate edges")

    no, line, args = _header(lines, "TERMINALS", 2)
    s, t = _ints(no, " ".join(args), 2, "vertex id")
    for x in (s, t):
        if not 0 <= x < n:
            raise InstanceError(no, _col(line, str(x), 9), f"dangling vertex id {x}")
    if s == t:
        raise InstanceError(no, 1, "terminals must differ")

    no, line, args = _header(lines, "K", 1)
    (k,) = _ints(no, " ".join(args), 1)
    if k < 0:
        raise InstanceError(no, 1, "negative k")

    no, line, args = _header(lines, "MATROID", 2)
    r, mn = _ints(no, " ".join(args), 2)
    if mn != n:
        raise InstanceError(no, _col(line, args[1], 8), "ground set size mismatch")
    rows = []
    for _ in range(r):
        rno, rline = lines.take("matrix row")
        toks = rline.split()
        if len(toks) != n:
            raise InstanceError(rno, 1, f"row has {len(toks)} entries, expected {n}")
        row = []
        pos = 0
        for tok in toks:
            pos = rline.find(tok, pos)
            try:
                row.append(fld.parse(tok))
            except (FieldError, ValueError) as exc:
                raise InstanceError(rno, pos + 1, f"bad scalar {tok!r}: {exc}") from None
            pos += len(tok)
        rows.append(row)
    M = LinearMatroid.from_rows(fld, rows, tuple(range(n)))
    F = Framework(G, M, s, t, k)

    emb = wall = None
    while True:
        no, line = lines.peek()
        if no is None:
            break
        head = line.split()[0]
        if head == "EMBEDDING":
            lines.take("EMBEDDING")
            emb = _parse_embedding(lines, G)
        elif head == "WALL":
            lines.take("WALL")
            wall = _parse_wall(lines, no, line, G, check_wall)
        else:
            raise InstanceError(no, _col(line, head), f"unknown section {head!r}")
    return InstanceBundle(F, emb, wall, lines.meta)


def _parse_embedding(lines, G):
    order = {}
    for _ in range(G.n):
        no, line = lines.take("embedding line")
        head, sep, rest = line.partition(":")
        if not sep:
            raise InstanceError(no, 1, "expected 'v: neighbours'")
        (v,) = _ints(no, head, 1, "vertex id")
        nb = tuple(_ints(no, rest, None, "vertex id"))
        if v not in G or v in order:
            raise InstanceError(no, 1, f"bad embedding vertex {v}")
        order[v] = nb
    rot = RotationSystem(order)
    problems = check_rotation(G, rot)
    if problems:
        raise InstanceError(lines.items[lines.pos - 1][0], 1, "invalid embedding: " + problems[0])
    return rot


def _parse_wall(lines, no, line, G, check=True):
    args = _ints(no, line.split(None, 1)[1] if len(line.split()) > 1 else "", None)
    if len(args) not in (1, 2):
        raise InstanceError(no, 1, "WALL takes height and optional parity")
    h = args[0]
    parity = args[1] if len(args) == 2 else 0
    branch, paths = {}, {}
    while True:
        bno, bline = lines.peek()
        if bno is None:
            break
        parts = bline.split()
        if parts[0] == "B":
            lines.take("B")
            x, y, v = _ints(bno, " ".join(parts[1:]), 3)
            if v not in G:
                raise InstanceError(bno, 1, f"dangling vertex id {v}")
            branch[(x, y)] = v
        elif parts[0] == "S":
            lines.take("S")
            vals = _ints(bno, " ".join(parts[1:]))
            if len(vals) < 5:
                raise InstanceError(bno, 1, "S line needs two positions and a path")
            a, b = (vals[0], vals[1]), (vals[2], vals[3])
            mid = tuple(vals[4:])
            if a > b:
                a, b, mid = b, a, mid[::-1]
            for v in mid:
                if v not in G:
                    raise InstanceError(bno, 1, f"dangling vertex id {v}")
            paths[(a, b)] = mid
        else:
            break
    W = WallModel(h, branch, paths, parity)
    problems = validate_wall(G, W) if check else []
    if problems:
        raise InstanceError(no, 1, "invalid wall: " + problems[0])
    return W


# ---------------------------------------------------------------------------
# writing


def write_instance(bundle: InstanceBundle) -> str:
    F = bundle.framework
    G, M = F.graph, F.matroid
    fld = M.field
    out = ["FRAMEWORK v1"]
    for key in sorted(bundle.meta):
        out.append(f"# meta {key}={bundle.meta[key]}")
    out.append(f"FIELD {fld}")
    out.append(f"GRAPH {G.n} {G.m}")
    out += [f"{u} {v}" for u, v in G.edges()]
    out.append(f"TERMINALS {F.s} {F.t}")
    out.append(f"K {F.k}")
    A = M.matrix
    out.append(f"MATROID {A.rows} {A.cols}")
    for i in range(A.rows):
        out.append(" ".join(fld.format(x) for x in A.row(i)))
    if bundle.embedding is not None:
        out.append("EMBEDDING")
        for v in G.vertices:
            nb = bundle.embedding.order.get(v, ())
            out.append(f"{v}: " + " ".join(map(str, nb)) if nb else f"{v}:")
    if bundle.wall is not None:
        W = bundle.wall
        out.append(f"WALL {W.height} {W.parity}")
        for (x, y) in sorted(W.branch, key=lambda p: (p[1], p[0])):
            out.append(f"B {x} {y} {W.branch[(x, y)]}")
        for (a, b) in sorted(W.paths):
            if W.paths[(a, b)]:
                out.append(f"S {a[0]} {a[1]} {b[0]} {b[1]} " + " ".join(map(str, W.paths[(a, b)])))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# reductions


def reduce_longest_path(G: Graph, s, t, k: int) -> Framework:
    fld = GF(next_prime(G.n))
    return Framework(G, vandermonde_uniform(fld, k, G.vertices), s, t, k)


def reduce_t_cycle(G: Graph, T) -> list:
    """One framework per edge st: G minus st, standard basis on T, k = |T|."""
    T = sorted(set(T))
    fld = GF(next_prime(G.n))
    idx = {v: i for i, v in enumerate(T)}
    rows = [[fld.one if idx.get(v) == i else fld.zero for v in G.vertices] for i in range(len(T))]
    M = LinearMatroid.from_rows(fld, rows, G.vertices)
    out = []
    for u, v in G.edges():
        H = Graph(G.vertices, [e for e in G.edges() if e != (u, v)])
        out.append(Framework(H, M, u, v, len(T)))
    return out


def reduce_colored_path(G: Graph, s, t, coloring, k: int) -> Framework:
    fld = GF(next_prime(G.n))
    colours = sorted(set(coloring[v] for v in G.vertices))
    idx = {c: i for i, c in enumerate(colours)}
    rows = [[fld.one if idx[coloring[v]] == i else fld.zero for v in G.vertices] for i in range(len(colours))]
    return Framework(G, LinearMatroid.from_rows(fld, rows, G.vertices), s, t, k)


# ---------------------------------------------------------------------------
# generators

MATROID_KINDS = ("uniform", "partition", "random", "sparse")


def _field_token(tok):
    if tok == "rational":
        return QQ
    if tok.startswith("gfp"):
        return GF(int(tok[3:]))
    raise FieldError(f"unknown field token {tok!r}")


def _random_scalar(fld, rng):
    if fld is QQ:
        return QQ(rng.randint(-3, 3))
    return rng.randrange(fld.p)


def matroid_from_spec(spec: str, ground, rng: random.Random):
    """Build (matroid, k) from a compact description.

    uniform:K             Vandermonde U(K, n) over the smallest prime > n
    partition:C:K         random colour classes 0..C-1, indicator columns
    random:R:K:FIELD      R x n matrix of random scalars (FIELD = gfp<p> | rational)
    sparse:C:R:K:FIELD    C random nonloops with random R-vectors, other columns zero
    """
    parts = spec.split(":")
    kind = parts[0]
    ground = tuple(ground)
    n = len(ground)
    try:
        if kind == "uniform":
            k = int(parts[1])
            return vandermonde_uniform(GF(next_prime(n)), k, ground), k
        if kind == "partition":
            c, k = int(parts[1]), int(parts[2])
            fld = GF(next_prime(n))
            colour = [rng.randrange(c) for _ in ground]
            rows = [[fld.one if colour[j] == i else fld.zero for j in range(n)] for i in range(c)]
            return LinearMatroid.from_rows(fld, rows, ground), k
        if kind == "random":
            r, k, fld = int(parts[1]), int(parts[2]), _field_token(parts[3])
            rows = [[_random_scalar(fld, rng) for _ in ground] for _ in range(r)]
            return LinearMatroid.from_rows(fld, rows, ground), k
        if kind == "sparse":
            c, r, k, fld = int(parts[1]), int(parts[2]), int(parts[3]), _field_token(parts[4])
            chosen = set(rng.sample(range(n), min(c, n)))
            rows = [[_random_scalar(fld, rng) if j in chosen else fld.zero for j in range(n)] for _ in range(r)]
            return LinearMatroid.from_rows(fld, rows, ground), k
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad matroid spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown matroid kind {kind!r}")


def triangulated_grid(cols: int, n: int) -> Graph:
    """First n vertices (row-major) of a grid with one diagonal per square."""
    edges = []
    for v in range(n):
        x, y = v % cols, v // cols
        right, down, diag = v + 1, v + cols, v + cols + 1
        if x + 1 < cols and right < n:
            edges.append((v, right))
        if down < n:
            edges.append((v, down))
        if x + 1 < cols and diag < n:
            edges.append((v, diag))
    return Graph(range(n), edges)


def gen_random_planar(n: int, density: float, matroid_spec: str, seed: int) -> InstanceBundle:
    if n < 2:
        raise ValueError("need at least two vertices")
    rng = random.Random(seed)
    cols = max(2, isqrt(n - 1) + 1)
    host = triangulated_grid(cols, n)
    # random spanning tree keeps the graph connected
    order = list(host.edges())
    rng.shuffle(order)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    keep = []
    rest = []
    for u, v in order:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            keep.append((u, v))
        else:
            rest.append((u, v))
    keep += [e for e in rest if rng.random() < density]
    G = Graph(range(n), keep)
    s, t = rng.sample(range(n), 2)
    M, k = matroid_from_spec(matroid_spec, G.vertices, rng)
    emb = planar_embed(G)
    meta = {"generator": "random_planar", "seed": seed, "n": n, "density": density, "matroid": matroid_spec}
    return InstanceBundle(Framework(G, M, s, t, k), emb, None, meta)


def gen_wall_instance(r: int, matroid_spec: str, seed: int, subdivide: int = 0) -> InstanceBundle:
    """Elementary r-wall (optionally subdivided) with terminals attached to the
    perimeter from outside, so the compass avoids them."""
    rng = random.Random(seed)
    G, W = build_elementary_wall(r)
    if subdivide:
        G, W = subdivide_wall(G, W, seed=seed, max_extra=subdivide)
    nxt = max(G.vertices) + 1
    s, t = nxt, nxt + 1
    b = W.branch
    extra = [(s, b[(1, 1)]), (s, b[(2, 1)]), (t, b[(2 * r, r)]), (t, b[(2 * r - 1, r)])]
    G = Graph(list(G.vertices) + [s, t], G.edges() + extra)
    M, k = matroid_from_spec(matroid_spec, G.vertices, rng)
    meta = {"generator": "wall", "seed": seed, "r": r, "matroid": matroid_spec, "subdivide": subdivide}
    return InstanceBundle(Framework(G, M, s, t, k), None, W, meta)
