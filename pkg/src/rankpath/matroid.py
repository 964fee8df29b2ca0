"""Linear matroids on vertex sets."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .exactalg import (
    GF,
    ExactMatrix,
    RationalFunctions,
    basis_of_vectors,
    mat_rank,
    minors_vector,
    row_space_basis,
)


class MatroidError(ValueError):
    pass


class TruncationError(MatroidError):
    """Certified evaluation ran out of candidate points."""


@dataclass(frozen=True)
class LinearMatroid:
    ground: tuple
    matrix: ExactMatrix
    rank_total: int = -1
    _col: dict = field(default=None, repr=False, compare=False, hash=False)
    _cache: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.ground) != self.matrix.cols:
            raise MatroidError("ground set size mismatch")
        col = {v: j for j, v in enumerate(self.ground)}
        if len(col) != len(self.ground):
            raise MatroidError("duplicate ground element")
        object.__setattr__(self, "_col", col)
        object.__setattr__(self, "_cache", {})
        if self.rank_total < 0:
            object.__setattr__(self, "rank_total", mat_rank(self.matrix))

    @classmethod
    def from_rows(cls, field_, rows, ground=None):
        A = ExactMatrix.from_rows(field_, rows, None if rows else len(ground or ()))
        if ground is None:
            ground = tuple(range(A.cols))
        return cls(tuple(ground), A)

    @property
    def field(self):
        return self.matrix.field

    @property
    def n(self):
        return len(self.ground)

    def column_of(self, v) -> int:
        try:
            return self._col[v]
        except KeyError:
            raise MatroidError(f"unknown vertex {v!r}") from None

    def vector(self, v) -> tuple:
        return self.matrix.column(self.column_of(v))

    def is_loop(self, v) -> bool:
        F = self.field
        return all(F.is_zero(x) for x in self.vector(v))

    def rank(self, S: Iterable) -> int:
        key = frozenset(S)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        cols = sorted(self.column_of(v) for v in key)
        r = mat_rank(self.matrix, cols)
        if len(self._cache) < 200000:
            self._cache[key] = r
        return r

    def is_independent(self, S: Iterable) -> bool:
        S = list(S)
        if len(set(S)) != len(S):
            return False
        if len(S) > self.rank_total:
            return False
        return self.rank(S) == len(S)

    def restrict(self, keep: Iterable) -> "LinearMatroid":
        keep = sorted(set(keep), key=self.column_of)
        cols = [self.column_of(v) for v in keep]
        return LinearMatroid(tuple(keep), self.matrix.select_columns(cols))

    def delete(self, v) -> "LinearMatroid":
        self.column_of(v)
        return self.restrict(u for u in self.ground if u != v)

    def reduced(self) -> "LinearMatroid":
        """Same matroid with exactly rank many rows."""
        A = row_space_basis(self.matrix)
        return LinearMatroid(self.ground, A, self.rank_total)

    def nonloops(self) -> list:
        return [v for v in self.ground if not self.is_loop(v)]

    def independent_sets(self, max_size=None):
        """All independent sets in order of size then lexicographic."""
        top = self.rank_total if max_size is None else min(max_size, self.rank_total)
        out = [()]
        for size in range(1, top + 1):
            for S in combinations(sorted(self.ground), size):
                if self.is_independent(S):
                    out.append(S)
        return out


# ---------------------------------------------------------------------------
# truncation


def _parallel_representatives(M: LinearMatroid) -> list:
    """One nonloop per projective class, smallest id first."""
    F = M.field
    reps = []
    seen = []
    for v in sorted(M.ground):
        vec = M.vector(v)
        if all(F.is_zero(x) for x in vec):
            continue
        lead = next(x for x in vec if not F.is_zero(x))
        inv = F.inv(lead)
        normal = tuple(F.mul(inv, x) for x in vec)
        if normal in seen:
            continue
        seen.append(normal)
        reps.append(v)
    return reps


def _apply(field_, B_rows, A: ExactMatrix) -> ExactMatrix:
    Bm = ExactMatrix.from_rows(field_, B_rows, A.rows)
    return Bm.matmul(A)


def _preserves(M: LinearMatroid, A2: ExactMatrix, size: int, reps) -> bool:
    for S in combinations(reps, size):
        cols = [M.column_of(v) for v in S]
        if mat_rank(M.matrix, cols) == size and mat_rank(A2, cols) != size:
            return False
    return True


def _power_rows(field_, x, k, r):
    rows = []
    for i in range(1, k + 1):
        xi = field_.one
        step = _fpow(field_, x, i)
        row = []
        for _ in range(r):
            row.append(xi)
            xi = field_.mul(xi, step)
        rows.append(row)
    return rows


def _fpow(field_, x, e):
    out = field_.one
    for _ in range(e):
        out = field_.mul(out, x)
    return out


def truncate(M: LinearMatroid, k: int, mode: str = "certified", allow_symbolic: bool = False,
             seed: int = 0) -> LinearMatroid:
    """k-truncation of M as a linear matroid with min(k, r(M)) rows.

    mode:
      certified   evaluate the matrix (x^(i*j)) at x = 1, 2, ... and keep the
                  first point that is verified to preserve every independent
                  k-set; falls back to ``symbolic`` when allowed and the field
                  runs out of points.
      symbolic    keep x as an indeterminate; the result lives over base(x).
      randomized  seeded random entries, no verification.
    """
    if k < 1:
        raise MatroidError("truncation needs k >= 1")
    R = M.reduced()
    r = R.rank_total
    if r <= k:
        return R
    A = R.matrix
    F = M.field
    if mode == "randomized":
        rng = random.Random(seed)
        if isinstance(F, GF):
            rows = [[rng.randrange(F.p) for _ in range(r)] for _ in range(k)]
        else:
            bound = 2 ** 20
            rows = [[rng.randrange(-bound, bound) for _ in range(r)] for _ in range(k)]
        return LinearMatroid(M.ground, _apply(F, rows, A))
    if mode == "symbolic":
        return _truncate_symbolic(M, R, k)
    if mode != "certified":
        raise MatroidError(f"unknown truncation mode {mode!r}")
    reps = _parallel_representatives(R)
    limit = F.size()
    x = 1
    while limit is None or x < limit:
        A2 = _apply(F, _power_rows(F, F(x), k, r), A)
        if _preserves(R, A2, k, reps):
            return LinearMatroid(M.ground, A2, k)
        x += 1
    if allow_symbolic:
        return _truncate_symbolic(M, R, k)
    raise TruncationError(f"no certified evaluation point in {F}; enable the symbolic fallback")


def _truncate_symbolic(M, R, k):
    F = M.field
    if isinstance(F, RationalFunctions):
        raise MatroidError("already symbolic")
    K = RationalFunctions(F)
    r = R.rank_total
    rows = [[K.monomial(i * j) for j in range(r)] for i in range(1, k + 1)]
    A = ExactMatrix.from_rows(K, [[K(x) for x in row] for row in R.matrix.to_rows()], R.matrix.cols)
    Bm = ExactMatrix.from_rows(K, rows, r)
    return LinearMatroid(M.ground, Bm.matmul(A), k)


def truncated_for(M: LinearMatroid, k: int, randomized=False, seed=0) -> LinearMatroid:
    """Truncation as used by solvers: certified, symbolic when the field is too small."""
    if randomized:
        return truncate(M, k, mode="randomized", seed=seed)
    return truncate(M, k, mode="certified", allow_symbolic=True)


# ---------------------------------------------------------------------------
# representative families


def wedge_vector(Mt: LinearMatroid, X: Sequence) -> list:
    cols = [Mt.vector(v) for v in X]
    return minors_vector(Mt.field, cols, Mt.matrix.rows)


def representative_family(Mt: LinearMatroid, family: Iterable, p: int, q: int) -> list:
    """A q-representative subfamily of a family of independent p-sets.

    Mt must have exactly p+q rows and rank p+q.  Members are returned as
    sorted tuples, in lexicographic order.
    """
    members = sorted({tuple(sorted(X)) for X in family})
    if not members:
        return []
    if Mt.matrix.rows != p + q or Mt.rank_total != p + q:
        raise MatroidError("rank mismatch: representation must have p+q rows and full rank")
    for X in members:
        if len(X) != p:
            raise MatroidError(f"member {X} has wrong size")
        if not Mt.is_independent(X):
            raise MatroidError(f"member {X} is not independent")
    bound = comb(p + q, p)
    if len(members) <= 1:
        return members
    vecs = [wedge_vector(Mt, X) for X in members]
    keep = basis_of_vectors(Mt.field, vecs, bound)
    return [members[i] for i in keep]


def extend_independent(M: LinearMatroid, I: Iterable, C: Iterable):
    I = sorted(set(I))
    if not M.is_independent(I):
        raise MatroidError("base set is not independent")
    Iset = set(I)
    for v in sorted(set(C) - Iset):
        if M.is_independent(I + [v]):
            return v
    return None


# ---------------------------------------------------------------------------
# axioms


def validate_axioms(ground_size: int, independents: Iterable) -> bool:
    """Exhaustive check of the three independence axioms on a tiny ground set."""
    fam = {frozenset(X) for X in independents}
    if ground_size > 5:
        raise MatroidError("ground set too large for exhaustive check")
    if frozenset() not in fam:
        return False
    for X in fam:
        for v in X:
            if X - {v} not in fam:
                return False
    for X in fam:
        for Y in fam:
            if len(X) < len(Y):
                if not any(X | {v} in fam for v in Y - X):
                    return False
    return True


def vandermonde_uniform(field_, k: int, ground: Sequence, nodes: Sequence | None = None) -> LinearMatroid:
    """U(k, n) via columns (1, a, a^2, ...) with distinct nodes a."""
    n = len(ground)
    if nodes is None:
        nodes = list(range(1, n + 1))
    cols = [[_fpow(field_, field_(a), e) for e in range(k)] for a in nodes]
    A = ExactMatrix.from_columns(field_, cols, k) if cols else ExactMatrix.zeros(field_, k, 0)
    return LinearMatroid(tuple(ground), A)
