"""Exact scalars and matrix elimination over prime fields, the rationals and
univariate rational-function fields.

Every routine here is deterministic: the pivot in column elimination is the
first nonzero entry scanning rows top-down, columns taken in the order given.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt
from typing import Any, Iterable, Sequence


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    m = max(n + 1, 2)
    while not is_prime(m):
        m += 1
    return m


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class GF:
    """Prime field Z/pZ; elements are ints in [0, p-1]."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"modulus {self.p} is not prime")

    kind = "prime"
    zero = 0
    one = 1

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def parse(self, token: str) -> int:
        if "/" in token:
            raise FieldError(f"fraction {token!r} in prime field")
        return int(token) % self.p

    def format(self, a) -> str:
        return str(a)

    def size(self):
        return self.p

    def __str__(self):
        return f"gfp {self.p}"


@dataclass(frozen=True)
class Rationals:
    """The field Q; elements are ``fractions.Fraction`` (lowest terms, positive
    denominator)."""

    kind = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return a / b

    def is_zero(self, a) -> bool:
        return a == 0

    def parse(self, token: str) -> Fraction:
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational {token!r}") from exc

    def format(self, a) -> str:
        a = Fraction(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def size(self):
        return None

    def __str__(self):
        return "rational"


QQ = Rationals()


# univariate polynomials: tuples of base-field coefficients, lowest degree
# first, no trailing zeros; () is the zero polynomial


def _ptrim(base, c):
    c = list(c)
    while c and base.is_zero(c[-1]):
        c.pop()
    return tuple(c)


def _padd(base, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else base.zero
        y = b[i] if i < len(b) else base.zero
        out.append(base.add(x, y))
    return _ptrim(base, out)


def _pneg(base, a):
    return tuple(base.neg(x) for x in a)


def _pmul(base, a, b):
    if not a or not b:
        return ()
    out = [base.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if base.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = base.add(out[i + j], base.mul(x, y))
    return _ptrim(base, out)


def _pdivmod(base, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [base.zero] * max(len(a) - len(b) + 1, 0)
    lead_inv = base.inv(b[-1])
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = base.mul(a[-1], lead_inv)
        q[shift] = f
        for j, y in enumerate(b):
            a[shift + j] = base.sub(a[shift + j], base.mul(f, y))
        a = list(_ptrim(base, a))
    return _ptrim(base, q), tuple(a)


def _pmonic(base, a):
    if not a:
        return a, base.one
    lead = a[-1]
    inv = base.inv(lead)
    return tuple(base.mul(x, inv) for x in a), lead


def _pgcd(base, a, b):
    while b:
        _, r = _pdivmod(base, a, b)
        a, b = b, r
    return _pmonic(base, a)[0]


@dataclass(frozen=True)
class RatFunc:
    num: tuple
    den: tuple


@dataclass(frozen=True)
class RationalFunctions:
    """The field base(x) of univariate rational functions.

    Elements are ``RatFunc`` pairs kept in canonical form: monic denominator,
    numerator and denominator coprime, zero is ``((), (1,))``.  Used only for
    symbolic truncation; never appears in instance files.
    """

    base: Any

    kind = "function"

    @property
    def zero(self):
        return RatFunc((), (self.base.one,))

    @property
    def one(self):
        return RatFunc((self.base.one,), (self.base.one,))

    def _make(self, num, den):
        b = self.base
        if not num:
            return self.zero
        g = _pgcd(b, num, den)
        if len(g) > 1:
            num, _ = _pdivmod(b, num, g)
            den, _ = _pdivmod(b, den, g)
        den, lead = _pmonic(b, den)
        inv = b.inv(lead)
        num = tuple(b.mul(x, inv) for x in num)
        return RatFunc(num, den)

    def __call__(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        c = self.base(x)
        return RatFunc(_ptrim(self.base, (c,)), (self.base.one,))

    def poly(self, coeffs: Sequence) -> RatFunc:
        return RatFunc(_ptrim(self.base, [self.base(c) for c in coeffs]), (self.base.one,))

    def monomial(self, degree: int, coeff=None) -> RatFunc:
        b = self.base
        c = b.one if coeff is None else b(coeff)
        return self.poly([b.zero] * degree + [c])

    def add(self, a, c):
        b = self.base
        if a.den == c.den:
            return self._make(_padd(b, a.num, c.num), a.den)
        num = _padd(b, _pmul(b, a.num, c.den), _pmul(b, c.num, a.den))
        return self._make(num, _pmul(b, a.den, c.den))

    def neg(self, a):
        return RatFunc(_pneg(self.base, a.num), a.den)

    def sub(self, a, c):
        return self.add(a, self.neg(c))

    def mul(self, a, c):
        b = self.base
        if not a.num or not c.num:
            return self.zero
        return self._make(_pmul(b, a.num, c.num), _pmul(b, a.den, c.den))

    def inv(self, a):
        if not a.num:
            raise ZeroDivisionError("division by zero in rational functions")
        return self._make(a.den, a.num)

    def div(self, a, c):
        return self.mul(a, self.inv(c))

    def is_zero(self, a) -> bool:
        return not a.num

    def format(self, a) -> str:
        def fmt(p):
            return "[" + ",".join(self.base.format(x) for x in p) + "]"

        if a.den == (self.base.one,):
            return fmt(a.num)
        return fmt(a.num) + "/" + fmt(a.den)

    def parse(self, token):
        raise FieldError("rational-function scalars are not serialisable")

    def size(self):
        return None

    def __str__(self):
        return f"function({self.base})"


def parse_field(spec: str):
    """Parse ``"gfp <p>"`` or ``"rational"``."""
    parts = spec.split()
    if parts == ["rational"]:
        return QQ
    if len(parts) == 2 and parts[0] == "gfp":
        try:
            p = int(parts[1])
        except ValueError as exc:
            raise FieldError(f"bad modulus {parts[1]!r}") from exc
        return GF(p)
    raise FieldError(f"unknown field {spec!r}")


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple
    field: Any

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length does not match shape")

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        entries = tuple(field(x) for r in rows for x in r)
        return cls(len(rows), cols, entries, field)

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence], rows: int | None = None):
        columns = [list(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows(field, [[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(rows, cols, (field.zero,) * (rows * cols), field)

    @classmethod
    def identity(cls, field, n):
        return cls.from_rows(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def select_columns(self, cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix.from_columns(self.field, [self.column(j) for j in cols], self.rows)

    def select_rows(self, rows: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix.from_rows(self.field, [self.row(i) for i in rows], self.cols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_rows(self.field, [self.column(j) for j in range(self.cols)], self.rows)

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        F = self.field
        out = []
        for i in range(self.rows):
            r = self.row(i)
            line = []
            for j in range(other.cols):
                acc = F.zero
                for t in range(self.cols):
                    if not F.is_zero(r[t]):
                        acc = F.add(acc, F.mul(r[t], other[t, j]))
                line.append(acc)
            out.append(line)
        return ExactMatrix(self.rows, other.cols, tuple(x for r in out for x in r), F)

    def __str__(self):
        return "\n".join(" ".join(self.field.format(x) for x in self.row(i)) for i in range(self.rows))


# ---------------------------------------------------------------------------
# elimination


class ColumnEchelon:
    """Incremental column-by-column elimination.

    Columns are fed one at a time; each is reduced against the stored pivots
    (in insertion order) and kept iff a nonzero entry survives, whose first
    occurrence top-down becomes its pivot row.  This is Gaussian elimination
    with the fixed pivot rule, phrased so that rank and basis extraction are
    one pass.
    """

    def __init__(self, field, length: int):
        self.field = field
        self.length = length
        self.pivots: list[tuple[int, list]] = []

    def reduce(self, vec) -> list:
        F = self.field
        v = list(vec)
        for prow, b in self.pivots:
            c = v[prow]
            if F.is_zero(c):
                continue
            for i in range(self.length):
                if not F.is_zero(b[i]):
                    v[i] = F.sub(v[i], F.mul(c, b[i]))
        return v

    def add(self, vec) -> bool:
        F = self.field
        v = self.reduce(vec)
        for i, x in enumerate(v):
            if not F.is_zero(x):
                inv = F.inv(x)
                v = [F.mul(inv, y) for y in v]
                # keep stored pivots reduced in the new pivot row as well
                for _, b in self.pivots:
                    c = b[i]
                    if not F.is_zero(c):
                        for t in range(self.length):
                            if not F.is_zero(v[t]):
                                b[t] = F.sub(b[t], F.mul(c, v[t]))
                self.pivots.append((i, v))
                return True
        return False

    def contains(self, vec) -> bool:
        F = self.field
        return all(F.is_zero(x) for x in self.reduce(vec))

    @property
    def rank(self):
        return len(self.pivots)


def _gfp_column_rank(p: int, columns: list[list[int]], length: int) -> list[int]:
    """Fast path for prime fields; returns indices of kept columns."""
    pivots: list[tuple[int, list[int]]] = []
    kept = []
    for idx, col in enumerate(columns):
        v = [x % p for x in col]
        for prow, b in pivots:
            c = v[prow]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, b)]
        for i, x in enumerate(v):
            if x:
                inv = pow(x, p - 2, p)
                v = [(y * inv) % p for y in v]
                pivots = [(pr, [(y - bb[i] * z) % p for y, z in zip(bb, v)]) if bb[i] else (pr, bb)
                          for pr, bb in pivots]
                pivots.append((i, v))
                kept.append(idx)
                break
    return kept


def _bareiss_rank(int_columns: list[list[int]], length: int) -> int:
    """Fraction-free elimination over Z on the given integer columns."""
    ncols = len(int_columns)
    # work on rows x cols layout
    a = [[int_columns[j][i] for j in range(ncols)] for i in range(length)]
    rank = 0
    prev = 1
    prow = 0
    for c in range(ncols):
        if prow >= length:
            break
        piv = None
        for i in range(prow, length):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != prow:
            a[prow], a[piv] = a[piv], a[prow]
        pv = a[prow][c]
        for i in range(prow + 1, length):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, ncols):
                ai[j] = (pv * ai[j] - f * a[prow][j]) // prev
            ai[c] = 0
        prev = pv
        prow += 1
        rank += 1
    return rank


def _all_polynomial(F, columns) -> bool:
    one = (F.base.one,)
    return all(x.den == one for c in columns for x in c)


def _poly_bareiss(base, rows: list[list[tuple]], ncols: int, det_mode=False):
    """Fraction-free elimination over base[x]; rows hold polynomial tuples.

    Returns the rank, or the determinant polynomial when ``det_mode``.
    """
    a = [list(r) for r in rows]
    length = len(a)
    prev = (base.one,)
    prow = 0
    sign = 1
    for c in range(ncols):
        if prow >= length:
            break
        piv = None
        for i in range(prow, length):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            if det_mode:
                return ()
            continue
        if piv != prow:
            a[prow], a[piv] = a[piv], a[prow]
            sign = -sign
        pv = a[prow][c]
        top = a[prow]
        for i in range(prow + 1, length):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, ncols):
                num = _padd(base, _pmul(base, pv, ai[j]), _pneg(base, _pmul(base, f, top[j])))
                ai[j], _ = _pdivmod(base, num, prev) if num else ((), ())
            ai[c] = ()
        prev = pv
        prow += 1
    if det_mode:
        d = a[length - 1][ncols - 1] if length else (base.one,)
        return d if sign > 0 else _pneg(base, d)
    return prow


def _integer_columns(columns):
    out = []
    for col in columns:
        m = 1
        for x in col:
            m = m * x.denominator // gcd(m, x.denominator)
        out.append([int(x * m) for x in col])
    return out


def mat_rank(A: ExactMatrix, cols: Iterable[int] | None = None) -> int:
    """Rank of the submatrix formed by the chosen columns (all if ``None``)."""
    cols = list(range(A.cols)) if cols is None else list(cols)
    for j in cols:
        if not 0 <= j < A.cols:
            raise IndexError(f"column {j} out of range")
    if not cols or A.rows == 0:
        return 0
    F = A.field
    columns = [A.column(j) for j in cols]
    if isinstance(F, GF):
        return len(_gfp_column_rank(F.p, columns, A.rows))
    if isinstance(F, Rationals):
        return _bareiss_rank(_integer_columns(columns), A.rows)
    if isinstance(F, RationalFunctions) and _all_polynomial(F, columns):
        rows = [[c[i].num for c in columns] for i in range(A.rows)]
        return _poly_bareiss(F.base, rows, len(columns))
    ech = ColumnEchelon(F, A.rows)
    return sum(1 for c in columns if ech.add(c))


def mat_rank_ordinary(A: ExactMatrix, cols: Iterable[int] | None = None) -> int:
    """Same as ``mat_rank`` but always through ordinary field elimination."""
    cols = list(range(A.cols)) if cols is None else list(cols)
    ech = ColumnEchelon(A.field, A.rows)
    return sum(1 for j in cols if ech.add(A.column(j)))


def mat_rank_rowwise(A: ExactMatrix, cols: Iterable[int] | None = None) -> int:
    """Rank by row reduction of the selected submatrix (rows are the vectors).

    Independent of the column-order routine; used as a cross-check.
    """
    cols = list(range(A.cols)) if cols is None else list(cols)
    if not cols:
        return 0
    F = A.field
    width = len(cols)
    m = [[A[i, j] for j in cols] for i in range(A.rows)]
    rank = 0
    for c in range(width):
        piv = None
        for i in range(rank, len(m)):
            if not F.is_zero(m[i][c]):
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = F.inv(m[rank][c])
        m[rank] = [F.mul(inv, x) for x in m[rank]]
        for i in range(len(m)):
            if i != rank and not F.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def mat_basis_columns(A: ExactMatrix, cols: Iterable[int] | None = None) -> list[int]:
    """Greedy left-to-right basis: keep a column iff it raises the rank."""
    cols = list(range(A.cols)) if cols is None else list(cols)
    F = A.field
    columns = [A.column(j) for j in cols]
    if isinstance(F, GF):
        return [cols[i] for i in _gfp_column_rank(F.p, columns, A.rows)]
    ech = ColumnEchelon(F, A.rows)
    return [j for j, c in zip(cols, columns) if ech.add(c)]


def basis_of_vectors(field, vectors: Sequence[Sequence], length: int) -> list[int]:
    """Indices of the greedy left-to-right basis of a list of vectors."""
    if isinstance(field, GF):
        return _gfp_column_rank(field.p, [list(v) for v in vectors], length)
    ech = ColumnEchelon(field, length)
    return [i for i, v in enumerate(vectors) if ech.add(v)]


def vectors_rank(field, vectors: Sequence[Sequence], length: int) -> int:
    if not vectors or length == 0:
        return 0
    if isinstance(field, GF):
        return len(_gfp_column_rank(field.p, [list(v) for v in vectors], length))
    if isinstance(field, Rationals):
        return _bareiss_rank(_integer_columns(vectors), length)
    if isinstance(field, RationalFunctions) and _all_polynomial(field, vectors):
        rows = [[v[i].num for v in vectors] for i in range(length)]
        return _poly_bareiss(field.base, rows, len(vectors))
    ech = ColumnEchelon(field, length)
    return sum(1 for v in vectors if ech.add(v))


def determinant(field, rows: Sequence[Sequence]) -> Any:
    """Determinant of a square matrix given as a list of rows."""
    n = len(rows)
    if n == 0:
        return field.one
    F = field
    if isinstance(F, RationalFunctions) and _all_polynomial(F, rows):
        d = _poly_bareiss(F.base, [[x.num for x in r] for r in rows], n, det_mode=True)
        return RatFunc(d, (F.base.one,))
    m = [list(r) for r in rows]
    det = F.one
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not F.is_zero(m[i][c]):
                piv = i
                break
        if piv is None:
            return F.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = F.neg(det)
        pv = m[c][c]
        det = F.mul(det, pv)
        inv = F.inv(pv)
        for i in range(c + 1, n):
            f = m[i][c]
            if F.is_zero(f):
                continue
            f = F.mul(f, inv)
            m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[c])]
    return det


def minors_vector(field, columns: Sequence[Sequence], nrows: int) -> list:
    """All p x p minors of the nrows x p matrix with the given columns, one per
    p-subset of rows in lexicographic order."""
    p = len(columns)
    out = []
    for rows in combinations(range(nrows), p):
        out.append(determinant(field, [[col[i] for col in columns] for i in rows]))
    return out


def row_space_basis(A: ExactMatrix) -> ExactMatrix:
    """Keep the greedy-first linearly independent rows of A.

    The column matroid is unchanged and the result has exactly rank(A) rows.
    """
    keep = mat_basis_columns(A.transpose())
    return A.select_rows(keep)
