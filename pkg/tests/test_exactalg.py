from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rankpath.exactalg import (
    GF, QQ, ExactMatrix, FieldError, RationalFunctions, determinant, is_prime, mat_basis_columns,
    mat_rank, mat_rank_rowwise, next_prime, parse_field,
)


def test_primes():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert next_prime(10) == 11
    assert next_prime(11) == 13
    assert next_prime(1) == 2


def test_field_parsing():
    assert parse_field("gfp 7") == GF(7)
    assert parse_field("rational") is QQ
    with pytest.raises(FieldError):
        parse_field("gfp 8")
    with pytest.raises(FieldError):
        parse_field("reals")


def test_gf_arithmetic():
    F = GF(7)
    assert F.mul(3, 5) == 1
    assert F.inv(3) == 5
    assert F.div(1, 3) == 5
    assert F(Fraction(1, 2)) == 4
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_rational_format():
    assert QQ.format(QQ.parse("3/6")) == "1/2"
    assert QQ.format(QQ.parse("-4/2")) == "-2"


def test_rank_identity():
    A = ExactMatrix.identity(GF(5), 3)
    assert mat_rank(A, [0, 1, 2]) == 3
    assert mat_rank(A, []) == 0


def test_rank_dependent_columns():
    A = ExactMatrix.from_columns(QQ, [[1, 0], [0, 1], [1, 1]])
    assert mat_rank(A, [0, 1, 2]) == 2


def test_basis_columns():
    assert mat_basis_columns(ExactMatrix.identity(QQ, 3)) == [0, 1, 2]
    A = ExactMatrix.from_columns(QQ, [[1, 0], [2, 0], [0, 1]])
    assert mat_basis_columns(A) == [0, 2]
    assert mat_basis_columns(ExactMatrix.zeros(QQ, 2, 3)) == []


def test_rational_function_determinant():
    Fx = RationalFunctions(GF(5))
    x = Fx.monomial(1)
    one = Fx.one
    # det [[1, x], [x, 1]] = 1 - x^2
    d = determinant(Fx, [[one, x], [x, one]])
    assert Fx.is_zero(Fx.sub(d, Fx.poly([1, 0, 4])))


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=150, deadline=None)
@given(matrices, st.sampled_from([GF(2), GF(3), GF(101), QQ]))
def test_rank_matches_rowwise_elimination(rows, fld):
    if fld is not QQ:
        rows = [[x % fld.p for x in row] for row in rows]
    A = ExactMatrix.from_rows(fld, rows)
    assert mat_rank(A) == mat_rank_rowwise(A)
    assert mat_rank(A) == mat_rank(A.transpose())
    assert mat_rank(A) <= min(A.rows, A.cols)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_of_basis_columns(rows):
    A = ExactMatrix.from_rows(QQ, rows)
    basis = mat_basis_columns(A)
    assert len(basis) == mat_rank(A) == mat_rank(A, basis)
