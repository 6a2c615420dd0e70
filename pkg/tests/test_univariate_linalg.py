from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from conftest import coeff_lists, rationals
from extremal_lab.linalg import in_span, nullspace, rank, solve_affine, solve_square
from extremal_lab.univariate import UPoly, count_roots, isolate_roots, rational_roots, upoly_gcd

upolys = coeff_lists(4).map(UPoly)


@given(upolys, upolys, upolys, rationals())
def test_upoly_ring_and_evaluation(p, q, r, t):
    assert p * (q + r) == p * q + p * r
    assert (p * q)(t) == p(t) * q(t)
    assert p.compose(q)(t) == p(q(t))


@given(upolys, upolys)
def test_division_identity(p, q):
    assume(not q.is_zero())
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


@given(upolys, upolys, upolys)
def test_gcd_divides_both(p, q, c):
    assume(not c.is_zero() and c.degree >= 1)
    g = upoly_gcd(p * c, q * c)
    assert (p * c) % g == UPoly() and (q * c) % g == UPoly()
    assert (g % c.monic()).is_zero()


@given(upolys, rationals())
def test_integral_from(p, a):
    F = p.integral_from(a)
    assert F(a) == 0 and F.deriv() == p


def test_sturm_counts_and_isolation():
    half = UPoly((Fraction(-1, 2), 1))
    p = half * UPoly((-2, 0, 1)) * half   # (t - 1/2)^2 (t^2 - 2)
    assert count_roots(p, 0, 1) == 1
    assert count_roots(p, 0, 2) == 2
    assert count_roots(p, -2, 2) == 3
    assert rational_roots(p) == [Fraction(1, 2)]
    roots = isolate_roots(p, 0, 2)
    assert roots[0] == (Fraction(1, 2), Fraction(1, 2))
    lo, hi = roots[1]
    assert lo < Fraction(14142136, 10 ** 7) and hi > Fraction(14142135, 10 ** 7)
    assert count_roots(UPoly((1, 0, 1)), -10, 10) == 0
    with pytest.raises(ValueError):
        count_roots(UPoly(), 0, 1)


def test_root_at_interval_endpoint():
    assert count_roots(UPoly((0, 1)), 0, 1) == 1
    assert count_roots(UPoly((-1, 1)), 0, 1) == 1


matrices = st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(rationals(3, 3), min_size=c, max_size=c), min_size=0, max_size=4).map(lambda rows: (rows, c))
)


@given(matrices)
def test_nullspace_is_kernel_of_right_dimension(data):
    rows, c = data
    basis = nullspace(rows, c)
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)
    assert len(basis) == c - rank(rows, c)


@given(matrices, st.lists(rationals(3, 3), min_size=4, max_size=4))
def test_solve_affine(data, x):
    rows, c = data
    x = x[:c]
    b = [sum(a * v for a, v in zip(row, x)) for row in rows]
    sol = solve_affine(rows, b, c)
    assert sol is not None
    assert [sum(a * v for a, v in zip(row, sol)) for row in rows] == b


def test_inconsistent_and_singular_systems():
    assert solve_affine([[1, 1], [2, 2]], [1, 3], 2) is None
    with pytest.raises(ZeroDivisionError):
        solve_square([[1, 1], [2, 2]], [1, 2])
    assert in_span([2, 4], [[1, 2]]) and not in_span([1, 0], [[1, 2]])
    assert in_span([0, 0], []) and not in_span([1, 0], [])
