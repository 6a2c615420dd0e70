from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import rationals
from extremal_lab.exact_poly import (
    DimensionError,
    Polynomial,
    PolyVectorField,
    as_rational,
    format_poly,
    grlex_key,
    mi_sub,
    multi_indices_up_to,
    vf_bracket,
    weighted_degree,
)

N = 3
exponents = st.tuples(*[st.integers(0, 3)] * N)
polys = st.dictionaries(exponents, rationals(), max_size=5).map(lambda d: Polynomial(N, d))
points = st.lists(rationals(), min_size=N, max_size=N)
fields = st.lists(polys, min_size=N, max_size=N).map(lambda cs: PolyVectorField(N, cs))


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Polynomial.zero(N)


@given(polys, polys, points)
def test_evaluation_is_a_ring_homomorphism(p, q, x):
    assert (p + q)(x) == p(x) + q(x)
    assert (p * q)(x) == p(x) * q(x)


@given(polys, polys, st.integers(1, N))
def test_partial_derivative_is_a_derivation(p, q, i):
    assert (p * q).partial(i) == p.partial(i) * q + p * q.partial(i)


@given(polys, st.integers(1, N))
def test_integrate_inverts_partial(p, i):
    F = p.integrate(i)
    assert F.partial(i) == p
    assert all(alpha[i - 1] > 0 for alpha in F.terms)


@given(polys, st.lists(polys, min_size=N, max_size=N), points)
def test_compose_then_evaluate(p, subs, x):
    val = p.compose(subs)
    val = val(x) if isinstance(val, Polynomial) else val
    assert val == p([s(x) for s in subs])


@given(polys)
def test_json_round_trip(p):
    assert Polynomial.from_json(p.to_json(), N) == p


@given(fields, fields, fields)
def test_vector_field_bracket_jacobi(X, Y, Z):
    total = vf_bracket(vf_bracket(X, Y), Z) + vf_bracket(vf_bracket(Y, Z), X) + vf_bracket(vf_bracket(Z, X), Y)
    assert total.is_zero()


@given(fields, fields, polys)
def test_bracket_acts_as_commutator(X, Y, f):
    assert vf_bracket(X, Y).apply(f) == X.apply(Y.apply(f)) - Y.apply(X.apply(f))
    assert vf_bracket(X, Y) == -vf_bracket(Y, X)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        Polynomial(2, {(1, 0): 0.5})


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        Polynomial.variable(2, 1) + Polynomial.variable(3, 1)


def test_format_and_weighted_degree():
    p = Polynomial(2, {(2, 0): Fraction(1, 2), (0, 1): -1})
    assert format_poly(p) == "-x2 + 1/2*x1^2"
    assert weighted_degree((1, 0, 2), (1, 1, 2)) == 5
    assert p.degree((1, 2)) == 2


def test_multi_index_helpers():
    assert sorted(multi_indices_up_to((1, 2), 2), key=grlex_key)[0] == (0, 0)
    assert len(multi_indices_up_to((1, 1), 2)) == 6
    with pytest.raises(ValueError):
        mi_sub((1, 0), (0, 1))
