import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import group, polys, rationals
from extremal_lab.exact_poly import Polynomial, weighted_degree
from extremal_lab.extremal_polys import (
    ExtremalPolynomial,
    abnormal_variety_generators,
    check_derivative_identity,
    degree_bound_holds,
    extremal_polynomial,
    goh_variety_generators,
    nontriviality_report,
    specialize_v,
)
from extremal_lab.fixtures.golden import ERRATA

GROUPS = [(2, 3), (2, 4), (2, 5), (3, 3)]


def covectors(n):
    return st.lists(rationals(), min_size=n, max_size=n)


@pytest.mark.parametrize("rs", GROUPS + [(3, 4)])
def test_degree_bound(rs):
    ctx = group(*rs)
    assert all(degree_bound_holds(ctx, ep) for ep in polys(*rs))


@given(st.sampled_from(GROUPS), st.data())
def test_value_at_origin_is_v_i(rs, data):
    ctx = group(*rs)
    v = data.draw(covectors(ctx.n))
    i = data.draw(st.integers(1, ctx.n))
    assert specialize_v(polys(*rs)[i - 1], v)([0] * ctx.n) == v[i - 1]


@given(st.sampled_from(GROUPS), st.data())
def test_linear_in_v(rs, data):
    ctx = group(*rs)
    v, w = data.draw(covectors(ctx.n)), data.draw(covectors(ctx.n))
    a = data.draw(rationals())
    ep = polys(*rs)[data.draw(st.integers(1, ctx.n)) - 1]
    combo = [a * x + y for x, y in zip(v, w)]
    assert specialize_v(ep, combo) == specialize_v(ep, v).scale(a) + specialize_v(ep, w)


@pytest.mark.parametrize("rs", [(2, 4), (3, 3)])
def test_derivative_identity_sweep(rs):
    ctx = group(*rs)
    P = polys(*rs)
    assert all(check_derivative_identity(ctx, i, j, P) for i in range(1, ctx.n + 1) for j in range(1, ctx.n + 1))


def test_derivative_identity_detects_tampering(g24):
    P = list(polys(2, 4))
    bad = dict(P[3].table)
    key = next(iter(bad))
    bad[key] += 1
    P[3] = ExtremalPolynomial(4, g24.n, bad)
    assert not all(check_derivative_identity(g24, i, j, P) for i in range(1, 3) for j in range(1, g24.n + 1))


@given(st.sampled_from(GROUPS), st.data())
def test_nontriviality(rs, data):
    ctx = group(*rs)
    v = data.draw(covectors(ctx.n))
    rep = nontriviality_report(ctx, v, polys(*rs))
    assert rep.consistent
    if any(v):
        assert rep.nonzero_generators


def test_json_round_trip(g24):
    ep = extremal_polynomial(g24, 3)
    assert ExtremalPolynomial.from_json(3, ep.to_json()).table == ep.table


def test_varieties(g24):
    v = [0] * 8
    v[4] = v[5] = 1
    gens = goh_variety_generators(g24, v)
    assert len(gens) == 3
    assert gens[2] == Polynomial(8, {(2,) + (0,) * 7: Fraction(1, 2), (0, 1) + (0,) * 6: -1})
    with pytest.raises(ValueError):
        goh_variety_generators(g24, [1] + [0] * 7)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        abnormal_variety_generators(g24, [0] * 8)
    assert caught


def test_misprint_justifications():
    ctx = group(2, 6)
    # the printed v_18 monomial x_1 x_3^2 would break the degree bound for P_3
    alpha = (1, 0, 2) + (0,) * 20
    assert weighted_degree(alpha, ctx.degrees) == 5 > ctx.s - ctx.degrees[2]
    assert ERRATA["R2S6_P3"]["add"][0][2] == {1: 1, 2: 3}
    # X_27, X_28 are Hall elements descending from X_6, so their slots in P_6 cannot vanish
    b = group(3, 4).basis
    assert b.precedes(6, 27) and b.precedes(6, 28)
    ep = extremal_polynomial(group(3, 4), 6)
    assert not ep.slice(27).is_zero() and not ep.slice(28).is_zero()
