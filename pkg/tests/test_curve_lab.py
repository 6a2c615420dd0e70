import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import coeff_lists, group, polys, rationals
from extremal_lab.curve_lab import (
    NORMAL_CAPABLE,
    STRICT_CANDIDATE,
    ControlLaw,
    CurvePiece,
    DualCurve,
    adjoint_integrate,
    check_development,
    classify,
    common_zeros,
    develop,
    extremal_along,
    find_abnormal_covectors,
    find_goh_covectors,
    length,
    normal_shoot,
    regular_abnormal_indicator,
    strictness_check,
    theta_frame_check,
    verify_master_identity,
)
from extremal_lab.linalg import in_span
from extremal_lab.selftest import random_control_law
from extremal_lab.univariate import UPoly

GROUPS = [(2, 3), (2, 4), (3, 3)]
T = UPoly.t()


def control_laws(r, max_pieces=2):
    @st.composite
    def build(draw):
        k = draw(st.integers(1, max_pieces))
        cuts = sorted(set(draw(st.lists(st.integers(1, 7), min_size=k - 1, max_size=k - 1))))
        bounds = [Fraction(0)] + [Fraction(c, 8) for c in cuts] + [Fraction(1)]
        return ControlLaw.from_pieces([(a, b, [draw(coeff_lists()) for _ in range(r)]) for a, b in zip(bounds, bounds[1:])])

    return build()


def test_develop_examples(g24, g34):
    line = develop(g24, ControlLaw.polynomial([1], [0]))
    assert [str(q) for q in line.pieces[0].values] == ["t"] + ["0"] * 7
    gk = develop(group(2, 2), ControlLaw.polynomial([1], [0, 1]))
    assert gk.pieces[0].values == (T, T * T * Fraction(1, 2), T * T * T * Fraction(-1, 3))
    phi_dot = [1, -4, 1]
    corner = develop(g34, ControlLaw.polynomial([0, 2], [1], phi_dot))
    assert corner.pieces[0].values[:3] == (T * T, T, UPoly(phi_dot).antideriv())


@given(st.sampled_from(GROUPS), st.data())
def test_development_is_horizontal(rs, data):
    ctx = group(*rs)
    curve = develop(ctx, data.draw(control_laws(ctx.r)))
    assert check_development(ctx, curve)


@given(st.sampled_from(GROUPS), st.data())
def test_master_identity(rs, data):
    ctx = group(*rs)
    curve = develop(ctx, data.draw(control_laws(ctx.r)))
    v0 = data.draw(st.lists(rationals(), min_size=ctx.n, max_size=ctx.n))
    dual = adjoint_integrate(ctx, curve, v0)
    assert dual.at(0) == [Fraction(x) for x in v0]
    assert verify_master_identity(ctx, curve, v0, polys=polys(*rs), dual=dual)


def test_master_identity_detects_wrong_dual(g24):
    curve = develop(g24, ControlLaw.polynomial([1, 2], [0, 1]))
    v0 = list(range(1, 9))
    other = adjoint_integrate(g24, curve, [1, 2, 3, 4, 5, 6, 7, 9])
    assert not verify_master_identity(g24, curve, v0, dual=other)


def test_trivial_duals(g24):
    curve = develop(g24, ControlLaw.polynomial([3], [1, 1]))
    dual = adjoint_integrate(g24, curve, [0] * 8)
    assert all(q.is_zero() for q in dual.pieces[0].values)
    still = develop(g24, ControlLaw.polynomial([0], [0]))
    v0 = [Fraction(k, 3) for k in range(8)]
    assert adjoint_integrate(g24, still, v0).at(Fraction(1, 2)) == v0
    assert verify_master_identity(g24, still, v0)


def test_abnormal_examples():
    heis = group(2, 2)
    assert find_abnormal_covectors(heis, develop(heis, ControlLaw.polynomial([1], [0, 1]))) == []
    assert find_goh_covectors(heis, develop(heis, ControlLaw.polynomial([1], [0]))) == []
    g = group(2, 4)
    still = develop(g, ControlLaw.polynomial([0], [0]))
    basis = find_abnormal_covectors(g, still)
    assert len(basis) == g.n - g.r
    assert all(v[0] == 0 and v[1] == 0 for v in basis)


@pytest.mark.parametrize("step", [4, 5])
def test_gole_karidi_curve(step):
    ctx = group(2, step)
    curve = develop(ctx, ControlLaw.polynomial([1], [0, 1]))
    v = [0] * ctx.n
    v[4] = v[5] = 1
    assert in_span(v, find_abnormal_covectors(ctx, curve))
    assert in_span(v, find_goh_covectors(ctx, curve))
    rep = strictness_check(ctx, curve)
    assert rep.verdict == STRICT_CANDIDATE and rep.witnesses == {1: None, -1: None}
    ind = regular_abnormal_indicator(ctx, curve, v)
    assert not ind.common_zero
    lam5 = extremal_along(ctx, curve, v, indices=[5])[0][0]
    assert lam5 == UPoly.const(1)


def test_strictness_of_lines():
    heis = group(2, 2)
    rep = strictness_check(heis, develop(heis, ControlLaw.polynomial([1], [0])))
    assert rep.verdict == NORMAL_CAPABLE
    assert rep.witnesses[1][:2] == (1, 0) and rep.witnesses[-1][:2] == (-1, 0)
    still = strictness_check(heis, develop(heis, ControlLaw.polynomial([0], [0])))
    assert still.verdict == NORMAL_CAPABLE


@given(st.sampled_from([(2, 3), (2, 4)]), st.data())
def test_corank_dominates_goh(rs, data):
    ctx = group(*rs)
    curve = develop(ctx, data.draw(control_laws(ctx.r, 1)))
    c = classify(ctx, curve, polys(*rs))
    assert c.corank >= len(c.goh_basis)
    assert all(in_span(v, c.abnormal_basis) for v in c.goh_basis)


@given(st.lists(rationals(3, 2), min_size=1, max_size=2))
def test_variety_membership_survives_time_change(tail):
    ctx = group(2, 4)
    law = ControlLaw.polynomial([1], [0, 1])
    tau = UPoly([0, 1] + tail)
    v = [0] * 8
    v[4] = v[5] = 1
    moved = develop(ctx, law.time_change(tau))
    assert all(q.is_zero() for piece in extremal_along(ctx, moved, v, indices=[1, 2, 3]) for q in piece)
    for t in (Fraction(1, 3), Fraction(1, 2)):
        s = tau(t)
        if 0 <= s <= 1:
            assert moved.at(t) == develop(ctx, law).at(s)


def test_theta_frame_check(g23):
    rng = random.Random(5)
    law = random_control_law(rng, 2, pieces=2)
    curve = develop(g23, law)
    v0 = [Fraction(rng.randint(-4, 4), 3) for _ in range(g23.n)]
    dual = adjoint_integrate(g23, curve, v0)
    assert theta_frame_check(g23, curve, v0, samples=10, dual=dual)
    # a dual curve from another v0 is still a dual curve, so the negative
    # control shifts a single coupled component without re-integrating
    bent = tuple(
        CurvePiece(p.t0, p.t1, p.values[:3] + (p.values[3] + Fraction(1, 7),) + p.values[4:])
        for p in dual.pieces
    )
    assert not theta_frame_check(g23, curve, v0, samples=10, dual=DualCurve(bent, dual.v0))
    still = develop(g23, ControlLaw.polynomial([0], [0]))
    assert theta_frame_check(g23, still, v0, samples=3)


def test_length():
    assert length(ControlLaw.polynomial([1], [0])) == 1
    assert length(ControlLaw.polynomial([0], [0])) == 0
    assert math.isclose(length(ControlLaw.polynomial([1], [0, 1])), math.sqrt(4 / 3))
    split = ControlLaw.from_pieces([(0, Fraction(1, 2), [[1], [0]]), (Fraction(1, 2), 1, [[0], [1]])])
    assert length(split) == 1


def test_normal_shoot_line_and_rest(g24):
    line = normal_shoot(g24, [-1] + [0] * 7, T=1.0, dt=1e-2)
    assert np.allclose(line.path[-1], [1] + [0] * 7)
    assert line.drift == 0
    rest = normal_shoot(g24, [0] * 8, dt=1e-2)
    assert not rest.path.any()
    with pytest.raises(ValueError):
        normal_shoot(g24, [0] * 8, dt=0)


def test_common_zero_detection():
    half = UPoly((Fraction(-1, 2), 1))
    rep = common_zeros([(Fraction(0), Fraction(1), [half, UPoly()])])
    assert rep.common_zero and rep.exact_zeros == [Fraction(1, 2)]
    none = common_zeros([(Fraction(0), Fraction(1), [UPoly.const(1), half])])
    assert not none.common_zero
    everywhere = common_zeros([(Fraction(0), Fraction(1), [UPoly(), UPoly()])])
    assert everywhere.identically_zero and everywhere.common_zero
    irrational = common_zeros([(Fraction(0), Fraction(1), [UPoly((-1, 0, 2))])])
    assert irrational.intervals and not irrational.exact_zeros


def test_indicator_with_zero_covector(g24):
    curve = develop(g24, ControlLaw.polynomial([1], [0, 1]))
    assert regular_abnormal_indicator(g24, curve, [0] * 8).identically_zero
    with pytest.raises(ValueError):
        regular_abnormal_indicator(group(3, 3), develop(group(3, 3), ControlLaw.polynomial([1], [0], [0])), [0] * 14)


def test_control_law_validation_and_json():
    with pytest.raises(ValueError):
        ControlLaw.from_pieces([(0, Fraction(1, 2), [[1], [0]])])
    with pytest.raises(ValueError):
        ControlLaw.from_pieces([(0, Fraction(1, 2), [[1], [0]]), (Fraction(1, 3), 1, [[1], [0]])])
    with pytest.raises(ValueError):
        ControlLaw.from_pieces([(0, 1, [[1], [0]]), (1, 1, [[1], [0]])])
    law = ControlLaw.from_pieces([(0, Fraction(1, 3), [[1, 2], [0]]), (Fraction(1, 3), 1, [["-1/2"], [3]])])
    assert ControlLaw.from_json(law.to_json()) == law
    assert law.at(Fraction(1, 3)) == [Fraction(-1, 2), 3]
