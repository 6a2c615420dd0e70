from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from conftest import group
from extremal_lab.exact_poly import Polynomial, PolyVectorField, multi_indices_up_to, vf_bracket
from extremal_lab.gg_realization import (
    ResidualError,
    build_group,
    check_exponential_coordinates,
    check_flow,
    check_rr_identity,
    generalized_structure_constants,
    grading_violations,
    gsc_by_fields,
    jacobi_violations,
    symbolic_flow,
    write_cache,
)
from extremal_lab.selftest import corrupt_cache_file


def test_heisenberg_fields(g23):
    n = g23.n
    x1 = Polynomial.variable(n, 1)
    X2 = g23.field(2)
    assert X2.component(2) == Polynomial.constant(n, 1)
    assert X2.component(3) == -x1
    assert g23.field(1) == PolyVectorField.coordinate(n, 1)
    # [X2, X1](0) = +e3
    assert vf_bracket(g23.field(2), g23.field(1)).at_origin()[2] == 1
    assert g23.c(2, 1) == {3: 1} and g23.c(1, 2) == {3: -1}


@pytest.mark.parametrize("rs", [(2, 3), (2, 5), (3, 3), (3, 4)])
def test_fields_are_unit_at_origin_and_consistent(rs):
    ctx = group(*rs)
    for l in range(1, ctx.n + 1):
        assert ctx.field(l).at_origin() == [Fraction(int(k == l)) for k in range(1, ctx.n + 1)]
    assert jacobi_violations(ctx) == []
    assert grading_violations(ctx) == []


@given(st.sampled_from([(2, 4), (3, 3)]), st.data())
def test_fold_matches_field_brackets(rs, data):
    ctx = group(*rs)
    i = data.draw(st.integers(1, ctx.n))
    alphas = multi_indices_up_to(ctx.degrees, ctx.s - ctx.degrees[i - 1])
    alpha = data.draw(st.sampled_from(alphas))
    assert generalized_structure_constants(ctx, i, alpha) == gsc_by_fields(ctx, i, alpha)


def test_generalized_constants_vanish_beyond_step(g24):
    alpha = (0,) * 7 + (1,)
    assert generalized_structure_constants(g24, 1, alpha) == {}


@pytest.mark.parametrize("l", [1, 2, 3, 5])
def test_flows(g24, l):
    assert check_flow(g24, l, symbolic_flow(g24, l))


@pytest.mark.parametrize("rs", [(2, 4), (3, 3)])
def test_exponential_coordinates_of_the_second_kind(rs):
    assert check_exponential_coordinates(group(*rs))


def test_cache_round_trip_and_corruption(tmp_path: Path):
    ctx = build_group(2, 4, cache_dir=tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    again = build_group(2, 4, cache_dir=tmp_path)
    assert again.gsc == ctx.gsc
    corrupt_cache_file(files[0])
    with pytest.raises(ResidualError, match="generalized constants for X"):
        build_group(2, 4, cache_dir=tmp_path)


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    from extremal_lab.gg_realization import CACHE_ENV, cache_dir_default

    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert cache_dir_default() == tmp_path
    path = write_cache(group(2, 3), tmp_path)
    assert path.exists() and "r2_s3" in path.name


def test_commutator_expansion_needs_a_generator(g24):
    # the expansion uses that X_q has constant coefficients; X_3 does not
    assert check_rr_identity(g24, 1, 1, (0, 1, 0, 0, 0, 0, 0, 0))
    assert not check_rr_identity(g24, 1, 3, (1, 0, 0, 0, 0, 0, 0, 0))
