from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from extremal_lab.extremal_polys import all_extremal_polynomials
from extremal_lab.gg_realization import build_group

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@lru_cache(maxsize=None)
def group(r, s):
    return build_group(r, s)


@lru_cache(maxsize=None)
def polys(r, s):
    return all_extremal_polynomials(group(r, s))


@pytest.fixture(scope="session")
def g23():
    return group(2, 3)


@pytest.fixture(scope="session")
def g24():
    return group(2, 4)


@pytest.fixture(scope="session")
def g33():
    return group(3, 3)


@pytest.fixture(scope="session")
def g34():
    return group(3, 4)


def rationals(max_num=6, max_den=4):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def coeff_lists(max_degree=3):
    return st.lists(rationals(), min_size=1, max_size=max_degree + 1)
