import json

import pytest
from hypothesis import given, strategies as st

from extremal_lab.hall_basis import (
    ResourceCapError,
    build_hall_basis,
    free_dimension,
    unfold_chain,
    validate_basis,
    witt_dimension,
)


@pytest.mark.parametrize("r", [2, 3, 4])
@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_layers_follow_witt(r, s):
    b = build_hall_basis(r, s)
    assert b.layer_dims == tuple(witt_dimension(r, d) for d in range(1, s + 1))
    assert b.n == free_dimension(r, s)
    assert validate_basis(b) == []


def test_known_witt_values():
    assert [witt_dimension(2, d) for d in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    assert [witt_dimension(3, d) for d in range(1, 5)] == [3, 3, 8, 18]


def test_rank2_step6_elements():
    b = build_hall_basis(2, 6)
    want = {
        3: (2, 1), 4: (3, 1), 5: (3, 2), 9: (6, 1), 13: (4, 3), 14: (5, 3), 15: (9, 1),
        18: (11, 2), 19: (12, 2), 20: (6, 3), 23: (5, 4),
    }
    for idx, children in want.items():
        assert b[idx].children == children
    assert b[18].chain == (1, 1, 2, 2, 2) and b[18].ell0 == 2


def test_rank3_step4_elements():
    b = build_hall_basis(3, 4)
    assert b.n == 32
    for idx, children in {7: (4, 1), 14: (6, 3), 27: (13, 2), 30: (5, 4), 31: (6, 4), 32: (6, 5)}.items():
        assert b[idx].children == children
    assert b.precedes(6, 27) and b.precedes(6, 28)


def test_prefix_order():
    b = build_hall_basis(2, 4)
    # the generator itself is the k = 0 prefix of every chain starting there
    assert b.precedes(2, 3) and b.precedes(2, 5)
    assert b.precedes(3, 8) and not b.precedes(4, 5) and not b.precedes(1, 3)
    assert all(b.precedes(i, i) for i in range(1, b.n + 1))


@given(st.sampled_from([(2, 5), (3, 3)]), st.data())
def test_chains_rebuild_elements(rs, data):
    b = build_hall_basis(*rs)
    idx = data.draw(st.integers(1, b.n))
    seq = unfold_chain(b, idx)
    k = seq[0]
    for li in seq[1:]:
        k = b.index_of(k, li)
    assert k == idx
    assert sum(b.degrees[i - 1] for i in seq) == b[idx].degree


def test_hall_bracket_index():
    b = build_hall_basis(2, 4)
    assert b.hall_bracket_index(3, 1) == 4
    assert b.hall_bracket_index(3, 2) == 5
    assert b.hall_bracket_index(5, 1) is None   # u_I(5) = 2 > 1
    assert b.hall_bracket_index(1, 2) is None


def test_cap_and_bad_arguments():
    with pytest.raises(ResourceCapError):
        build_hall_basis(3, 9)
    with pytest.raises(ValueError):
        build_hall_basis(1, 3)
    assert build_hall_basis(3, 9, cap=10 ** 4).n == free_dimension(3, 9)


def test_json_is_deterministic():
    a, b = build_hall_basis(2, 5), build_hall_basis(2, 5)
    assert a.dumps() == b.dumps()
    assert json.loads(a.dumps())["elements"][3]["children"] == [3, 1]
    assert "X4 = [X3, X1]" in a.describe(4)
