import math

import pytest
from hypothesis import given, settings, strategies as st

from geodesic_orders.errors import InvalidArgument
from geodesic_orders.forms import (
    batch_class_numbers,
    class_group_forms,
    class_number_forms,
    compose,
    is_reduced,
    narrow_key,
    principal_form,
    reduce_form,
    reduced_forms_of,
)
from geodesic_orders.units import quadratic_fundamental_unit


# (h, h+) for real quadratic discriminants, and groups frozen from a
# separate computer algebra system
WIDE_NARROW = [(5, 1, 1), (12, 1, 2), (40, 2, 2), (229, 3, 3), (316, 3, 6)]
GROUPS = [(-3, 1, []), (-4, 1, []), (-23, 3, [3]), (-84, 4, [2, 2]), (-420, 8, [2, 2, 2]), (5460, 4, [2, 2]), (8789, 6, [6])]


@pytest.mark.parametrize("D,h,hp", WIDE_NARROW)
def test_wide_and_narrow(D, h, hp):
    assert class_number_forms(D) == (h, hp)


@pytest.mark.parametrize("D,h,divs", GROUPS)
def test_groups(D, h, divs):
    assert class_group_forms(D) == (h, divs)


def test_rejects_squares():
    for D in (0, 1, 9, 7):
        with pytest.raises(InvalidArgument):
            class_number_forms(D)


def test_batch_matches_single_and_regulator():
    got = batch_class_numbers(5, 400)
    for D, (h, R) in got.items():
        assert h == class_group_forms(D)[0]
        t, u, _ = quadratic_fundamental_unit(D)
        assert R == pytest.approx(math.log((t + u * math.sqrt(D)) / 2), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(5, 2000), st.integers(-50, 50))
def test_reduction_keeps_class(D, t):
    if D % 4 not in (0, 1) or math.isqrt(D) ** 2 == D:
        return
    # conjugate the principal form by an elementary matrix and reduce back
    a, b, c = principal_form(D)
    f = (a, b + 2 * a * t, a * t * t + b * t + c)
    g = reduce_form(f, D)
    assert is_reduced(g, D)
    assert narrow_key(g, D) == narrow_key(principal_form(D), D)


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 3000))
def test_composition_with_identity(D):
    if D % 4 not in (0, 1) or math.isqrt(D) ** 2 == D:
        return
    e = principal_form(D)
    for f in reduced_forms_of(D)[:6]:
        assert narrow_key(compose(f, e, D), D) == narrow_key(f, D)
