import math

import pytest
from hypothesis import given, settings, strategies as st

from geodesic_orders.errors import InvalidArgument
from geodesic_orders.rep import (
    DELTA,
    TRIV,
    KMType,
    decompose_exterior,
    delta_lk,
    km_character,
    sigma_tilde_trace,
    sigma_tilde_virtual,
    verify_ak_identity,
    weyl_integral,
)

D = delta_lk

# K_M decompositions of the exterior powers, as listed for p_M and m
PM_TABLE = [
    {TRIV: 1},
    {D(2, 0): 1, D(0, 2): 1},
    {DELTA: 2, D(2, 2): 1, D(2, -2): 1},
    {D(2, 0): 1, D(0, 2): 1},
    {TRIV: 1},
]
M_TABLE = [
    {TRIV: 1},
    {DELTA: 2, D(2, 0): 1, D(0, 2): 1},
    {TRIV: 1, DELTA: 2, D(2, 0): 2, D(0, 2): 2, D(2, 2): 1, D(2, -2): 1},
    {TRIV: 4, D(2, 0): 2, D(0, 2): 2, D(2, 2): 2, D(2, -2): 2},
    {TRIV: 1, DELTA: 2, D(2, 0): 2, D(0, 2): 2, D(2, 2): 1, D(2, -2): 1},
]


def _dim(dec):
    return sum(t.dim * m for t, m in dec.items())


class TestKMTypes:
    def test_identification(self):
        assert D(-2, 2) == D(2, -2)
        assert D(0, -2) == D(0, 2)
        with pytest.raises(InvalidArgument):
            D(0, 0)

    def test_characters(self):
        assert km_character(D(2, 2), 0, 0) == 2
        assert km_character(DELTA, 1.0, 2.0, "swap") == -1
        assert km_character(D(2, 0), math.pi / 2, 0).real == pytest.approx(-2)
        assert km_character(D(3, 1), 0.3, 0.1, "swap") == 0

    @pytest.mark.parametrize("t", [TRIV, DELTA, D(2, 0), D(1, -3)])
    def test_swap_squares_to_identity(self, t):
        # delta(T)^2 = delta(T^2): the swap trace squared relation on each type
        sw = km_character(t, 0, 0, "swap")
        if t.dim == 1:
            assert sw * sw == km_character(t, 0, 0)
        else:
            # T swaps the two weight lines, so it has eigenvalues +1 and -1
            assert sw == 0


class TestExterior:
    @pytest.mark.parametrize("n", range(5))
    def test_pM(self, n):
        assert decompose_exterior("pM", n) == PM_TABLE[n]

    @pytest.mark.parametrize("n", range(5))
    def test_m(self, n):
        assert decompose_exterior("m", n) == M_TABLE[n]

    def test_dimensions(self):
        assert sum(_dim(decompose_exterior("pM", n)) for n in range(5)) == 2**4
        for n in range(7):
            assert _dim(decompose_exterior("m", n)) == math.comb(6, n)

    def test_duality(self):
        for n in range(5):
            assert decompose_exterior("pM", n) == decompose_exterior("pM", 4 - n)
        for n in range(7):
            assert decompose_exterior("m", n) == decompose_exterior("m", 6 - n)

    def test_nonnegative(self):
        for sp, top in (("pM", 4), ("m", 6)):
            for n in range(top + 1):
                assert all(m > 0 for m in decompose_exterior(sp, n).values())

    def test_range(self):
        with pytest.raises(InvalidArgument):
            decompose_exterior("pM", 5)


class TestSigmaTilde:
    def test_ak(self):
        ok, res = verify_ak_identity()
        assert ok
        assert res[0] == 0 and res[3] == 0
        assert res["character"] < 1e-12

    def test_examples(self):
        assert sigma_tilde_trace(math.pi / 2, math.pi / 2) == pytest.approx(16, abs=1e-12)
        assert sigma_tilde_trace(0, 1.234) == 0
        assert sigma_tilde_trace(math.pi / 3, math.pi / 4) == pytest.approx(6, abs=1e-12)

    def test_grid(self):
        for i in range(100):
            for j in range(100):
                th, ph = 2 * math.pi * i / 100, 2 * math.pi * j / 100
                v = sigma_tilde_trace(th, ph)
                assert v >= 0
                assert abs(sigma_tilde_virtual(th, ph) - v) < 1e-12
        assert sigma_tilde_trace(math.pi, 0.7) == 0

    @settings(max_examples=200)
    @given(st.floats(-10, 10), st.floats(-10, 10))
    def test_nonnegative_and_bounded(self, th, ph):
        v = sigma_tilde_trace(th, ph)
        assert -1e-12 <= v <= 16 + 1e-12


class TestWeyl:
    @pytest.mark.parametrize("n", [4, 5, 8, 13, 64])
    def test_value(self, n):
        assert weyl_integral(n) == pytest.approx(2, abs=1e-12)

    def test_sin_squared(self):
        n = 16
        assert sum(math.sin(2 * math.pi * i / n) ** 2 for i in range(n)) * 2 * math.pi / n == pytest.approx(math.pi)

    def test_small_grid(self):
        with pytest.raises(InvalidArgument):
            weyl_integral(3)
