import cmath
import itertools
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from geodesic_orders.arith import (
    IntPoly,
    complex_roots,
    count_real_roots,
    factor_mod_p,
    is_prime,
    poly_discriminant,
    resultant,
    squarefree_part,
)
from geodesic_orders.arith.linalg import det, elementary_divisors, hnf_rows, inverse, kernel_mod_p
from geodesic_orders.errors import InvalidArgument

P = IntPoly


def fp_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def reassemble(factors, p):
    acc = [1]
    for g, m in factors:
        for _ in range(m):
            acc = fp_mul(acc, list(g.coeffs), p)
    return acc


def brute_irreducible(g, p):
    """Trial division by every monic polynomial of degree <= deg/2."""
    n = g.degree
    cs = [c % p for c in g.coeffs]
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            h = list(tail) + [1]
            # remainder of cs by h
            r = list(cs)
            for i in range(len(r) - 1, d - 1, -1):
                c = r[i]
                if c:
                    for j in range(d + 1):
                        r[i - d + j] = (r[i - d + j] - c * h[j]) % p
            if not any(r[:d]):
                return False
    return True


class TestFactorModP:
    def test_cyclotomic5_mod2_irreducible(self):
        assert factor_mod_p(P([1, 1, 1, 1, 1]), 2) == [(P([1, 1, 1, 1, 1]), 1)]

    def test_x4_plus_1_mod2(self):
        assert factor_mod_p(P([1, 0, 0, 0, 1]), 2) == [(P([1, 1]), 4)]

    def test_x2_minus_1_mod5(self):
        assert factor_mod_p(P([-1, 0, 1]), 5) == [(P([1, 1]), 1), (P([4, 1]), 1)]

    def test_x4_plus_1_mod3(self):
        assert factor_mod_p(P([1, 0, 0, 0, 1]), 3) == [(P([2, 1, 1]), 1), (P([2, 2, 1]), 1)]

    def test_rejects_composite(self):
        with pytest.raises(InvalidArgument):
            factor_mod_p(P([1, 0, 1]), 4)

    @settings(max_examples=150, deadline=None)
    @given(
        st.lists(st.integers(-20, 20), min_size=2, max_size=9),
        st.sampled_from([p for p in range(2, 100) if is_prime(p)]),
    )
    def test_reassembly_and_irreducibility(self, cs, p):
        f = P(cs)
        if f.degree < 1 or f.lc % p == 0:
            return
        fs = factor_mod_p(f, p)
        lead = f.lc % p
        target = [c % p for c in f.coeffs]
        got = [c * lead % p for c in reassemble(fs, p)]
        assert got == target
        for g, _ in fs:
            if g.degree <= 4 and p <= 7:
                assert brute_irreducible(g, p)


class TestDiscriminant:
    @pytest.mark.parametrize(
        "cs, d", [([-5, 0, 1], 20), ([1, 0, 1], -4), ([1, 0, 0, 0, 1], 256), ([1, 1, 1, 1, 1], 125)]
    )
    def test_values(self, cs, d):
        assert poly_discriminant(P(cs)) == d

    @settings(max_examples=80, deadline=None)
    @given(st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 5))
    def test_quadratic_formula(self, b, c, a):
        assert poly_discriminant(P([c, b, a])) == b * b - 4 * a * c

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.integers(-6, 6), min_size=2, max_size=4),
        st.lists(st.integers(-6, 6), min_size=2, max_size=4),
    )
    def test_product_rule(self, a, b):
        f, g = P(a + [1]), P(b + [1])
        assert poly_discriminant(f * g) == poly_discriminant(f) * poly_discriminant(g) * resultant(f, g) ** 2

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.integers(-6, 6), min_size=1, max_size=3),
        st.lists(st.integers(-6, 6), min_size=1, max_size=3),
    )
    def test_resultant_against_roots(self, a, b):
        f, g = P(a + [1]), P(b + [1])
        mpmath.mp.dps = 40
        rf = mpmath.polyroots(list(reversed(f.coeffs)), maxsteps=200, extraprec=200)
        prod = mpmath.mpf(1)
        for r in rf:
            prod *= g(r)
        assert abs(complex(prod) - resultant(f, g)) < 1e-12 * max(1, abs(resultant(f, g)))


class TestRealRoots:
    @pytest.mark.parametrize("cs, n", [([1, 0, 0, 0, 1], 0), ([-5, 0, 1], 2), ([1, -1, 1, -1, 1], 0), ([-2, 0, 0, 0, 1], 2)])
    def test_counts(self, cs, n):
        assert count_real_roots(P(cs)) == n

    def test_non_squarefree_rejected(self):
        with pytest.raises(InvalidArgument):
            count_real_roots(P([1, 2, 1]))


class TestComplexRoots:
    def test_i(self):
        balls = complex_roots(P([1, 0, 1]), 1e-10)
        assert [complex(b.center) for b in balls] == [-1j, 1j]

    def test_fifth_roots(self):
        balls = complex_roots(P([1, 1, 1, 1, 1]), 1e-30)
        expect = sorted((cmath.exp(2j * cmath.pi * k / 5) for k in range(1, 5)), key=lambda z: (z.real, z.imag))
        for b, z in zip(balls, expect):
            assert abs(complex(b.center) - z) < 1e-14
            assert b.radius <= 1e-30

    def test_sqrt5(self):
        balls = complex_roots(P([-5, 0, 1]), 1e-10)
        assert all(b.is_real() for b in balls)
        assert abs(balls[1].center.real - mpmath.sqrt(5)) < 1e-10

    def test_conjugate_pairs_exact(self):
        balls = complex_roots(P([3, -2, 5, 1, 1]))
        for b in balls:
            if not b.is_real():
                assert any(c.center == b.conjugate().center for c in balls)

    @settings(max_examples=120, deadline=None)
    @given(st.lists(st.integers(-5, 5), min_size=2, max_size=5))
    def test_vieta_and_real_count(self, cs):
        f = P(cs)
        if f.degree < 1 or poly_discriminant(f) == 0:
            return
        balls = complex_roots(f, 1e-25)
        assert len(balls) == f.degree
        s = sum(complex(b.center) for b in balls)
        assert abs(s + f.coeffs[-2] / f.lc) < 1e-12 * (1 + abs(s))
        prod = 1
        for b in balls:
            prod *= complex(b.center)
        assert abs(prod - (-1) ** f.degree * f.coeffs[0] / f.lc) < 1e-10 * (1 + abs(prod))
        assert sum(b.is_real() for b in balls) == count_real_roots(f)


class TestIntegerHelpers:
    def test_squarefree_part(self):
        assert squarefree_part(40) == 10
        assert squarefree_part(-12) == -3
        assert squarefree_part(1) == 1

    def test_primality(self):
        assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        assert is_prime(2**61 - 1)
        assert not is_prime(3215031751)

    def test_hnf_and_det(self):
        rows = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
        H = hnf_rows(rows)
        assert all(H[i][j] == 0 for i in range(3) for j in range(i))
        assert abs(det(H)) == abs(det(rows))

    def test_inverse(self):
        M = [[2, 1], [7, 4]]
        assert inverse(M) == [[4, -1], [-7, 2]]
        assert det([[Fraction(1, 2), 0], [0, 4]]) == 2

    def test_elementary_divisors(self):
        assert elementary_divisors([[2, 4], [6, 8]]) == [2, 4]

    def test_kernel_mod_p(self):
        ker = kernel_mod_p([[1, 1], [2, 2], [0, 1]], 5)
        assert len(ker) == 1
        x = ker[0]
        assert (x[0] + 2 * x[1]) % 5 == 0 and (x[0] + 2 * x[1] + x[2]) % 5 == 0
