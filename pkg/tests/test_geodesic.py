import math
from fractions import Fraction
from types import SimpleNamespace

import pytest
from sympy import Matrix

from geodesic_orders.errors import CorrespondenceViolation, InvalidArgument, NotAGeodesic, PreconditionViolated
from geodesic_orders.fields import make_field
from geodesic_orders.geodesic import (
    adjoint_product,
    angle_condition,
    check_correspondence,
    geodesic_data,
    spectrum_shape,
    unit_matrix,
)
from geodesic_orders.orders import maximal_order
from geodesic_orders.units import UnitData, fundamental_unit, kappa


def _max(cs):
    return maximal_order(make_field(cs))


DISC117 = _max([1, -1, -1, 1, 1])
ZETA5 = _max([1, 1, 1, 1, 1])


def _inv(o, ud, cls="Cc", k=None):
    return SimpleNamespace(regulator=ud.regulator, mu=ud.mu, kappa=k or kappa(o, ud), classification=cls)


class TestUnitMatrix:
    def test_identity(self):
        assert unit_matrix(DISC117, DISC117.one()) == [[int(i == j) for j in range(4)] for i in range(4)]

    def test_torsion_power(self):
        ud = fundamental_unit(DISC117)
        M = Matrix(unit_matrix(DISC117, ud.torsion_gen))
        assert M**ud.mu == Matrix.eye(4)

    def test_zeta5_unit(self):
        ud = fundamental_unit(ZETA5)
        M = unit_matrix(ZETA5, ud.fund_unit)
        assert Matrix(M).det() == 1
        from sympy import Poly, symbols

        x = symbols("x")
        cp = Poly(Matrix(M).charpoly(x), x)
        # compare with prod (x - sigma_k(eps)) over the embeddings, rounded
        zs = ZETA5.field.embed(ZETA5.to_field(ud.fund_unit))
        coeffs = [1]
        for z in zs:
            z = complex(z)
            coeffs = [c - z * d for c, d in zip(coeffs + [0], [0] + coeffs)]
        assert [int(c) for c in cp.all_coeffs()] == [round(c.real) for c in coeffs]
        assert cp.is_irreducible

    def test_non_unit(self):
        with pytest.raises(InvalidArgument):
            unit_matrix(DISC117, [2, 0, 0, 0])


class TestGeodesicData:
    def test_length_and_norm(self):
        ud = fundamental_unit(DISC117)
        g = geodesic_data(DISC117, ud, h=1, lambda_s=1)
        assert g.length == pytest.approx(4 * ud.regulator, rel=1e-12)
        assert g.n_gamma == pytest.approx(math.exp(4 * ud.regulator), rel=1e-9)
        assert (g.theta, g.phi) == pytest.approx(ud.angles, abs=1e-12)
        assert 0 < g.a < 1
        assert g.chi1 == Fraction(1, 6) and g.chi1 * ud.mu == 1
        assert g.weight == Fraction(4 * 6, 2)

    def test_trace_forms_agree(self):
        ud = fundamental_unit(DISC117)
        g = geodesic_data(DISC117, ud)
        assert abs(g.trace_sigma_tilde - adjoint_product(g.theta, g.phi)) < 1e-9

    def test_torsion_rejected(self):
        ud = fundamental_unit(DISC117)
        bad = UnitData(**{**ud.__dict__, "fund_unit": ud.torsion_gen})
        with pytest.raises(NotAGeodesic):
            geodesic_data(DISC117, bad)

    def test_spectrum_pairs(self):
        ud = fundamental_unit(_max([6, 8, 5, 1, 1]))
        o = _max([6, 8, 5, 1, 1])
        a, th, ph, rho, ev = spectrum_shape(unit_matrix(o, fundamental_unit(o).fund_unit))
        prod = 1
        for z in ev:
            prod *= complex(z)
        assert prod == pytest.approx(1, abs=1e-9)
        assert rho == pytest.approx(ud.regulator / 2, rel=1e-12)


class TestCorrespondence:
    @pytest.mark.parametrize("cs", [[1, -1, -1, 1, 1], [2, 1, 0, 0, 1], [7, -3, 8, 6, 1], [6, 8, 5, 1, 1]])
    def test_cc_orders_pass(self, cs):
        o = _max(cs)
        ud = fundamental_unit(o)
        rep = check_correspondence(o, _inv(o, ud), ud)
        assert rep["det"] == 1 and rep["weakly_neat"]

    def test_cr_excluded(self):
        ud = fundamental_unit(ZETA5)
        with pytest.raises(PreconditionViolated):
            check_correspondence(ZETA5, _inv(ZETA5, ud, cls="Cr"), ud)

    def test_kappa4_angle_condition(self):
        # kappa = 4 only happens for Galois fields, which have a real quadratic subfield
        o = _max([1, -1, 2, 1, 1])
        ud = fundamental_unit(o)
        assert kappa(o, ud) == 4
        assert angle_condition(*ud.angles)

    def test_wrong_regulator_named(self):
        ud = fundamental_unit(DISC117)
        inv = _inv(DISC117, ud)
        inv.regulator += 1e-6
        with pytest.raises(CorrespondenceViolation) as e:
            check_correspondence(DISC117, inv, ud)
        assert e.value.identity == "n_gamma"

    def test_angle_condition_helper(self):
        assert angle_condition(math.pi / 6, math.pi / 6)
        assert angle_condition(1.0, 1.0)
        assert not angle_condition(0.4, 0.5)
