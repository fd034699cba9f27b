"""Closed geodesics attached to totally complex quartic orders.

A fundamental unit eps acts on the order by multiplication; in the integral
basis this is a 4x4 integer matrix of determinant one whose eigenvalues are
a e^{+-i theta} and a^{-1} e^{+-i phi} with 0 < a < 1.  The geodesic has
length 8|log a| = 4R, and the class is counted with weight 4 h lambda_S mu/kappa.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import (
    CorrespondenceViolation,
    InvalidArgument,
    NotAGeodesic,
    PreconditionViolated,
    ShapeViolation,
)
from .orders import Order
from .rep import sigma_tilde_trace
from .units import UnitData, fundamental_unit, kappa, weakly_neat

TOL = 1e-9
ANGLE_TOL = 1e-8


@dataclass
class GeodesicClass:
    a: float
    theta: float
    phi: float
    length: float
    n_gamma: float
    trace_sigma_tilde: float
    chi1: Fraction
    weight: Fraction


def unit_matrix(order: Order, unit):
    """Matrix of multiplication by ``unit`` in the order's integral basis."""
    if order.n != 4 or order.field.signature != (0, 2):
        raise PreconditionViolated("unit matrices are built for totally complex quartic orders")
    unit = [int(c) for c in unit]
    if len(unit) != 4:
        raise InvalidArgument("unit must have four coordinates")
    M = order.mult_matrix(unit)
    if order.norm(unit) not in (1, -1):
        raise InvalidArgument("element is not a unit of the order")
    return M


def _eigenvalues(M, prec):
    with mp.workprec(prec):
        ev, _ = mp.eig(mp.matrix(M))
    return list(ev)


def _bits_needed(M):
    size = max(abs(x) for row in M for x in row)
    return 2 * max(1, size.bit_length()) + 120


def spectrum_shape(M):
    """(a, theta, phi, eigenvalues) for the two-conjugate-pair shape."""
    prec = _bits_needed(M)
    ev = _eigenvalues(M, prec)
    with mp.workprec(prec):
        mods = [abs(z) for z in ev]
        if all(abs(m - 1) < mp.mpf(10) ** -20 for m in mods):
            raise NotAGeodesic("all eigenvalues have modulus one (torsion element)")
        small = sorted((z for z in ev if abs(z) < 1), key=lambda z: mp.im(z))
        large = sorted((z for z in ev if abs(z) > 1), key=lambda z: mp.im(z))
        if len(small) != 2 or len(large) != 2:
            raise ShapeViolation("eigenvalues do not split into two pairs inside and outside the unit circle")
        tol = mp.mpf(2) ** (-prec // 2)
        for p in (small, large):
            if abs(p[0] - mp.conj(p[1])) > tol * (1 + abs(p[0])):
                raise ShapeViolation("eigenvalue pair is not complex conjugate")
            if abs(mp.im(p[0])) <= tol * abs(p[0]):
                raise ShapeViolation("real eigenvalue pair (field is not totally complex)")
        a = abs(small[0])
        if abs(a * abs(large[0]) - 1) > mp.mpf(10) ** -20:
            raise ShapeViolation("moduli of the two pairs are not reciprocal")
        theta = abs(mp.arg(small[0]))
        phi = abs(mp.arg(large[0]))
        return float(a), float(theta), float(phi), float(-mp.log(a)), ev


def adjoint_product(theta, phi):
    """det(1 - b) on the four nontrivial adjoint weights e^{+-2i theta}, e^{+-2i phi}."""
    prod = 1
    for w in (2 * theta, -2 * theta, 2 * phi, -2 * phi):
        prod *= 1 - complex(math.cos(w), math.sin(w))
    return prod.real


def geodesic_data(order: Order, unit_data: UnitData, h=1, lambda_s=1, kappa_value=None) -> GeodesicClass:
    """Geodesic invariants of the order's fundamental unit."""
    M = unit_matrix(order, unit_data.fund_unit)
    a, theta, phi, rho, _ = spectrum_shape(M)
    if kappa_value is None:
        kappa_value = kappa(order, unit_data)
    length = 8 * rho
    n_gamma = math.exp(length)
    tr = sigma_tilde_trace(theta, phi)
    mu = unit_data.mu
    g = GeodesicClass(
        a=a,
        theta=theta,
        phi=phi,
        length=length,
        n_gamma=n_gamma,
        trace_sigma_tilde=tr,
        chi1=Fraction(1, mu),
        weight=Fraction(4 * h * lambda_s * mu, kappa_value),
    )
    if abs(length - 4 * unit_data.regulator) > TOL * max(1.0, length):
        raise CorrespondenceViolation("length", f"8|log a| = {length} but 4R = {4 * unit_data.regulator}")
    if g.chi1 * g.weight != Fraction(4 * h * lambda_s, kappa_value):
        raise CorrespondenceViolation("chi1", "chi1 * weight differs from 4 h lambda / kappa")
    return g


def _in_angle_lattice(x, tol=ANGLE_TOL):
    for q in (math.pi / 2, math.pi / 3):
        r = x / q
        if abs(r - round(r)) * q <= tol:
            return True
    return False


def angle_condition(theta, phi, tol=ANGLE_TOL) -> bool:
    """theta + phi or theta - phi lies in (pi/2)Z or (pi/3)Z."""
    return _in_angle_lattice(theta + phi, tol) or _in_angle_lattice(theta - phi, tol)


def check_correspondence(order: Order, invariants, unit_data: UnitData = None):
    """Check the five order-geodesic identities; returns a dict of results.

    ``invariants`` needs regulator, mu, kappa, classification and may carry
    class_h and lambda_s.  Raises CorrespondenceViolation naming the first
    failing identity.
    """
    if invariants.classification != "Cc":
        raise PreconditionViolated(f"order is classified {invariants.classification}, not Cc")
    ud = unit_data or fundamental_unit(order)
    M = unit_matrix(order, ud.fund_unit)
    report = {}

    from sympy import Matrix

    d = int(Matrix(M).det())
    report["det"] = d
    if d != 1:
        raise CorrespondenceViolation("det", f"determinant {d}")

    _, theta, phi, rho, _ = spectrum_shape(M)
    log_n = 8 * rho
    report["log_n_gamma"] = log_n
    # N(gamma) = e^{4R}: compare logarithms, i.e. relative error of N
    if abs(log_n - 4 * invariants.regulator) > TOL:
        raise CorrespondenceViolation("n_gamma", f"log N = {log_n}, 4R = {4 * invariants.regulator}")

    tr = sigma_tilde_trace(theta, phi)
    report["trace_sigma_tilde"] = tr
    if not (0 < tr <= 16 + TOL):
        raise CorrespondenceViolation("trace_sigma_tilde", f"value {tr} outside (0, 16]")

    k = invariants.kappa
    report["kappa"] = k
    if k > 1:
        ok = angle_condition(theta, phi)
        report["angle_condition"] = ok
        if not ok:
            raise CorrespondenceViolation("angle_condition", f"theta={theta}, phi={phi}, kappa={k}")

    wn = weakly_neat(order, ud)
    report["weakly_neat"] = wn
    if not wn:
        raise CorrespondenceViolation("weak_neatness", "Cc order whose unit is not weakly neat")
    return report
