"""Torsion units, fundamental units, regulators and the unit invariants.

Conventions.  For a unit u of a totally complex quartic order write
rho(u) = |log|sigma_A(u)|| where sigma_A is the first embedding; since the
norm is 1 the other pair has absolute value exp(-+rho).  The regulator is
R = 2 rho for quartic orders and R = rho = log(eps) for real quadratic ones.
The angle data of a fundamental unit eps (oriented so that |sigma_A(eps)| < 1)
is theta = |arg sigma_A(eps)|, phi = |arg sigma_B(eps)|.
"""

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import isqrt

import numpy as np
from mpmath import mp

from .arith.primes import is_square, primes_up_to
from .errors import (
    InternalError,
    InvalidArgument,
    NumericInconsistency,
    PreconditionViolated,
    SearchBudgetExhausted,
)
from .fields import apply_automorphism, automorphisms
from .lattice import enumerate_short
from .orders import Order
from .relations import RelationSearch

ALLOWED_TORSION_ORDERS = (1, 2, 3, 4, 5, 6, 8, 10, 12)
NU_TOL = 1e-9

# search budget: largest number of lattice points examined in one ball
DEFAULT_POINT_BUDGET = 20000
# rational primes whose prime ideals may appear in unit relations
FACTOR_BASE_BOUND = 60


@dataclass
class UnitData:
    mu: int
    torsion_gen: list
    fund_unit: list
    rho: float
    regulator: float
    angles: tuple = None
    a: float = None
    lower_bound: float = None
    search_bound: float = None
    torsion: list = dc_field(default_factory=list)
    method: str = ""

    def __repr__(self):
        return f"UnitData(mu={self.mu}, R={self.regulator:.12g}, eps={self.fund_unit})"


def embedding_matrix(order: Order, prec=53):
    """E[i][k] = sigma_k(b_i) as mpmath numbers at the given precision."""
    rts = order.field.roots_mp(max(prec, 64))
    n = order.n
    with mp.workprec(prec + 20):
        E = []
        for i in range(n):
            v = order.basis[i]
            E.append([sum(mp.mpf(c.numerator) / c.denominator * r**j for j, c in enumerate(v)) for r in rts])
    return E


def _float_embeddings(order: Order):
    E = embedding_matrix(order, 80)
    return np.array([[complex(z) for z in row] for row in E])


def t2_gram(order: Order):
    E = _float_embeddings(order)
    return np.real(E @ E.conj().T)


def _mult_order(order: Order, x):
    """Multiplicative order of x if it is at most 24, else None."""
    one = order.one()
    y = list(x)
    for k in range(1, 25):
        if y == one:
            return k
        y = order.mul(y, x)
    return None


def torsion_units(order: Order):
    """(mu, generator, all torsion elements) for the order."""
    n = order.n
    r, s = order.field.signature
    one = order.one()
    minus = [-c for c in one]
    if r > 0:
        return 2, minus, [one, minus]
    G = t2_gram(order)
    found = {tuple(one), tuple(minus)}
    for v in enumerate_short(G, float(n)):
        for w in (list(v), [-c for c in v]):
            k = _mult_order(order, w)
            if k is not None:
                if k not in ALLOWED_TORSION_ORDERS:
                    raise InternalError(f"torsion element of order {k}")
                found.add(tuple(w))
    mu = len(found)
    gen = None
    for w in sorted(found):
        if _mult_order(order, list(w)) == mu:
            gen = list(w)
            break
    if gen is None:
        raise InternalError("torsion group is not cyclic")
    torsion = [order.power(gen, k) for k in range(mu)]
    if {tuple(t) for t in torsion} != found:
        raise InternalError("torsion generator does not generate all roots of unity")
    return mu, gen, torsion


# ---------------------------------------------------------------- quadratic


def quadratic_fundamental_unit(D: int):
    """Fundamental unit (t + u sqrt(D)) / 2 > 1 of the order of discriminant D > 0.

    The expansion of (b + sqrt D)/2, b = D mod 2, is purely periodic after one
    step; the product of the complete quotients over one period is the unit.
    """
    if D <= 0 or D % 4 not in (0, 1) or is_square(D):
        raise InvalidArgument(f"{D} is not a nonsquare positive discriminant")
    r = isqrt(D)
    P, Q = D % 2, 2

    def step(P, Q):
        a = (P + r) // Q
        P2 = a * Q - P
        return P2, (D - P2 * P2) // Q

    P, Q = step(P, Q)
    start = (P, Q)
    # product of (P + sqrt D)/Q over the period, kept as (X + Y sqrt D)/Z
    X, Y, Z = 1, 0, 1
    while True:
        X, Y, Z = X * P + Y * D, X + Y * P, Z * Q
        P, Q = step(P, Q)
        if (P, Q) == start:
            break
    # normalise to (t + u sqrt D)/2
    t2, u2 = 2 * X, 2 * Y
    if t2 % Z or u2 % Z:
        raise InternalError("continued fraction unit is not integral")
    t, u = t2 // Z, u2 // Z
    if t < 0:
        t, u = -t, -u
    n = (t * t - D * u * u) // 4
    if (t * t - D * u * u) % 4 or n not in (1, -1):
        raise InternalError("continued fraction product is not a unit")
    return t, u, n


def _quadratic_unit(order: Order):
    D = order.disc
    t, u, nrm = quadratic_fundamental_unit(D)
    f = order.field.min_poly
    c0, c1 = f.coeffs[0], f.coeffs[1]
    # sqrt(poly disc) = 2x + c1; sqrt(D) = that / index
    k2 = Fraction(order.field.poly_disc, D)
    k = isqrt(k2.numerator)
    if Fraction(k * k) != k2:
        raise InternalError("order index is not an integer")
    sqrtD = [Fraction(c1, k), Fraction(2, k)]
    eps_field = [Fraction(t, 2) + Fraction(u, 2) * sqrtD[0], Fraction(u, 2) * sqrtD[1]]
    coords = order.from_field(eps_field)
    if any(c.denominator != 1 for c in coords):
        raise InternalError("unit not in order")
    coords = [int(c) for c in coords]
    with mp.workprec(120):
        R = mp.log((t + u * mp.sqrt(D)) / 2)
    return UnitData(
        mu=2,
        torsion_gen=[-c for c in order.one()],
        fund_unit=coords,
        rho=float(R),
        regulator=float(R),
        torsion=[order.one(), [-c for c in order.one()]],
        method="continued-fraction",
    ), nrm


# ---------------------------------------------------------------- quartic


class _Embedder:
    """Float and high-precision embeddings of order elements."""

    def __init__(self, order: Order):
        self.order = order
        self.E = _float_embeddings(order)
        self._hp = {}

    def floats(self, x):
        return np.asarray(x, dtype=float) @ self.E

    def hp(self, x, prec):
        if prec not in self._hp:
            self._hp[prec] = embedding_matrix(self.order, prec)
        E = self._hp[prec]
        with mp.workprec(prec + 20):
            return [sum(x[i] * E[i][k] for i in range(len(x))) for k in range(len(x))]


def _bits(x):
    return max((abs(c).bit_length() for c in x), default=1)


def _rho(emb: _Embedder, x):
    prec = 2 * _bits(x) + 120
    z = emb.hp(x, prec)
    with mp.workprec(prec):
        return float(mp.log(abs(z[0])))


def _inverse_unit(order: Order, u):
    """u^{-1} for a unit, via the adjugate of its multiplication matrix."""
    from sympy import Matrix

    M = Matrix(order.mult_matrix(u))
    d = int(M.det())
    if d not in (1, -1):
        raise InternalError("inverse requested for a non-unit")
    Minv = M.adjugate() * d
    one = order.one()
    return [int(sum(one[i] * Minv[i, j] for i in range(order.n))) for j in range(order.n)]


def _kth_root(order: Order, emb: _Embedder, t, q):
    """An element eta of the order with eta^q = t, or None."""
    n = order.n
    prec = 2 * _bits(t) + 200
    z = emb.hp(t, prec)
    with mp.workprec(prec):
        E = emb._hp[prec]
        Em = mp.matrix([[E[i][k] for k in range(n)] for i in range(n)])
        Einv = Em**-1
        rA = [mp.root(abs(z[0]), q) * mp.expjpi((mp.arg(z[0]) + 2 * mp.pi * j) / (q * mp.pi)) for j in range(q)]
        rB = [mp.root(abs(z[2]), q) * mp.expjpi((mp.arg(z[2]) + 2 * mp.pi * j) / (q * mp.pi)) for j in range(q)]
        for a in rA:
            for b in rB:
                s = mp.matrix([[a, mp.conj(a), b, mp.conj(b)]])
                c = s * Einv
                cand = [int(mp.nint(c[0, k].real)) for k in range(n)]
                if all(abs(c[0, k].real - cand[k]) < 0.25 for k in range(n)):
                    if order.power(cand, q) == list(t):
                        return cand
    return None


def quartic_fundamental_unit(order: Order, point_budget=DEFAULT_POINT_BUDGET, fb_bound=FACTOR_BASE_BOUND):
    """Fundamental unit of a totally complex quartic order.

    Stage one enumerates T2-balls of doubling radius B.  A unit u has
    T2(u) = 4 cosh(2 rho(u)), so once the smallest unit seen satisfies
    4 cosh(2 rho) <= B it is fundamental; in any case every non-torsion unit
    has rho >= L = acosh(B/4)/2 for the last complete ball.  Stage two builds
    units from multiplicative relations among ball elements with smooth norm
    and reduces them to a single generator u = zeta eps^k.  Since
    k <= rho(u)/L, testing q-th roots for primes q <= rho(u)/L certifies eps.
    """
    if order.field.signature != (0, 2):
        raise PreconditionViolated("quartic unit search needs a totally complex quartic order")
    emb = _Embedder(order)
    G = t2_gram(order)
    mu, gen, torsion = torsion_units(order)

    best = None  # (rho, coords)
    bound = 16.0
    last_pts = []
    complete_bound = 0.0
    while True:
        pts = enumerate_short(G, bound, limit=point_budget)
        if pts is None:
            break
        last_pts, complete_bound = pts, bound
        if pts:
            Z = np.asarray(pts, dtype=float) @ emb.E
            nrm = np.prod(np.abs(Z), axis=1)  # conjugate pairs: this is the norm
            t2 = np.sum(np.abs(Z) ** 2, axis=1)
            for idx in np.nonzero((np.abs(nrm - 1) < 1e-6) & (t2 > 4 + 1e-6))[0]:
                x = list(pts[idx])
                if order.norm(x) != 1:
                    continue
                r = abs(_rho(emb, x))
                if best is None or r < best[0] - 1e-12:
                    best = (r, x)
        if best is not None and 4 * math.cosh(2 * best[0]) <= complete_bound:
            ud = _finish(order, emb, best[1], mu, gen, torsion, bound=complete_bound, method="ball")
            ud.lower_bound = ud.regulator
            return ud
        bound *= 2
    lower = math.acosh(max(complete_bound / 4, 1.0)) / 2
    if lower <= 0:
        raise SearchBudgetExhausted("point budget too small for any certified bound", best=None, lower_bound=0.0)

    primes = [p for p in primes_up_to(fb_bound) if order.is_maximal_at(p)]
    rs = RelationSearch(order, primes)
    if best is not None:
        rs.add(best[1])
    Z = np.asarray(last_pts, dtype=float) @ emb.E if last_pts else np.zeros((0, 4))
    nrm = np.prod(np.abs(Z), axis=1)
    for idx in np.argsort(nrm, kind="stable"):
        if rs.smooth_candidate(nrm[idx]):
            rs.add(last_pts[idx])
    g = rs.unit_generator(tol=lower / 2)
    if g is None:
        raise SearchBudgetExhausted(
            f"no non-torsion unit found from {len(last_pts)} elements with T2 <= {complete_bound:.6g}",
            best=None,
            lower_bound=2 * lower,
        )
    eps = rs.evaluate(g[0])
    if order.norm(eps) != 1:
        raise InternalError("relation unit does not have norm 1")
    rho_c = abs(_rho(emb, eps))
    # eps = zeta * fundamental^k with k <= rho_c / lower; strip prime roots
    changed = True
    while changed:
        changed = False
        for q in primes_up_to(int(rho_c / lower + 1e-9)):
            for z in torsion:
                root = _kth_root(order, emb, order.mul(z, eps), q)
                if root is not None:
                    eps = root
                    rho_c = abs(_rho(emb, eps))
                    changed = True
                    break
            if changed:
                break
    ud = _finish(order, emb, eps, mu, gen, torsion, bound=complete_bound, method="relations")
    ud.lower_bound = 2 * lower
    return ud


def _finish(order, emb, eps, mu, gen, torsion, bound, method):
    prec = 2 * _bits(eps) + 120
    z = emb.hp(eps, prec)
    with mp.workprec(prec):
        if abs(z[0]) > 1:
            eps = _inverse_unit(order, eps)
            z = emb.hp(eps, 2 * _bits(eps) + 120)
        a = abs(z[0])
        rho = -mp.log(a)
        theta = abs(mp.arg(z[0]))
        phi = abs(mp.arg(z[2]))
    return UnitData(
        mu=mu,
        torsion_gen=gen,
        fund_unit=list(eps),
        rho=float(rho),
        regulator=float(2 * rho),
        angles=(float(theta), float(phi)),
        a=float(a),
        search_bound=bound,
        torsion=torsion,
        method=method,
    )


def fundamental_unit(order: Order, point_budget=DEFAULT_POINT_BUDGET) -> UnitData:
    """Fundamental unit and regulator for a unit group of rank one."""
    r, s = order.field.signature
    if order.n == 2 and r == 2:
        return _quadratic_unit(order)[0]
    if order.n == 4 and r == 0:
        return quartic_fundamental_unit(order, point_budget)
    raise PreconditionViolated("unit rank is not one (need real quadratic or totally complex quartic)")


def unit_norm(order: Order, u) -> int:
    return order.norm(list(u))


# ---------------------------------------------------------------- invariants


def kappa(order: Order, unit_data: UnitData) -> int:
    """Number of images of eps under field automorphisms that lie in the order."""
    if order.field.signature != (0, 2):
        raise PreconditionViolated("kappa is defined for totally complex quartic orders")
    eps = order.to_field(unit_data.fund_unit)
    images = set()
    for g in automorphisms(order.field):
        img = apply_automorphism(order.field, g, eps)
        if order.contains(img):
            images.add(tuple(img))
    k = len(images)
    if k not in (1, 2, 4):
        raise InternalError(f"kappa = {k} is not 1, 2 or 4")
    return k


def fundamental_units_all(order: Order, unit_data: UnitData):
    """The 2 mu fundamental units zeta eps^{+-1}."""
    eps = unit_data.fund_unit
    inv = _inverse_unit(order, eps)
    out = []
    for z in unit_data.torsion:
        out.append(order.mul(z, eps))
        out.append(order.mul(z, inv))
    if len({tuple(u) for u in out}) != 2 * unit_data.mu:
        raise InternalError("the 2 mu fundamental units are not pairwise distinct")
    return out


def nu_terms(order: Order, unit_data: UnitData):
    """Per-unit terms (product form, closed form, theta_u, phi_u)."""
    emb = _Embedder(order)
    out = []
    for u in fundamental_units_all(order, unit_data):
        prec = 2 * _bits(u) + 120
        z = emb.hp(u, prec)
        with mp.workprec(prec):
            prod = mp.mpc(1)
            for w in z:
                prod *= 1 - w / abs(w)
            th, ph = abs(mp.arg(z[0])), abs(mp.arg(z[2]))
            closed = 4 * (1 - mp.cos(th)) * (1 - mp.cos(ph))
            if abs(prod.imag) > NU_TOL:
                raise NumericInconsistency("product over embeddings is not real")
            out.append((float(prod.real), float(closed), float(th), float(ph)))
    return out


def nu(order: Order, unit_data: UnitData) -> float:
    """Average over the 2 mu fundamental units of prod_alpha (1 - alpha(u)/|alpha(u)|)."""
    if order.field.signature != (0, 2):
        raise PreconditionViolated("nu is defined for totally complex quartic orders")
    terms = nu_terms(order, unit_data)
    for prod, closed, _, _ in terms:
        if abs(prod - closed) > NU_TOL:
            raise NumericInconsistency(f"product {prod} differs from closed form {closed}")
    val = sum(t[0] for t in terms) / (2 * unit_data.mu)
    if not (-NU_TOL <= val <= 16 + NU_TOL):
        raise InternalError("nu out of range")
    return min(max(val, 0.0), 16.0)


def is_real_element(order: Order, u) -> bool:
    """Does u lie in a real subfield (all conjugates real)?"""
    from sympy import Matrix, Poly, symbols, sqf_list

    x = symbols("x")
    cp = Poly(Matrix(order.mult_matrix(list(u))).charpoly(x), x)
    # charpoly is a power of the minimal polynomial
    _, facs = sqf_list(cp)
    from sympy import real_roots

    for g, _ in facs:
        if len(real_roots(g)) != g.degree():
            return False
    return True


def weakly_neat(order: Order, unit_data: UnitData, kmax=24) -> bool:
    """No root of unity zeta and 1 <= k <= kmax with zeta eps^k real."""
    emb = _Embedder(order)
    eps = unit_data.fund_unit
    th, ph = unit_data.angles
    targs = []
    for z in unit_data.torsion:
        zz = emb.floats(z)
        targs.append((z, math.atan2(zz[0].imag, zz[0].real), math.atan2(zz[2].imag, zz[2].real)))
    for k in range(1, kmax + 1):
        for z, aA, aB in targs:
            # arguments of zeta eps^k under the two pairs, up to conjugation
            for sa in (1, -1):
                for sb in (1, -1):
                    xa = (aA + sa * k * th) / math.pi
                    xb = (aB + sb * k * ph) / math.pi
                    if abs(xa - round(xa)) < 1e-6 and abs(xb - round(xb)) < 1e-6:
                        u = order.mul(z, order.power(eps, k))
                        if is_real_element(order, u):
                            return False
    return True
