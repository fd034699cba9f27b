"""Class numbers and class groups.

Quadratic orders use reduced binary quadratic forms (forms.py).  The ideal
path works for maximal orders with unit rank at most one (quadratic fields
and totally complex quartic fields): prime ideals of norm up to the
Minkowski bound generate the class group, relations come from factoring
small principal ideals, and the resulting quotient is certified by showing
that every nontrivial element of prime order in it is a non-principal
ideal class.
"""

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from mpmath import mp

from .arith.linalg import elementary_divisors, hnf_rows
from .arith.primes import factorint, primes_up_to
from .errors import Inconclusive, InvalidArgument, PreconditionViolated
from .forms import class_group_forms
from .ideals import OrderIdeal, prime_ideals_above
from .lattice import enumerate_short, lll_gram_mp
from .orders import Order, is_maximal
from .relations import RelationSearch
from .units import embedding_matrix, fundamental_unit

CLASS_BOUND_CEILING = 60.0
# half-width, in log-norm units, of the boxes covering the unit-reduced domain
BOX_HALF_WIDTH = 0.5
PRINCIPAL_POINT_LIMIT = 20000


def minkowski_bound(field, order_disc) -> float:
    """(4/pi)^s n!/n^n sqrt|disc|."""
    if not order_disc:
        raise PreconditionViolated("discriminant must be nonzero")
    n = field.degree
    _, s = field.signature
    return (4 / math.pi) ** s * math.factorial(n) / n**n * math.sqrt(abs(order_disc))


# ------------------------------------------------------------ principality


def _places(order: Order):
    """Embedding columns grouped by place, with local degrees."""
    r, s = order.field.signature
    places = [([k], 1) for k in range(r)]
    places += [([r + 2 * j, r + 2 * j + 1], 2) for j in range(s)]
    return places


def _unit_rank(order):
    r, s = order.field.signature
    return r + s - 1


def _order_regulator(order: Order):
    cache = order.__dict__.setdefault("_unit_cache", {})
    if "ud" not in cache:
        cache["ud"] = fundamental_unit(order) if _unit_rank(order) == 1 else None
    return cache["ud"]


def is_principal(order: Order, ideal: OrderIdeal, unit_data=None):
    """A generator of the ideal, or None when it is not principal.

    A generator may be multiplied by powers of the fundamental unit until
    s = log w_1(alpha) - log(N)/2 lies in [-R/2, R/2], where w_1 is the
    normalised absolute value at the first place.  That interval is covered
    by boxes {w_1 <= sqrt(N) e^(t+d), w_2 <= sqrt(N) e^(-t+d)}, each inside
    an ellipsoid that lattice enumeration lists completely.
    """
    if ideal.order is not order:
        raise InvalidArgument("ideal belongs to a different order")
    rank = _unit_rank(order)
    if rank > 1:
        raise PreconditionViolated("principality test needs unit rank at most one")
    N = ideal.norm
    n = order.n
    if N == 1:
        return order.one()
    places = _places(order)
    if rank == 0:
        centres = [0.0]
        R = 0.0
    else:
        ud = unit_data or _order_regulator(order)
        R = ud.regulator
        d = BOX_HALF_WIDTH
        steps = max(1, math.ceil(R / (2 * d)))
        centres = [-R / 2 + (2 * j + 1) * R / (2 * steps) for j in range(steps)]
        d = R / (2 * steps) + 1e-9
    half = math.log(N) / 2
    # the box weights reach e^(+-R); carry the Gram matrices at enough precision
    prec = 80 + int(3 * (R + abs(half)) / math.log(2))
    Em = embedding_matrix(order, prec)
    with mp.workprec(prec):
        Z = [[mp.fsum(ideal.hnf[i][l] * Em[l][k] for l in range(n)) for k in range(n)] for i in range(n)]
    for t in centres:
        if rank == 0:
            logs = [half * 2 / len(places)] * len(places)
        else:
            logs = [half + t + d, half - t + d]
        with mp.workprec(prec):
            weights = [None] * n
            for (cols, dv), lg in zip(places, logs):
                for k in cols:
                    weights[k] = mp.exp(-2 * mp.mpf(lg) / dv)
            G = [
                [mp.re(mp.fsum(Z[i][k] * mp.conj(Z[j][k]) * weights[k] for k in range(n))) for j in range(n)]
                for i in range(n)
            ]
        red = lll_gram_mp(G, prec)
        pts = enumerate_short(None, float(n), limit=PRINCIPAL_POINT_LIMIT, reduced=red)
        if pts is None:
            raise Inconclusive("principality search exceeded its point budget", multiple_of_h=None)
        for c in pts:
            x = [sum(c[i] * ideal.hnf[i][j] for i in range(n)) for j in range(n)]
            if abs(order.norm(x)) == N:
                return x
    return None


# ------------------------------------------------------------ ideal path


@dataclass
class ClassGroupResult:
    h: int
    divisors: list
    certified: bool
    minkowski: float
    factor_base: list = dc_field(default_factory=list)
    relations: int = 0
    principal_checks: int = 0


def _reduce_mod(H, c):
    c = list(c)
    for j, row in enumerate(H):
        q = c[j] // row[j]
        if q:
            c = [a - q * b for a, b in zip(c, row)]
    return c


def _short_elements(order, ideal, want, limit=4000):
    """Around ``want`` shortest elements (by T2) of an ideal, in order coordinates."""
    n = order.n
    E = np.array([[complex(z) for z in row] for row in embedding_matrix(order, 80)])
    Z = np.array(ideal.hnf, dtype=float) @ E
    G = np.real(Z @ Z.conj().T)
    bound = n * ideal.norm ** (2 / n)
    pts = []
    for _ in range(40):
        got = enumerate_short(G, bound, limit=limit)
        if got is None:
            break
        pts = got
        if len(pts) >= want:
            break
        bound *= 1.6
    return [[sum(c[i] * ideal.hnf[i][j] for i in range(n)) for j in range(n)] for c in pts]


def ideal_class_group(order: Order, ceiling=CLASS_BOUND_CEILING) -> ClassGroupResult:
    """Class group of a maximal order of unit rank <= 1 via ideals."""
    if _unit_rank(order) > 1:
        raise PreconditionViolated("ideal path needs unit rank at most one")
    if not is_maximal(order):
        raise PreconditionViolated("ideal path is implemented for maximal orders")
    mb = minkowski_bound(order.field, order.disc)
    if mb > ceiling:
        raise Inconclusive(f"Minkowski bound {mb:.4g} exceeds the ceiling {ceiling}", multiple_of_h=None)
    primes = primes_up_to(int(mb))
    if not primes:
        return ClassGroupResult(1, [], True, mb)
    rs = RelationSearch(order, primes)
    ideals = rs.ideals
    k = len(ideals)
    for p in primes:
        rs.add([p * c for c in order.one()])
    for x in _short_elements(order, OrderIdeal.unit(order), 200):
        rs.add(x)
    for P in ideals:
        if rs.relation_rank() == k:
            break
        for x in _short_elements(order, P, 40):
            rs.add(x)
    if rs.relation_rank() < k:
        for P, Q in itertools.combinations_with_replacement(ideals, 2):
            for x in _short_elements(order, P * Q, 40):
                rs.add(x)
            if rs.relation_rank() == k:
                break
    if rs.relation_rank() < k:
        raise Inconclusive("relation lattice does not have full rank", multiple_of_h=None)
    checks = 0
    while True:
        H = hnf_rows(rs.relation_matrix(), k)
        hprime = 1
        for j in range(k):
            hprime *= H[j][j]
        found = None
        for q in sorted(factorint(hprime)):
            for c in _q_torsion_reps(H, q):
                I = OrderIdeal.unit(order)
                for P, e in zip(ideals, c):
                    if e:
                        I = I * (P**e)
                checks += 1
                gen = is_principal(order, I)
                if gen is not None:
                    found = gen
                    break
            if found:
                break
        if found is None:
            divs = sorted(d for d in elementary_divisors(H) if d > 1)
            return ClassGroupResult(
                hprime, divs, True, mb, [(P.p, P.f) for P in ideals], len(rs.elements), checks
            )
        if rs.add(found) is None:
            raise Inconclusive("principal ideal generator did not factor", multiple_of_h=hprime)


def _q_torsion_reps(H, q):
    """Nonzero elements of order q in Z^k / rows(H), one per cyclic subgroup."""
    k = len(H)
    diag = [H[j][j] for j in range(k)]
    seen = set()
    out = []
    for c in itertools.product(*[range(d) for d in diag]):
        if not any(c):
            continue
        if any(_reduce_mod(H, [q * x for x in c])):
            continue
        key = tuple(c)
        if key in seen:
            continue
        for lam in range(1, q):
            seen.add(tuple(_reduce_mod(H, [lam * x for x in c])))
        out.append(list(c))
    return out


def class_number_ideals(order: Order, ceiling=CLASS_BOUND_CEILING):
    res = ideal_class_group(order, ceiling)
    return res.h, res.divisors


def class_number(order: Order, ceiling=CLASS_BOUND_CEILING):
    """(h, elementary divisors) of the order's class group."""
    if order.n == 2:
        h, divs = class_group_forms(order.disc)
        return h, divs
    if order.n == 4:
        if order.field.signature != (0, 2):
            raise PreconditionViolated("quartic class numbers need a totally complex field")
        return class_number_ideals(order, ceiling)
    raise PreconditionViolated("unsupported degree")
