"""Splitting of rational primes, the non-decomposition filter and lambda_S."""

from dataclasses import dataclass

from .arith.linalg import kernel_mod_p, rank_mod_p
from .arith.modp import factor_mod_p
from .arith.primes import is_prime
from .errors import FieldNotInC, InvalidArgument, InvalidS, PreconditionViolated, UnsupportedDegree
from .fields import NumberField, quadratic_subfields
from .orders import Order, order_maximal_at, p_maximal_order

Cc, Cr, NotInC = "Cc", "Cr", "NotInC"


@dataclass(frozen=True)
class SplittingType:
    """Ramification indices and inertia degrees (e_i, f_i) of the primes above p."""

    p: int
    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @property
    def degree(self):
        return sum(e * f for e, f in self.pairs)

    def __len__(self):
        return len(self.pairs)


def _valuation(n, p):
    n = abs(n)
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def index_divisible_by(order: Order, p: int) -> bool:
    """Does p divide [order : Z[t]]?"""
    return _valuation(order.field.poly_disc, p) != _valuation(order.disc, p)


def _split_dedekind(f, p):
    return [(m, g.degree) for g, m in factor_mod_p(f, p)]


def _split_algebra(order: Order, p: int):
    """Splitting read from the finite algebra A = O/pO.

    Elements with x^p = x form the span of the primitive idempotents, one per
    prime above p.  For such an idempotent e, e*A has dimension e_i f_i and
    its image modulo the radical has dimension f_i.
    """
    n = order.n
    units = [[int(i == j) for j in range(n)] for i in range(n)]
    frob = [[x % p for x in order.power(u, p)] for u in units]
    shifted = [[(frob[i][j] - units[i][j]) % p for j in range(n)] for i in range(n)]
    fixed = kernel_mod_p(shifted, p)

    j = 1
    while p**j < n:
        j += 1
    frob_j = [[x % p for x in order.power(u, p**j)] for u in units]
    rad = kernel_mod_p(frob_j, p)
    rad_rank = len(rad)

    def mulp(a, b):
        return [x % p for x in order.mul(a, b)]

    def powp(a, e):
        r, b = [x % p for x in order.one()], a
        while e:
            if e & 1:
                r = mulp(r, b)
            b = mulp(b, b)
            e >>= 1
        return r

    idems = [[x % p for x in order.one()]]
    for v in fixed:
        nxt = []
        for e in idems:
            ev = mulp(e, v)
            parts = []
            for lam in range(p):
                t = [(a - lam * b) % p for a, b in zip(ev, e)]
                el = [(a - b) % p for a, b in zip(e, powp(t, p - 1))] if any(t) else list(e)
                if any(el):
                    parts.append(el)
            nxt.extend(parts)
        idems = nxt
    if len(idems) != len(fixed):
        raise PreconditionViolated("idempotent decomposition failed")
    pairs = []
    for e in idems:
        eA = [mulp(e, u) for u in units]
        dim = rank_mod_p(eA, p)
        f = rank_mod_p(eA + rad, p) - rad_rank
        if f <= 0 or dim % f:
            raise PreconditionViolated("inconsistent residue degree")
        pairs.append((dim // f, f))
    return pairs


def splitting_type(order: Order, p: int, method="auto") -> SplittingType:
    """(e_i, f_i) for the primes above p, for an order certified p-maximal."""
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    if not order.is_maximal_at(p):
        raise PreconditionViolated(f"order is not certified maximal at {p}")
    if method == "auto":
        method = "algebra" if index_divisible_by(order, p) else "dedekind"
    if method == "dedekind":
        if index_divisible_by(order, p):
            raise PreconditionViolated(f"{p} divides the index of Z[t]; Dedekind-Kummer does not apply")
        pairs = _split_dedekind(order.field.min_poly, p)
    elif method == "algebra":
        pairs = _split_algebra(order, p)
    else:
        raise InvalidArgument(f"unknown method {method!r}")
    st = SplittingType(p, pairs)
    if st.degree != order.n:
        raise PreconditionViolated(f"splitting at {p} does not account for the degree")
    return st


def is_non_decomposed(order: Order, p: int) -> bool:
    return len(splitting_type(order, p)) == 1


def validate_S(S):
    S = sorted(set(S))
    if not S or len(S) % 2:
        raise InvalidS(f"prime set must be nonempty with an even number of elements, got {S}")
    for p in S:
        if not is_prime(p):
            raise InvalidS(f"{p} is not prime")
    return S


def _local(order: Order, p):
    return order if order.is_maximal_at(p) else p_maximal_order(order, p)


def lambda_S(order: Order, S) -> int:
    """Product over p in S of the inertia degree of the unique prime above p."""
    S = validate_S(S)
    lam = 1
    for p in S:
        st = splitting_type(_local(order, p), p)
        if len(st) != 1:
            raise FieldNotInC(f"{p} is decomposed in {order.field}")
        lam *= st.pairs[0][1]
    return lam


def classify_field(field: NumberField, S) -> str:
    """Cc, Cr or NotInC for a quartic field and a prime set."""
    if field.degree != 4:
        raise UnsupportedDegree("classification is defined for quartic fields")
    if not field.is_totally_complex:
        return NotInC
    order = order_maximal_at(field, S)
    for p in sorted(set(S)):
        if len(splitting_type(order, p)) != 1:
            return NotInC
    if any(d > 0 for d in quadratic_subfields(field)):
        return Cr
    return Cc
