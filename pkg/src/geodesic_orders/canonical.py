"""Canonical defining polynomials.

The canonical polynomial of a field is the characteristic polynomial of a
generator of the maximal order with least T2 = sum |sigma(x)|^2.  Ties are
broken by making the highest nonzero odd coefficient negative (x -> -x),
then by the smallest |polynomial discriminant|, then coefficient by coefficient from x^3 down, by absolute value
and then preferring the negative sign.  Isomorphic fields get
the same polynomial, so it serves as a field identifier.
"""

from .arith import IntPoly
from .arith.intpoly import is_squarefree, poly_discriminant
from .errors import InternalError
from .lattice import enumerate_short
from .orders import Order, maximal_order
from .units import t2_gram

# relative slack for deciding that two T2 values are equal
T2_TIE = 1e-9


def _normalise_sign(f: IntPoly) -> IntPoly:
    cs = list(f.coeffs)
    n = len(cs) - 1
    for i in range(n - 1, -1, -1):
        if (n - i) % 2 and cs[i]:
            if cs[i] > 0:
                cs = [c if (n - j) % 2 == 0 else -c for j, c in enumerate(cs)]
            break
    return IntPoly(cs)


def _rank(f: IntPoly):
    top = list(reversed(f.coeffs[:-1]))
    return (abs(poly_discriminant(f)),) + tuple(v for c in top for v in (abs(c), c))


def canonical_polynomial_of_order(order: Order) -> IntPoly:
    n = order.n
    G = t2_gram(order)
    bound = float(n) + 1.0
    while True:
        pts = enumerate_short(G, bound, limit=200000)
        if pts is None:
            raise InternalError("short vector enumeration overflowed while looking for a generator")
        gens = []
        for c in pts:
            cp = order.charpoly(list(c))
            if is_squarefree(cp):
                t2 = sum(c[i] * G[i][j] * c[j] for i in range(n) for j in range(n))
                gens.append((t2, cp))
        if gens:
            best = min(t for t, _ in gens)
            ties = [cp for t, cp in gens if t <= best * (1 + T2_TIE)]
            return min((_normalise_sign(cp) for cp in ties), key=_rank)
        bound *= 2


def canonical_polynomial(field) -> IntPoly:
    return canonical_polynomial_of_order(maximal_order(field))


def canonical_key(field) -> str:
    return canonical_polynomial(field).key()
