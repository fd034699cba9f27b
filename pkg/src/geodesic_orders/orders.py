"""Orders: full-rank subrings of a number field, and p-maximalisation."""

from fractions import Fraction
from functools import cached_property

from .arith import modp
from .arith.intpoly import IntPoly
from .arith.linalg import common_denominator, det, hnf_rows, inverse, kernel_mod_p, vecmat
from .arith.primes import factorint, is_prime
from .errors import InternalError, InvalidArgument
from .fields import NumberField


class Order:
    """A Z-lattice of rank n in a number field that is closed under products.

    ``basis`` rows express the integral basis in the power basis.  ``table``
    gives products of basis elements in basis coordinates, so order elements
    can be handled as integer vectors throughout.
    """

    def __init__(self, field: NumberField, basis, maximal_at=frozenset(), disc=None):
        self.field = field
        self.n = field.degree
        self.basis = [[Fraction(x) for x in r] for r in basis]
        self._inv = inverse(self.basis)
        d = det(self.basis)
        if d == 0:
            raise InvalidArgument("basis matrix is singular")
        if disc is None:
            disc = field.poly_disc * d * d
            if disc.denominator != 1:
                raise InvalidArgument("basis does not span an order")
            disc = int(disc)
        self.disc = disc
        self.maximal_at = frozenset(maximal_at)
        self.table = self._build_table()

    def __repr__(self):
        return f"Order({self.field.min_poly}, disc={self.disc})"

    def _build_table(self):
        n = self.n
        T = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                prod = self.field.mul(self.basis[i], self.basis[j])
                c = vecmat(prod, self._inv)
                if any(x.denominator != 1 for x in c):
                    raise InvalidArgument("lattice is not closed under multiplication")
                T[i][j] = T[j][i] = [int(x) for x in c]
        one = vecmat(self.field.one(), self._inv)
        if any(x.denominator != 1 for x in one):
            raise InvalidArgument("lattice does not contain 1")
        self.one_coords = [int(x) for x in one]
        return T

    # element operations on integer coordinate vectors
    def mul(self, a, b):
        n = self.n
        out = [0] * n
        for i in range(n):
            ai = a[i]
            if ai:
                for j in range(n):
                    bj = b[j]
                    if bj:
                        c = ai * bj
                        row = self.table[i][j]
                        for k in range(n):
                            out[k] += c * row[k]
        return out

    def one(self):
        return list(self.one_coords)

    def power(self, a, e):
        result, base = self.one(), list(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def to_field(self, a):
        """Power-basis vector of the order element with coordinates a."""
        return vecmat(a, self.basis)

    def from_field(self, v):
        """Coordinates of a field element (may be non-integral)."""
        return vecmat(v, self._inv)

    def contains(self, v) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.from_field(v))

    def mult_matrix(self, a):
        """Integer matrix M with (x * a) coordinates = x_coords @ M."""
        n = self.n
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append(self.mul(e, a))
        return rows

    def norm(self, a) -> int:
        return det(self.mult_matrix(a))

    def trace(self, a) -> int:
        M = self.mult_matrix(a)
        return sum(M[i][i] for i in range(self.n))

    def charpoly(self, a) -> IntPoly:
        from sympy import Matrix, Poly, symbols

        x = symbols("x")
        cp = Matrix(self.mult_matrix(a)).charpoly(x)
        return IntPoly(reversed([int(c) for c in Poly(cp, x).all_coeffs()]))

    @cached_property
    def trace_form(self):
        n = self.n
        return [[self.trace(self.mul(_unit(n, i), _unit(n, j))) for j in range(n)] for i in range(n)]

    def index_in(self, other: "Order") -> Fraction:
        """[other : self] for self contained in other."""
        return Fraction(abs(det([other.from_field(self.to_field(_unit(self.n, i))) for i in range(self.n)])))

    def is_maximal_at(self, p) -> bool:
        """Certified p-maximal, either recorded or because p^2 does not divide disc."""
        return p in self.maximal_at or self.disc % (p * p) != 0

    def with_maximal(self, primes):
        o = Order.__new__(Order)
        o.__dict__.update(self.__dict__)
        o.maximal_at = self.maximal_at | frozenset(primes)
        return o


def _unit(n, i):
    v = [0] * n
    v[i] = 1
    return v


def equation_order(field: NumberField) -> Order:
    n = field.degree
    basis = [[int(i == j) for j in range(n)] for i in range(n)]
    return Order(field, basis, disc=field.poly_disc)


def _is_equation_order(order: Order) -> bool:
    n = order.n
    return all(order.basis[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def dedekind_criterion(f: IntPoly, p: int) -> bool:
    """True when Z[t] with f(t) = 0 is maximal at p."""
    factors = modp.factor_mod_p(f, p)
    g = [1]
    h = [1]
    for q, e in factors:
        qc = list(q.coeffs)
        g = _zmul(g, qc)
        for _ in range(e - 1):
            h = _zmul(h, qc)
    gh = _zmul(g, h)
    fc = list(f.coeffs)
    m = max(len(gh), len(fc))
    diff = [(gh[i] if i < len(gh) else 0) - (fc[i] if i < len(fc) else 0) for i in range(m)]
    if any(x % p for x in diff):
        raise InternalError("Dedekind lift does not reduce to f")
    F = modp.reduce([x // p for x in diff], p)
    common = modp.gcd(modp.gcd(F, modp.reduce(g, p), p), modp.reduce(h, p), p)
    return len(common) <= 1


def _zmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def radical_basis(order: Order, p: int):
    """HNF rows (order coordinates) of the p-radical of the order."""
    n = order.n
    j = 1
    while p**j < n:
        j += 1
    q = p**j
    rows = []
    for i in range(n):
        v = order.power(_unit(n, i), q)
        rows.append([x % p for x in v])
    # kernel of Frobenius^j as a map on O/pO
    ker = kernel_mod_p(rows, p)
    gens = [list(k) for k in ker]
    return hnf_rows(gens + [[p * int(a == b) for b in range(n)] for a in range(n)], n)


def _ring_of_multipliers(order: Order, ideal_rows, p: int):
    """Basis rows (order coordinates, denominators p) of {x : x I in I}."""
    n = order.n
    I = ideal_rows
    Iinv = inverse(I)
    blocks = []
    for i in range(n):
        row = []
        for w in I:
            prod = order.mul(_unit(n, i), w)
            c = vecmat(prod, Iinv)
            if any(x.denominator != 1 for x in c):
                raise InternalError("radical is not an ideal")
            row.extend(int(x) % p for x in c)
        blocks.append(row)
    ker = kernel_mod_p(blocks, p)
    U = hnf_rows([list(k) for k in ker] + [[p * int(a == b) for b in range(n)] for a in range(n)], n)
    return U


def p_maximal_order(order: Order, p: int) -> Order:
    """Smallest enlargement of ``order`` by a p-power index that is p-maximal."""
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    if p in order.maximal_at:
        return order
    cur = order
    while True:
        if cur.disc % (p * p) != 0:
            return cur.with_maximal([p])
        if _is_equation_order(cur) and dedekind_criterion(cur.field.min_poly, p):
            return cur.with_maximal([p])
        rad = radical_basis(cur, p)
        U = _ring_of_multipliers(cur, rad, p)
        if abs(det(U)) == p**cur.n:
            return cur.with_maximal([p])
        # new basis: U / p expressed in the power basis
        new_rows = [[Fraction(x, p) for x in vecmat(u, cur.basis)] for u in U]
        idx = Fraction(p**cur.n, abs(det(U)))
        disc = Fraction(cur.disc) / (idx * idx)
        if disc.denominator != 1:
            raise InternalError("non-integral discriminant during maximalisation")
        cur = Order(cur.field, _reduce_basis(new_rows), cur.maximal_at, disc=int(disc))


def _reduce_basis(rows):
    """Canonical basis of a lattice given by rational rows.

    HNF is taken with the column order reversed, so the last row is supported
    on the constant term only; for an order that row is 1.  Rows are then
    returned in reverse so the basis starts with 1.
    """
    n = len(rows)
    d = common_denominator(rows)
    rev = [[int(r[n - 1 - j] * d) for j in range(n)] for r in rows]
    H = hnf_rows(rev, n)
    return [[Fraction(r[n - 1 - j], d) for j in range(n)] for r in reversed(H)]


def order_maximal_at(field: NumberField, S=(), global_maximal=False) -> Order:
    """Equation order enlarged to be maximal at every prime of S.

    With ``global_maximal`` every prime whose square divides the polynomial
    discriminant is treated as well, giving the maximal order.
    """
    o = equation_order(field)
    primes = set(S)
    if global_maximal:
        primes |= set(factorint(field.poly_disc))
    for p in sorted(primes):
        o = p_maximal_order(o, p)
    return o


_MAXIMAL_CACHE = {}


def maximal_order(field: NumberField) -> Order:
    key = field.min_poly
    if key not in _MAXIMAL_CACHE:
        _MAXIMAL_CACHE[key] = order_maximal_at(field, (), global_maximal=True)
    return _MAXIMAL_CACHE[key]


def is_maximal(order: Order) -> bool:
    return all(order.is_maximal_at(p) for p in factorint(order.disc))
