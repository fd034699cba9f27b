"""Ideals of orders as integer lattices, prime ideals and valuations.

An ideal is stored by the row Hermite normal form of its basis written in the
coordinates of the order's basis, so two ideals are equal exactly when their
HNFs agree.  Prime ideals are only produced at primes where the order is
maximal; valuations there use an element beta with beta*P inside pO.
"""

from .arith.linalg import hnf_with_modulus, kernel_mod_p, rank_mod_p, row_space_mod_p
from .arith.primes import factorint, is_prime
from .errors import InvalidArgument, PreconditionViolated
from .orders import Order


class OrderIdeal:
    """Nonzero ideal of an order, as an HNF lattice in order coordinates."""

    def __init__(self, order: Order, hnf):
        self.order = order
        self.hnf = [list(r) for r in hnf]
        n = order.n
        if len(self.hnf) != n or any(len(r) != n for r in self.hnf):
            raise InvalidArgument("ideal HNF must be square of the order's degree")
        nrm = 1
        for i in range(n):
            nrm *= self.hnf[i][i]
        if nrm <= 0:
            raise InvalidArgument("ideal HNF must have positive diagonal")
        self.norm = nrm

    @classmethod
    def from_generators(cls, order: Order, gens, modulus=None):
        """Ideal generated by the given elements; ``modulus`` must lie in it."""
        rows = []
        for g in gens:
            rows.extend(order.mult_matrix(list(g)))
        if modulus is None:
            modulus = 1
            for g in gens:
                if any(g):
                    modulus = abs(order.norm(list(g)))
                    break
        return cls(order, hnf_with_modulus(rows, modulus, order.n))

    @classmethod
    def principal(cls, order: Order, a):
        return cls.from_generators(order, [a], abs(order.norm(list(a))))

    @classmethod
    def unit(cls, order: Order):
        n = order.n
        return cls(order, [[int(i == j) for j in range(n)] for i in range(n)])

    def key(self):
        return tuple(map(tuple, self.hnf))

    def __eq__(self, other):
        return isinstance(other, OrderIdeal) and self.order is other.order and self.hnf == other.hnf

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"OrderIdeal(norm={self.norm}, hnf={self.hnf})"

    def __mul__(self, other: "OrderIdeal"):
        o = self.order
        gens = [o.mul(a, b) for a in self.hnf for b in other.hnf]
        # norm(I) lies in I, so N(I)N(J) lies in IJ
        return OrderIdeal(o, hnf_with_modulus(gens, self.norm * other.norm, o.n))

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidArgument("negative ideal powers are not supported")
        r = OrderIdeal.unit(self.order)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def contains(self, x) -> bool:
        """Membership by back substitution in the upper triangular HNF."""
        x = list(x)
        n = self.order.n
        for i in range(n):
            piv = self.hnf[i][i]
            if x[i] % piv:
                return False
            q = x[i] // piv
            if q:
                x = [a - q * b for a, b in zip(x, self.hnf[i])]
        return not any(x)

    def gram_basis(self):
        """Basis rows in order coordinates (for lattice enumeration)."""
        return self.hnf


class PrimeIdeal(OrderIdeal):
    def __init__(self, order, hnf, p, e, f, beta):
        super().__init__(order, hnf)
        self.p, self.e, self.f = p, e, f
        self.beta = beta  # beta * P lies in pO, beta not in pO

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, e={self.e}, f={self.f})"

    def valuation(self, x) -> int:
        """Exponent of P in the principal ideal (x), x nonzero."""
        if not any(x):
            raise InvalidArgument("valuation of zero")
        o, p = self.order, self.p
        v = 0
        y = list(x)
        while True:
            z = o.mul(y, self.beta)
            if any(c % p for c in z):
                return v
            y = [c // p for c in z]
            v += 1


def _mulp(order, a, b, p):
    return [x % p for x in order.mul(a, b)]


def _powp(order, a, e, p):
    r, b = [x % p for x in order.one()], [x % p for x in a]
    while e:
        if e & 1:
            r = _mulp(order, r, b, p)
        b = _mulp(order, b, b, p)
        e >>= 1
    return r


def _primitive_idempotents(order: Order, p: int):
    n = order.n
    units = [[int(i == j) for j in range(n)] for i in range(n)]
    frob = [[x % p for x in order.power(u, p)] for u in units]
    shifted = [[(frob[i][j] - units[i][j]) % p for j in range(n)] for i in range(n)]
    fixed = kernel_mod_p(shifted, p)
    idems = [[x % p for x in order.one()]]
    for v in fixed:
        nxt = []
        for e in idems:
            ev = _mulp(order, e, v, p)
            for lam in range(p):
                t = [(a - lam * b) % p for a, b in zip(ev, e)]
                el = [(a - b) % p for a, b in zip(e, _powp(order, t, p - 1, p))] if any(t) else list(e)
                if any(el):
                    nxt.append(el)
        idems = nxt
    if len(idems) != len(fixed):
        raise PreconditionViolated("idempotent decomposition failed")
    return idems


def _radical_mod_p(order: Order, p: int):
    n = order.n
    units = [[int(i == j) for j in range(n)] for i in range(n)]
    j = 1
    while p**j < n:
        j += 1
    frob_j = [[x % p for x in order.power(u, p**j)] for u in units]
    return kernel_mod_p(frob_j, p)


def prime_ideals_above(order: Order, p: int):
    """The prime ideals of the order above p, sorted by (f, e, hnf)."""
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    if not order.is_maximal_at(p):
        raise PreconditionViolated(f"order is not certified maximal at {p}")
    cache = order.__dict__.setdefault("_prime_cache", {})
    if p in cache:
        return cache[p]
    n = order.n
    units = [[int(i == j) for j in range(n)] for i in range(n)]
    rad = _radical_mod_p(order, p)
    rad_rank = len(rad)
    out = []
    for e in _primitive_idempotents(order, p):
        one_minus = [(a - b) % p for a, b in zip(order.one(), e)]
        gens = list(rad) + [_mulp(order, one_minus, u, p) for u in units]
        space = row_space_mod_p(gens, p)
        f = n - len(space)
        eA = [_mulp(order, e, u, p) for u in units]
        dim = rank_mod_p(eA, p)
        fe = rank_mod_p(eA + rad, p) - rad_rank
        if fe != f or dim % f:
            raise PreconditionViolated("inconsistent residue degree")
        hnf = hnf_with_modulus([list(r) for r in space], p, n)
        beta = _beta(order, hnf, p)
        out.append(PrimeIdeal(order, hnf, p, dim // f, f, beta))
    out.sort(key=lambda P: (P.f, P.e, P.hnf))
    if sum(P.e * P.f for P in out) != n:
        raise PreconditionViolated(f"splitting at {p} does not account for the degree")
    cache[p] = out
    return out


def _beta(order: Order, hnf, p):
    """beta in O with beta*P in pO and beta not in pO."""
    n = order.n
    # beta -> (beta * b_i mod p) for each basis row b_i of P; stack the maps
    units = [[int(i == j) for j in range(n)] for i in range(n)]
    cols = []
    for u in units:
        row = []
        for b in hnf:
            row.extend(x % p for x in order.mul(u, b))
        cols.append(row)
    ker = kernel_mod_p(cols, p)
    for v in ker:
        if any(x % p for x in v):
            return [x % p for x in v]
    raise PreconditionViolated("no uniformizer inverse found")


def factor_principal(order: Order, x, primes):
    """Exponent vector of (x) over the prime ideals above ``primes``.

    Returns (vector, ideals) or None when the norm has a prime factor outside
    the list.
    """
    nrm = abs(order.norm(list(x)))
    if nrm == 0:
        raise InvalidArgument("zero has no factorisation")
    ideals = [P for p in primes for P in prime_ideals_above(order, p)]
    vec = []
    rest = nrm
    for p in primes:
        k = 0
        while rest % p == 0:
            rest //= p
            k += 1
        Ps = prime_ideals_above(order, p)
        if k == 0:
            vec.extend([0] * len(Ps))
        elif len(Ps) == 1:
            vec.append(k // Ps[0].f)
        else:
            vec.extend(P.valuation(x) for P in Ps)
    if rest != 1:
        return None
    return vec, ideals


def ideal_factorisation(ideal: OrderIdeal):
    """Prime ideal factorisation of an ideal of a maximal order, as a list of (P, k)."""
    order = ideal.order
    out = []
    rem = ideal
    for p in sorted(factorint(ideal.norm)):
        for P in prime_ideals_above(order, p):
            k = 0
            while True:
                # P divides rem iff rem is contained in P
                if not all(P.contains(r) for r in rem.hnf):
                    break
                rem = _divide_by_prime(rem, P)
                k += 1
            if k:
                out.append((P, k))
    if rem.norm != 1:
        raise PreconditionViolated("ideal did not factor over the primes above its norm")
    return out


def _divide_by_prime(ideal: OrderIdeal, P: PrimeIdeal):
    """I P^{-1} for I inside P, as (beta/p) I."""
    o, p = ideal.order, P.p
    gens = []
    for r in ideal.hnf:
        z = o.mul(r, P.beta)
        if any(c % p for c in z):
            raise PreconditionViolated("ideal is not divisible by P")
        gens.append([c // p for c in z])
    # P^{-1} = O + (beta/p) O, so I P^{-1} = I + (beta/p) I
    rows = gens + ideal.hnf
    nrm = ideal.norm // (p**P.f)
    return OrderIdeal(o, hnf_with_modulus(rows, nrm, o.n))
