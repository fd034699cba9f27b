"""Relations among principal ideals over a factor base of prime ideals.

Each accepted element x contributes its valuation vector v(x).  Vectors are
reduced into an integer echelon form; a vector that reduces to zero is a
unit, recorded as an exponent vector over the accepted elements.  The echelon
rows span the relation lattice used for class groups.
"""

import math

import numpy as np

from .errors import InternalError
from .ideals import factor_principal, prime_ideals_above


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _comb(ea, ca, eb, cb):
    """ca*ea + cb*eb for sparse exponent dicts."""
    out = {}
    for k, v in ea.items():
        out[k] = out.get(k, 0) + ca * v
    for k, v in eb.items():
        out[k] = out.get(k, 0) + cb * v
    return {k: v for k, v in out.items() if v}


class RelationSearch:
    """Accumulates factored elements of an order over a fixed factor base."""

    def __init__(self, order, primes):
        self.order = order
        self.primes = sorted(primes)
        self.ideals = [P for p in self.primes for P in prime_ideals_above(order, p)]
        self.k = len(self.ideals)
        self.elements = []
        self.logs = []
        self.rows = {}  # pivot column -> (vector, exponents)
        self.units = []  # (exponents, log|sigma_A|)
        self._seen = set()

    def _log(self, x):
        from .units import embedding_matrix

        if not hasattr(self, "_E"):
            E = embedding_matrix(self.order, 80)
            self._E = np.array([complex(row[0]) for row in E])
        return math.log(abs(complex(np.dot(np.asarray(x, dtype=float), self._E))))

    def smooth_candidate(self, approx_norm):
        """Cheap test on a rounded norm before exact factoring."""
        m = int(round(abs(approx_norm)))
        if m == 0:
            return False
        for p in self.primes:
            while m % p == 0:
                m //= p
        return m == 1

    def add(self, x):
        """Factor x; returns 'unit', 'relation', 'new' or None when not smooth."""
        x = list(x)
        key = tuple(x)
        if key in self._seen:
            return None
        self._seen.add(key)
        res = factor_principal(self.order, x, self.primes)
        if res is None:
            return None
        vec, _ = res
        idx = len(self.elements)
        self.elements.append(x)
        self.logs.append(self._log(x))
        return self._reduce(list(vec), {idx: 1})

    def _reduce(self, v, ex):
        for col in range(self.k):
            if v[col] == 0:
                continue
            if col not in self.rows:
                if v[col] < 0:
                    v, ex = [-a for a in v], {k: -c for k, c in ex.items()}
                self.rows[col] = (v, ex)
                return "new"
            w, wex = self.rows[col]
            a, b = w[col], v[col]
            if b % a == 0:
                q = b // a
                v = [vi - q * wi for vi, wi in zip(v, w)]
                ex = _comb(ex, 1, wex, -q)
                continue
            g, s, t = _xgcd(a, b)
            piv = [s * wi + t * vi for wi, vi in zip(w, v)]
            pex = _comb(wex, s, ex, t)
            other = [(b // g) * wi - (a // g) * vi for wi, vi in zip(w, v)]
            oex = _comb(wex, b // g, ex, -(a // g))
            if piv[col] < 0:
                piv, pex = [-c for c in piv], {k: -c for k, c in pex.items()}
            self.rows[col] = (piv, pex)
            v, ex = other, oex
        self.units.append((ex, self.log_of(ex)))
        return "unit"

    def log_of(self, ex):
        return math.fsum(c * self.logs[i] for i, c in ex.items())

    def relation_matrix(self):
        """Echelon rows (valuation vectors) spanning the relation lattice."""
        return [self.rows[c][0] for c in sorted(self.rows)]

    def relation_rank(self):
        return len(self.rows)

    def unit_generator(self, tol):
        """Exponents and log of a generator of the units found, modulo torsion.

        Logs below ``tol`` count as torsion; ``tol`` must be below half the
        smallest possible |log| of a non-torsion unit.
        """
        g = None
        for ex, r in self.units:
            if abs(r) < tol:
                continue
            if g is None:
                g = (ex, r)
                continue
            a, b = g, (ex, r)
            if abs(a[1]) < abs(b[1]):
                a, b = b, a
            while abs(b[1]) >= tol:
                q = round(a[1] / b[1])
                nex = _comb(a[0], 1, b[0], -q)
                a, b = b, (nex, self.log_of(nex))
            g = a
        return g

    def evaluate(self, ex):
        """The exact order element prod x_i^{e_i}; it must be integral."""
        o = self.order
        num, den = o.one(), o.one()
        for i, c in sorted(ex.items()):
            if c > 0:
                num = o.mul(num, o.power(self.elements[i], c))
            else:
                den = o.mul(den, o.power(self.elements[i], -c))
        q = divide_exact(o, num, den)
        if q is None:
            raise InternalError("relation product is not in the order")
        return q


def divide_exact(order, a, b):
    """a / b when it lies in the order, else None."""
    from sympy import Matrix

    M = Matrix(order.mult_matrix(b))
    adj = M.adjugate()
    one = order.one()
    n = order.n
    binv = [int(sum(one[i] * adj[i, j] for i in range(n))) for j in range(n)]
    prod = order.mul(a, binv)
    d = int(M.det())
    if any(c % d for c in prod):
        return None
    return [c // d for c in prod]
