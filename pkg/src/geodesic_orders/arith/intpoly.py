"""Dense univariate polynomials with integer coefficients."""

from fractions import Fraction
from math import gcd

from ..errors import InvalidArgument


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class IntPoly:
    """Polynomial over Z, coefficients stored constant term first.

    Instances are immutable and hashable.  The zero polynomial has an empty
    coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = []
        for c in coeffs:
            if isinstance(c, bool) or int(c) != c:
                raise InvalidArgument(f"non-integer coefficient {c!r}")
            cs.append(int(c))
        object.__setattr__(self, "coeffs", _trim(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def x(cls):
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return self.lc == 1

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim((other,))
        return NotImplemented

    def __hash__(self):
        return hash(("IntPoly", self.coeffs))

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mon and abs(c) == 1:
                t = mon
            else:
                t = f"{abs(c)}{mon}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, t))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, t in terms[1:]:
            s += f"{sign}{t}"
        return s

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise InvalidArgument("negative power")
        result, base = IntPoly((1,)), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self):
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive_part(self):
        g = self.content()
        if g == 0:
            return self
        if self.lc < 0:
            g = -g
        return IntPoly(c // g for c in self.coeffs)

    def canonical(self):
        """Content-free with positive leading coefficient."""
        return self.primitive_part()

    def compose(self, other):
        other = _coerce(other)
        acc = IntPoly(())
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def reverse(self):
        return IntPoly(reversed(self.coeffs))

    def scale_root(self, k):
        """Polynomial whose roots are k times the roots of self."""
        n = self.degree
        return IntPoly(c * k ** (n - i) for i, c in enumerate(self.coeffs))

    def key(self):
        """Comma-free key ``c0:c1:...:cn`` used for field identifiers."""
        return ":".join(str(c) for c in self.coeffs)

    @classmethod
    def from_key(cls, key):
        try:
            return cls(int(t) for t in key.split(":"))
        except ValueError as exc:
            raise InvalidArgument(f"bad polynomial key {key!r}") from exc


def _coerce(v):
    if isinstance(v, IntPoly):
        return v
    if isinstance(v, int):
        return IntPoly((v,))
    raise TypeError(f"cannot coerce {type(v).__name__} to IntPoly")


# Rational helpers.  Polynomials over Q are plain lists of Fractions.

def qpoly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def qpoly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = qpoly_trim(Fraction(c) for c in b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = qpoly_trim(a)
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    inv = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        coef = a[i + len(b) - 1] * inv
        q[i] = coef
        if coef:
            for j, bj in enumerate(b):
                a[i + j] -= coef * bj
    return q, qpoly_trim(a[: len(b) - 1])


def qpoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return qpoly_trim(out)


def qpoly_mulmod(a, b, m):
    return qpoly_divmod(qpoly_mul(a, b), m)[1]


def qpoly_gcd(a, b):
    a, b = qpoly_trim(a), qpoly_trim(b)
    while b:
        a, b = b, qpoly_divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Resultant via the subresultant-free Euclidean recursion over Q."""
    if f.is_zero() or g.is_zero():
        return 0
    a = [Fraction(c) for c in f.coeffs]
    b = [Fraction(c) for c in g.coeffs]
    res = Fraction(1)
    while True:
        m, n = len(a) - 1, len(b) - 1
        if n == 0:
            res *= b[0] ** m
            break
        _, r = qpoly_divmod(a, b)
        if not r:
            return 0
        k = len(r) - 1
        # Res(a, b) = (-1)^{mn} lc(b)^{m-k} Res(b, r)
        if (m * n) % 2:
            res = -res
        res *= b[-1] ** (m - k)
        a, b = b, r
    assert res.denominator == 1
    return int(res)


def poly_discriminant(f: IntPoly) -> int:
    """disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f)."""
    n = f.degree
    if n < 1:
        raise InvalidArgument("discriminant needs degree >= 1")
    if n == 1:
        return 1
    r = resultant(f, f.derivative())
    q, rem = divmod(r, f.lc)
    assert rem == 0
    return -q if (n * (n - 1) // 2) % 2 else q


def is_squarefree(f: IntPoly) -> bool:
    return f.degree >= 1 and poly_discriminant(f) != 0


def rational_roots(f: IntPoly):
    """All rational roots of f, by the rational root theorem on divisors."""
    from .primes import factorint

    cs = f.coeffs
    if not cs:
        raise InvalidArgument("zero polynomial")
    roots = set()
    k = 0
    while cs[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
    cs = cs[k:]
    if len(cs) == 1:
        return sorted(roots)

    def divisors(n):
        ds = [1]
        for p, e in factorint(n).items():
            ds = [d * p**i for d in ds for i in range(e + 1)]
        return ds

    for q in divisors(cs[-1]):
        for p in divisors(cs[0]):
            for s in (1, -1):
                r = Fraction(s * p, q)
                # evaluate q^n g(p/q) exactly
                val = 0
                for c in reversed(cs):
                    val = val * r + c
                if val == 0:
                    roots.add(r)
    return sorted(roots)


def sturm_count(f: IntPoly, lo=None, hi=None) -> int:
    """Number of distinct real roots of squarefree f in (lo, hi] (default all)."""
    a = [Fraction(c) for c in f.coeffs]
    seq = [a, [Fraction(c) for c in f.derivative().coeffs]]
    while seq[-1] and len(seq[-1]) > 1:
        _, r = qpoly_divmod(seq[-2], seq[-1])
        seq.append([-c for c in r])
    seq = [s for s in seq if s]

    def variations(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    def at_inf(sign):
        out = []
        for s in seq:
            d = len(s) - 1
            lead = 1 if s[-1] > 0 else -1
            out.append(lead * (sign**d))
        return out

    def at(x):
        out = []
        for s in seq:
            v = Fraction(0)
            for c in reversed(s):
                v = v * x + c
            out.append((v > 0) - (v < 0))
        return out

    vlo = variations(at_inf(-1) if lo is None else at(Fraction(lo)))
    vhi = variations(at_inf(1) if hi is None else at(Fraction(hi)))
    return vlo - vhi


def count_real_roots(f: IntPoly) -> int:
    if f.degree < 1:
        raise InvalidArgument("count_real_roots needs degree >= 1")
    if poly_discriminant(f) == 0:
        raise InvalidArgument("polynomial is not squarefree")
    return sturm_count(f)
