"""Polynomials over F_p and deterministic factorisation.

Polynomials are lists of ints in [0, p), constant term first, no trailing
zeros.  Equal-degree splitting walks candidate polynomials in a fixed order
instead of drawing random ones, so results never depend on a seed.
"""

from itertools import count

from ..errors import InvalidArgument
from .intpoly import IntPoly
from .primes import is_prime


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def reduce(f, p):
    cs = f.coeffs if isinstance(f, IntPoly) else f
    return trim([c % p for c in cs])


def add(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def sub(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([c % p for c in out])


def divmod_(a, b, p):
    if not b:
        raise ZeroDivisionError("division by zero polynomial mod p")
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] * inv % p
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return trim(q), trim(a[:db])


def rem(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def gcd(a, b, p):
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, rem(a, b, p)
    return monic(a, p)


def powmod(a, e, m, p):
    result = [1]
    base = rem(a, m, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), m, p)
        base = rem(mul(base, base, p), m, p)
        e >>= 1
    return result


def derivative(a, p):
    return trim([i * c % p for i, c in enumerate(a) if i])


def _squarefree_decomposition(f, p):
    """Return [(g, k)] with f = prod g^k, each g squarefree and monic."""
    out = []

    def rec(f, mult):
        if len(f) <= 1:
            return
        fp = derivative(f, p)
        if not fp:
            # f is a p-th power: take p-th root of coefficients
            root = [f[i] for i in range(0, len(f), p)]
            rec(root, mult * p)
            return
        c = gcd(f, fp, p)
        w = divmod_(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = gcd(w, c, p)
            z = divmod_(w, y, p)[0]
            if len(z) > 1:
                out.append((monic(z, p), i * mult))
            i += 1
            w = y
            c = divmod_(c, y, p)[0]
        if len(c) > 1:
            root = [c[j] for j in range(0, len(c), p)]
            rec(root, mult * p)

    rec(monic(f, p), 1)
    return out


def _distinct_degree(f, p):
    out = []
    x = [0, 1]
    h = x
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, x, p), p)
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(f, g, p)[0]
            h = rem(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _candidates(n, p):
    """All nonconstant polynomials of degree < n over F_p, in a fixed order."""
    for k in count(1):
        if k >= p**n:
            return
        digits, v = [], k
        while v:
            digits.append(v % p)
            v //= p
        if len(digits) > 1:
            yield digits


def _equal_degree(f, d, p):
    n = len(f) - 1
    if n == d:
        return [f]
    for a in _candidates(n, p):
        if p == 2:
            t, s = a, a
            for _ in range(d - 1):
                s = rem(mul(s, s, p), f, p)
                t = add(t, s, p)
            g = gcd(f, t, p)
        else:
            e = (p**d - 1) // 2
            g = gcd(f, sub(powmod(a, e, f, p), [1], p), p)
        if 1 < len(g) < len(f):
            h = divmod_(f, g, p)[0]
            return _equal_degree(g, d, p) + _equal_degree(monic(h, p), d, p)
    raise AssertionError("equal-degree splitting failed")  # pragma: no cover


def factor_mod_p(f, p: int):
    """Factor f over F_p.

    Returns a list of (IntPoly, multiplicity) with monic factors whose
    coefficients lie in [0, p), sorted by degree and then by coefficients.
    The unit leading coefficient is dropped.
    """
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    a = reduce(f, p)
    if not a:
        raise InvalidArgument("polynomial vanishes mod p")
    factors = {}
    for g, k in _squarefree_decomposition(a, p):
        for h, d in _distinct_degree(g, p):
            for irr in _equal_degree(h, d, p):
                key = tuple(irr)
                factors[key] = factors.get(key, 0) + k
    items = sorted(factors.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return [(IntPoly(k), m) for k, m in items]


def is_irreducible_mod_p(f, p):
    fs = factor_mod_p(f, p)
    return len(fs) == 1 and fs[0][1] == 1 and fs[0][0].degree == len(reduce(f, p)) - 1
