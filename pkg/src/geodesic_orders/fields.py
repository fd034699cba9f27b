"""Number fields of degree 2 and 4 given by a monic integer polynomial.

Field elements are represented by their coordinate vectors (Fractions) in the
power basis 1, t, ..., t^{n-1} of a fixed root t of the defining polynomial.
"""

from fractions import Fraction
from functools import cached_property
from itertools import permutations

import mpmath
from mpmath import mp

from .arith.intpoly import IntPoly, count_real_roots, poly_discriminant, rational_roots
from .arith.primes import is_square, squarefree_part
from .arith.roots import complex_roots
from .errors import InternalError, NotAField, UnsupportedDegree

SUBFIELD_CHECK_PREC = 512


def _quadratic_factor_exists(f: IntPoly) -> bool:
    """Does monic quartic f split as a product of two monic integer quadratics?

    Any such factor x^2 + u x + v has v | f(0) and u pinned down by the
    remaining coefficients; numerically the candidate u are sums of two roots,
    so we test every root pair and verify exactly.
    """
    with mp.workprec(200):
        rs = mp.polyroots(list(reversed(f.coeffs)), maxsteps=200, extraprec=200)
        for i in range(4):
            for j in range(i + 1, 4):
                s = rs[i] + rs[j]
                q = rs[i] * rs[j]
                if abs(s.imag) > 1e-30 or abs(q.imag) > 1e-30:
                    continue
                u, v = -int(mp.nint(s.real)), int(mp.nint(q.real))
                g = IntPoly((v, u, 1))
                if _divides(g, f):
                    return True
    return False


def _divides(g: IntPoly, f: IntPoly) -> bool:
    from .arith.intpoly import qpoly_divmod

    _, r = qpoly_divmod(f.coeffs, g.coeffs)
    return not r


def poly_mulmod(a, b, f: IntPoly):
    """Product of two coordinate vectors modulo the monic polynomial f."""
    n = f.degree
    prod = [Fraction(0)] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    fc = f.coeffs
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i in range(n):
                prod[k - n + i] -= c * fc[i]
    return prod[:n]


class NumberField:
    """A number field Q[x]/(f) with f monic, irreducible, degree 2 or 4."""

    def __init__(self, min_poly: IntPoly, _checked=False):
        self.min_poly = min_poly
        self.degree = min_poly.degree
        if not _checked:
            _validate(min_poly)
        r = count_real_roots(min_poly)
        self.signature = (r, (self.degree - r) // 2)

    def __repr__(self):
        return f"NumberField({self.min_poly})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(("NumberField", self.min_poly))

    @property
    def key(self):
        return self.min_poly.key()

    @property
    def is_totally_complex(self):
        return self.signature[0] == 0

    @cached_property
    def poly_disc(self):
        return poly_discriminant(self.min_poly)

    @cached_property
    def embeddings(self):
        """Certified roots, ordered so that conjugate pairs are adjacent."""
        balls = complex_roots(self.min_poly, 1e-60)
        real = [b for b in balls if b.is_real()]
        upper = [b for b in balls if b.imag > 0]
        out = list(real)
        for b in upper:
            out.append(b)
            out.append(b.conjugate())
        return out

    @cached_property
    def field_disc(self):
        from .orders import maximal_order

        return maximal_order(self).disc

    def roots_mp(self, prec):
        """Roots of f at the given precision in the same order as embeddings."""
        with mp.workprec(prec + 20):
            approx = mp.polyroots(list(reversed(self.min_poly.coeffs)), maxsteps=400, extraprec=prec)
            out = []
            for b in self.embeddings:
                z = min(approx, key=lambda r: abs(r - b.center))
                out.append(mp.mpc(z.real, 0) if b.is_real() else z)
            # exact conjugates for the paired entries
            for i, b in enumerate(self.embeddings):
                if not b.is_real() and b.imag < 0:
                    out[i] = mp.conj(out[i - 1])
        return out

    # element arithmetic in the power basis
    def mul(self, a, b):
        return poly_mulmod(a, b, self.min_poly)

    def one(self):
        return [Fraction(1)] + [Fraction(0)] * (self.degree - 1)

    def power(self, a, e):
        result, base = self.one(), list(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def mult_matrix(self, a):
        """Matrix of multiplication by a acting on row vectors (power basis)."""
        n = self.degree
        rows = []
        for i in range(n):
            e = [Fraction(0)] * n
            e[i] = Fraction(1)
            rows.append(self.mul(e, a))
        return rows

    def embed(self, a, prec=106):
        """Complex images of a under the ordered embeddings."""
        rts = self.roots_mp(prec)
        with mp.workprec(prec):
            return [sum((mp.mpf(c.numerator) / c.denominator) * r**i for i, c in enumerate(a)) for r in rts]

    def evaluate_in(self, g: IntPoly, a):
        """g(a) for an integer polynomial g and field element a."""
        acc = [Fraction(0)] * self.degree
        for c in reversed(g.coeffs):
            acc = self.mul(acc, a)
            acc[0] += c
        return acc


def _validate(f: IntPoly):
    n = f.degree
    if n not in (2, 4):
        raise UnsupportedDegree(f"degree {n} is not supported (need 2 or 4)")
    if not f.is_monic():
        raise NotAField("defining polynomial must be monic")
    if rational_roots(f):
        raise NotAField(f"{f} has a rational root")
    if n == 4 and _quadratic_factor_exists(f):
        raise NotAField(f"{f} factors into quadratics")


def make_field(coeffs) -> NumberField:
    """Field defined by integer coefficients given constant term first."""
    f = coeffs if isinstance(coeffs, IntPoly) else IntPoly(coeffs)
    if f.degree < 1:
        raise UnsupportedDegree("constant polynomial")
    f = f.canonical()
    if f.degree not in (2, 4):
        raise UnsupportedDegree(f"degree {f.degree} is not supported (need 2 or 4)")
    if not f.is_monic():
        raise NotAField("polynomial is not monic after removing content")
    return NumberField(f)


def resolvent_cubic(f: IntPoly) -> IntPoly:
    """Cubic whose roots are t1 t2 + t3 t4 and its two conjugates."""
    d, c, b, a, _ = f.coeffs
    return IntPoly((-(a * a * d - 4 * b * d + c * c), a * c - 4 * d, -b, 1))


def _subfields_resolvent(f: IntPoly):
    d, c, b, a, _ = f.coeffs
    out = set()
    for t in rational_roots(resolvent_cubic(f)):
        t = int(t)
        disc1 = a * a - 4 * (b - t)
        if disc1 != 0 and not is_square(disc1):
            out.add(squarefree_part(disc1))
            continue
        disc2 = t * t - 4 * d
        if disc2 != 0 and not is_square(disc2):
            out.add(squarefree_part(disc2))
            continue
        raise InternalError(f"rational resolvent root {t} gives no subfield of {f}")
    return sorted(out)


def _subfields_numeric(f: IntPoly, prec=SUBFIELD_CHECK_PREC):
    """Test each pairing of the roots for rational elementary symmetric sums."""
    with mp.workprec(prec):
        rs = mp.polyroots(list(reversed(f.coeffs)), maxsteps=400, extraprec=prec)
        tol = mp.mpf(2) ** (-prec // 2)
        out = set()
        for pairing in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
            (i, j), (k, l) = pairing
            for u, v in ((rs[i] + rs[j], rs[k] + rs[l]), (rs[i] * rs[j], rs[k] * rs[l])):
                s, p = u + v, u * v
                if abs(s - mp.nint(s.real)) > tol or abs(p - mp.nint(p.real)) > tol:
                    break
                S, Pp = int(mp.nint(s.real)), int(mp.nint(p.real))
                disc = S * S - 4 * Pp
                if disc != 0 and not is_square(disc):
                    out.add(squarefree_part(disc))
                    break
        return sorted(out)


def quadratic_subfields(field: NumberField):
    """Squarefree d with Q(sqrt d) inside a quartic field, sorted."""
    if field.degree != 4:
        raise UnsupportedDegree("quadratic subfields are only defined for quartic fields")
    return _quadratic_subfields_cached(field.min_poly)


_SUBFIELD_CACHE = {}


def _quadratic_subfields_cached(f):
    if f not in _SUBFIELD_CACHE:
        a = _subfields_resolvent(f)
        b = _subfields_numeric(f)
        if a != b:
            raise InternalError(f"subfield methods disagree for {f}: {a} vs {b}")
        _SUBFIELD_CACHE[f] = a
    return list(_SUBFIELD_CACHE[f])


def sqrt_in_field(field: NumberField, d: int):
    """An element whose square is d, or None when sqrt(d) is not in the field."""
    rts = field.roots_mp(SUBFIELD_CHECK_PREC)
    n = field.degree
    den = abs(field.poly_disc) * 4
    with mp.workprec(SUBFIELD_CHECK_PREC):
        sq = mp.sqrt(mp.mpf(d))
        V = mp.matrix([[r**i for i in range(n)] for r in rts])
        for signs in _sign_patterns(n):
            rhs = mp.matrix([s * sq for s in signs])
            try:
                sol = mp.lu_solve(V, rhs)
            except ZeroDivisionError:
                continue
            if any(abs(x.imag) > 1e-60 for x in sol):
                continue
            cand = [Fraction(int(mp.nint(x.real * den)), den) for x in sol]
            if field.mul(cand, cand) == [Fraction(d)] + [Fraction(0)] * (n - 1):
                return cand
    return None


def _sign_patterns(n):
    from itertools import product

    for s in product((1, -1), repeat=n):
        if s[0] == 1:
            yield s


def embeddings_into(source: IntPoly, target: NumberField):
    """All g in Q[x] of degree < n with source(g(t)) = 0 in the target field.

    Each returned g is verified by exact polynomial arithmetic.
    """
    n = target.degree
    if source.degree != n:
        return []
    prec = SUBFIELD_CHECK_PREC
    t_roots = target.roots_mp(prec)
    with mp.workprec(prec):
        s_roots = mp.polyroots(list(reversed(source.coeffs)), maxsteps=400, extraprec=prec)
    den = abs(target.poly_disc)
    found = []
    seen = set()
    with mp.workprec(prec):
        V = mp.matrix([[r**i for i in range(n)] for r in t_roots])
        tol = mp.mpf(2) ** (-prec // 3)
        for perm in permutations(range(n)):
            rhs = mp.matrix([s_roots[perm[k]] for k in range(n)])
            sol = mp.lu_solve(V, rhs)
            if any(abs(x.imag) > tol for x in sol):
                continue
            cand = [Fraction(int(mp.nint(x.real * den)), den) for x in sol]
            if any(abs(mp.mpf(c.numerator) / c.denominator - x.real) > tol for c, x in zip(cand, sol)):
                continue
            key = tuple(cand)
            if key in seen:
                continue
            acc = [Fraction(0)] * n
            for c in reversed(source.coeffs):
                acc = target.mul(acc, cand)
                acc[0] += c
            if not any(acc):
                seen.add(key)
                found.append(cand)
    return found


def automorphisms(field: NumberField):
    """Images of the generator under all field automorphisms (identity first)."""
    auts = embeddings_into(field.min_poly, field)
    x = [Fraction(0)] * field.degree
    x[1] = Fraction(1)
    auts.sort(key=lambda g: (g != x, g))
    return auts


def apply_automorphism(field: NumberField, g, a):
    """sigma(a) where sigma sends the generator t to g (power-basis vectors)."""
    acc = [Fraction(0)] * field.degree
    for c in reversed(a):
        acc = field.mul(acc, g)
        acc[0] += c
    return acc


def is_isomorphic(f1: NumberField, f2: NumberField) -> bool:
    if f1.degree != f2.degree or f1.signature != f2.signature:
        return False
    if f1.min_poly == f2.min_poly:
        return True
    return bool(embeddings_into(f1.min_poly, f2))
