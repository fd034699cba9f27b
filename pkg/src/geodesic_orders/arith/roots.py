"""Certified complex root isolation.

Approximate roots come from mpmath's simultaneous iteration; each one is then
enclosed in a disc whose radius is n times the Weierstrass correction
|f(z_i) / (lc * prod_{j != i} (z_i - z_j))|, evaluated in interval arithmetic.
When these discs are pairwise disjoint each holds exactly one root.
"""

from contextlib import contextmanager
from dataclasses import dataclass

import mpmath
from mpmath import iv, mp

from ..errors import InvalidArgument, PrecisionExhausted
from .intpoly import IntPoly, poly_discriminant, sturm_count

START_PREC = 128
MAX_PREC = 8192


@contextmanager
def _ivprec(prec):
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


@dataclass(frozen=True)
class CertifiedBall:
    """Closed disc ``|z - center| <= radius`` known to contain a value."""

    center: mpmath.mpc
    radius: mpmath.mpf
    prec: int

    def __post_init__(self):
        if not mpmath.isfinite(self.radius) or self.radius < 0:
            raise InvalidArgument("ball radius must be finite and nonnegative")

    @property
    def real(self):
        return self.center.real

    @property
    def imag(self):
        return self.center.imag

    def is_real(self):
        return self.center.imag == 0

    def contains(self, z) -> bool:
        with mp.workprec(self.prec):
            return abs(mp.mpc(z) - self.center) <= self.radius

    def conjugate(self):
        with mp.workprec(self.prec):
            return CertifiedBall(mp.mpc(self.center.real, -self.center.imag), self.radius, self.prec)

    def to_interval(self):
        """Axis-aligned complex interval box enclosing the disc."""
        with _ivprec(self.prec):
            c, r = self.center, self.radius
            re = iv.mpf([c.real - r, c.real + r])
            im = iv.mpf([c.imag - r, c.imag + r])
            return iv.mpc(re, im)

    @classmethod
    def from_interval(cls, z, prec):
        with mp.workprec(prec):
            re, im = z.real, z.imag
            cr = (mp.mpf(re.a) + mp.mpf(re.b)) / 2
            ci = (mp.mpf(im.a) + mp.mpf(im.b)) / 2
            hr = (mp.mpf(re.b) - mp.mpf(re.a)) / 2
            hi = (mp.mpf(im.b) - mp.mpf(im.a)) / 2
            # hypot rounded up by a relative ulp margin
            rad = mp.sqrt(hr * hr + hi * hi) * (1 + mp.mpf(2) ** (8 - prec))
            return cls(mp.mpc(cr, ci), rad, prec)

    def _binary(self, other, op):
        prec = self.prec if not isinstance(other, CertifiedBall) else min(self.prec, other.prec)
        with _ivprec(prec):
            a = self.to_interval()
            b = other.to_interval() if isinstance(other, CertifiedBall) else iv.mpc(other)
            return CertifiedBall.from_interval(op(a, b), prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __repr__(self):
        return f"CertifiedBall({mpmath.nstr(self.center, 15)}, r={mpmath.nstr(self.radius, 3)})"


def eval_ball(poly_coeffs, ball: CertifiedBall) -> CertifiedBall:
    """Evaluate a polynomial (constant term first, rational-free ints) on a ball."""
    with _ivprec(ball.prec):
        z = ball.to_interval()
        acc = iv.mpc(0)
        for c in reversed(list(poly_coeffs)):
            acc = acc * z + c
        return CertifiedBall.from_interval(acc, ball.prec)


def _approx_roots(cs, prec):
    with mp.workprec(prec):
        steps = 200
        while True:
            try:
                return mp.polyroots(list(reversed(cs)), maxsteps=steps, extraprec=prec)
            except mpmath.libmp.libhyper.NoConvergence:
                steps *= 4
                if steps > 20000:
                    raise PrecisionExhausted("root iteration did not converge")


def _radii(cs, zs, prec):
    n = len(zs)
    out = []
    with _ivprec(prec):
        lc = iv.mpf(cs[-1])
        ivz = [iv.mpc(mp.mpf(z.real), mp.mpf(z.imag)) for z in zs]
        for i in range(n):
            fz = iv.mpc(0)
            for c in reversed(cs):
                fz = fz * ivz[i] + c
            den = lc
            for j in range(n):
                if j != i:
                    den = den * (ivz[i] - ivz[j])
            w = abs(fz) / abs(den)
            out.append(mp.mpf(w.b) * n)
    return out


def _disjoint(centers, radii, prec):
    with mp.workprec(prec):
        for i in range(len(centers)):
            for j in range(i + 1, len(centers)):
                # small relative margin instead of interval subtraction
                d = abs(centers[i] - centers[j]) * (1 - mp.mpf(2) ** (8 - prec))
                if d <= radii[i] + radii[j]:
                    return False
    return True


def complex_roots(f: IntPoly, target_radius=1e-30):
    """Isolate all complex roots of squarefree f in disjoint certified balls.

    Real roots get real centres; non-real roots come as exact conjugate pairs.
    The result is sorted by real part, then imaginary part.
    """
    if f.degree < 1:
        raise InvalidArgument("complex_roots needs degree >= 1")
    if target_radius <= 0:
        raise InvalidArgument("target_radius must be positive")
    if poly_discriminant(f) == 0:
        raise InvalidArgument("polynomial is not squarefree")
    cs = list(f.coeffs)
    n = f.degree
    n_real = sturm_count(f)
    prec = START_PREC
    while prec <= MAX_PREC:
        with mp.workprec(prec):
            target = mp.mpf(target_radius)
            zs = [mp.mpc(z) for z in _approx_roots(cs, prec)]
            rs = _radii(cs, zs, prec)
            if all(r <= target for r in rs) and _disjoint(zs, rs, prec):
                balls = _symmetrize(zs, rs, n_real, prec)
                if balls is not None:
                    balls.sort(key=lambda b: (b.center.real, b.center.imag))
                    return balls
        prec *= 2
    raise PrecisionExhausted(f"could not isolate roots of {f} at {MAX_PREC} bits")


def _symmetrize(zs, rs, n_real, prec):
    """Replace centres by exactly real or exactly conjugate ones.

    A disc meeting the real axis that isolates a real root keeps its radius
    when its centre is moved to the real part.  The number of such discs must
    equal the Sturm count, otherwise None is returned to request more
    precision.
    """
    n = len(zs)
    meets = [abs(z.imag) <= r for z, r in zip(zs, rs)]
    if sum(meets) != n_real:
        return None
    centers, radii = [None] * n, [None] * n
    upper = []
    lower = []
    for i in range(n):
        if meets[i]:
            centers[i] = mp.mpc(zs[i].real, 0)
            radii[i] = rs[i]
        elif zs[i].imag > 0:
            upper.append(i)
        else:
            lower.append(i)
    if len(upper) != len(lower):
        return None
    used = set()
    for i in upper:
        best = None
        for j in lower:
            if j in used:
                continue
            d = abs(zs[j] - mp.conj(zs[i]))
            if best is None or d < best[0]:
                best = (d, j)
        j = best[1]
        # the partner's disc contains conj(root_i), so it must be conj(disc_i)'s root
        if best[0] > rs[i] + rs[j]:
            return None
        used.add(j)
        r = rs[i]
        centers[i] = zs[i]
        centers[j] = mp.conj(zs[i])
        radii[i] = radii[j] = r
    if not _disjoint(centers, radii, prec):
        return None
    return [CertifiedBall(c, r, prec) for c, r in zip(centers, radii)]
