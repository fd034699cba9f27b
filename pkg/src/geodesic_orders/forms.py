"""Binary quadratic forms (a, b, c) of discriminant D = b^2 - 4ac.

Indefinite forms are reduced when |sqrt D - 2|a|| < b < sqrt D; the rho
operator permutes the reduced forms of one proper class in a cycle, and the
cycles are the narrow classes.  Wide classes are narrow classes modulo the
form (-1, b0, .) which represents -1.  Definite forms use the usual unique
reduced representative (positive definite only).
"""

import math
from math import gcd, isqrt

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .arith.primes import factorint, is_square, primes_up_to
from .errors import InvalidArgument, InternalError


def check_discriminant(D: int):
    if D % 4 not in (0, 1) or D == 0 or (D > 0 and is_square(D)):
        raise InvalidArgument(f"{D} is not a nonsquare discriminant")


def principal_form(D):
    b = D % 2
    return (1, b, (b * b - D) // 4)


def is_reduced(f, D):
    a, b, c = f
    if D > 0:
        r = math.sqrt(D)
        return 0 < b < r and abs(r - 2 * abs(a)) < b
    return abs(b) <= a <= c and not (b < 0 and (abs(b) == a or a == c))


def rho(f, D):
    """One step of the reduction operator for indefinite forms."""
    a, b, c = f
    r = isqrt(D)
    ac = abs(c)
    if c * c < D:
        b2 = r - ((r + b) % (2 * ac))
    else:
        b2 = (-b) % (2 * ac)
        if b2 > ac:
            b2 -= 2 * ac
    return (c, b2, (b2 * b2 - D) // (4 * c))


def reduce_form(f, D):
    a, b, c = f
    if D > 0:
        steps = 0
        while not is_reduced(f, D):
            f = rho(f, D)
            steps += 1
            if steps > 10000:
                raise InternalError("indefinite reduction did not terminate")
        return f
    while True:
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        if not -a < b <= a:
            k = (a - b) // (2 * a)
            b2 = b + 2 * k * a
            c = (b2 * b2 - D) // (4 * a)
            b = b2
            continue
        return (a, b, c)


def cycle(f, D):
    """The rho cycle of a reduced indefinite form."""
    out = [f]
    g = rho(f, D)
    while g != f:
        out.append(g)
        g = rho(g, D)
        if len(out) > 100000:
            raise InternalError("cycle too long")
    return out


def narrow_key(f, D):
    f = reduce_form(f, D)
    if D < 0:
        return f
    return min(cycle(f, D))


def _positive_a(f):
    a, b, c = f
    if a > 0:
        return f
    if c > 0:
        return (c, -b, a)
    # a, c < 0: move to a form representing a positive value
    return (a + b + c, b + 2 * c, c) if a + b + c > 0 else (a - b + c, b - 2 * c, c)


def compose(f1, f2, D):
    """Dirichlet composition of primitive forms of the same discriminant."""
    f1, f2 = _positive_a(f1), _positive_a(f2)
    if f1[0] <= 0 or f2[0] <= 0:
        raise InternalError("could not make a positive leading coefficient")
    if f1[0] > f2[0]:
        f1, f2 = f2, f1
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    if b3 * b3 - 4 * a3 * c3 != D:
        raise InternalError("composition produced the wrong discriminant")
    return reduce_form((a3, b3, c3), D)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def reduced_forms_of(D):
    """All reduced primitive forms of discriminant D."""
    check_discriminant(D)
    out = []
    if D < 0:
        amax = isqrt(-D // 3) + 1
        for a in range(1, amax + 1):
            for b in range(-a + 1, a + 1):
                if (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                if c < a or gcd(gcd(a, b), c) != 1:
                    continue
                if is_reduced((a, b, c), D):
                    out.append((a, b, c))
        return out
    r = math.sqrt(D)
    for b in range(1, isqrt(D) + 1):
        if (b * b - D) % 4:
            continue
        m = (D - b * b) // 4  # = -a c > 0
        for a in range(1, m + 1):
            if m % a:
                continue
            c = -(m // a)
            for aa, cc in ((a, c), (-a, -c)):
                if gcd(gcd(aa, b), cc) == 1 and is_reduced((aa, b, cc), D):
                    out.append((aa, b, cc))
    return out


def narrow_classes(D):
    """Canonical keys of the narrow (proper) classes."""
    if D < 0:
        return sorted(reduced_forms_of(D))
    seen, keys = set(), []
    for f in sorted(reduced_forms_of(D)):
        if f in seen:
            continue
        cyc = cycle(f, D)
        seen.update(cyc)
        keys.append(min(cyc))
    return keys


def minus_form(D):
    b = D % 2
    return (-1, b, (D - b * b) // 4)


def has_unit_of_norm_minus_one(D):
    """Is the form representing -1 in the principal narrow class?"""
    return narrow_key(minus_form(D), D) == narrow_key(principal_form(D), D)


def wide_key(f, D):
    k = narrow_key(f, D)
    if D < 0:
        return k
    return min(k, narrow_key(compose(k, minus_form(D), D), D))


def class_number_forms(D):
    """(h, h_plus) from counting reduced-form cycles; h is the wide class number."""
    check_discriminant(D)
    hp = len(narrow_classes(D))
    if D < 0:
        return hp, hp
    return (hp if has_unit_of_norm_minus_one(D) else hp // 2), hp


def abelian_invariants(elements, identity, power_is_identity):
    """Invariant factors of a finite abelian group from its element orders.

    ``power_is_identity(g, m)`` tells whether g^m is the identity.  For each
    prime p the counts #{g : g^(p^k) = 1} = p^(sum_i min(k, a_i)) fix the
    p-primary part.
    """
    h = len(elements)
    parts = {}
    for p, e in factorint(h).items():
        counts = []
        for k in range(e + 1):
            counts.append(sum(1 for g in elements if power_is_identity(g, p**k)))
        logs = [round(math.log(c, p)) for c in counts]
        # logs[k] - logs[k-1] = number of cyclic factors of order >= p^k
        ge = [logs[k] - logs[k - 1] for k in range(1, e + 1)]
        exps = []
        for k in range(1, e + 1):
            nk = ge[k - 1] - (ge[k] if k < e else 0)
            exps.extend([k] * nk)
        parts[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in parts.values()), default=0)
    inv = []
    for i in range(width):
        d = 1
        for p, ex in parts.items():
            if i < len(ex):
                d *= p ** ex[i]
        inv.append(d)
    inv = sorted(inv)
    prod = 1
    for d in inv:
        prod *= d
    if prod != h:
        raise InternalError("group structure does not account for the order")
    return inv


def class_group_forms(D):
    """(h, invariant factors) of the wide class group via composition."""
    check_discriminant(D)
    narrow = narrow_classes(D)
    if D > 0:
        keys = sorted({wide_key(f, D) for f in narrow})
    else:
        keys = narrow
    ident = wide_key(principal_form(D), D) if D > 0 else reduce_form(principal_form(D), D)

    def key(f):
        return wide_key(f, D) if D > 0 else reduce_form(f, D)

    def power_is_identity(g, m):
        r = principal_form(D)
        b = g
        while m:
            if m & 1:
                r = compose(r, b, D)
            b = compose(b, b, D)
            m >>= 1
        return key(r) == ident

    inv = abelian_invariants(keys, ident, power_is_identity)
    return len(keys), [d for d in inv if d > 1]


# ------------------------------------------------------------ batch census


def _isqrt_v(D):
    r = np.floor(np.sqrt(D.astype(np.float64))).astype(np.int64)
    r -= r * r > D
    r += (r + 1) * (r + 1) <= D
    return r


def batch_reduced_forms(Dlo, Dhi):
    """Reduced primitive indefinite forms for all nonsquare D in [Dlo, Dhi].

    Returns an int64 array of rows (a, b, c, D).
    """
    out = []
    rmax = isqrt(Dhi)
    for b in range(1, rmax + 1):
        amax = (rmax + b) // 2 + 1
        A = np.arange(1, amax + 1, dtype=np.int64)
        for k in range(1, 2 * b):
            cp = A - b + k
            Dv = b * b + 4 * A * cp
            m = (cp > 0) & (Dv <= Dhi) & (Dv >= Dlo)
            if not m.any():
                continue
            a_, c_, D_ = A[m], cp[m], Dv[m]
            ok = ((2 * a_ + b) ** 2 > D_) & (((2 * a_ - b) < 0) | ((2 * a_ - b) ** 2 < D_))
            a_, c_, D_ = a_[ok], c_[ok], D_[ok]
            ok = np.gcd(np.gcd(a_, b), c_) == 1
            a_, c_, D_ = a_[ok], c_[ok], D_[ok]
            n = len(a_)
            bb = np.full(n, b, dtype=np.int64)
            out.append(np.stack([a_, bb, -c_, D_], 1))
            out.append(np.stack([-a_, bb, c_, D_], 1))
    if not out:
        return np.zeros((0, 4), dtype=np.int64)
    F = np.concatenate(out)
    r = _isqrt_v(F[:, 3])
    return F[r * r != F[:, 3]]


def batch_class_numbers(Dlo, Dhi):
    """Wide h and regulator R for every nonsquare discriminant D in [Dlo, Dhi].

    Returns a dict D -> (h, R).
    """
    return {D: (h, R) for D, (h, R, _) in batch_class_data(Dlo, Dhi).items()}


def batch_class_data(Dlo, Dhi):
    """D -> (h, R, N(eps)) for every nonsquare discriminant D in [Dlo, Dhi].

    Narrow classes are the rho cycles; the sum of log((b' + sqrt D)/(2|c|))
    around any cycle is log of the least totally positive unit.  h and R are
    wide; the narrow pair is (h, 2R) when N(eps) = -1 and (2h, R) otherwise.
    """
    F = batch_reduced_forms(Dlo, Dhi)
    if len(F) == 0:
        return {}
    a, b, c, D = F.T
    r = _isqrt_v(D)
    ac = np.abs(c)
    bp = r - ((r + b) % (2 * ac))
    # forms are keyed by (D, b, a); all reduced forms have 0 < b < sqrt D, |a| < sqrt D
    span = int(np.max(np.abs(a))) * 2 + 3
    bspan = int(np.max(b)) + 2

    def key(A, B, Dd):
        return (Dd * bspan + B) * span + (A + span // 2)

    k0 = key(a, b, D)
    order = np.argsort(k0)
    ks = k0[order]
    k1 = key(c, bp, D)
    idx = np.searchsorted(ks, k1)
    if np.any(idx >= len(ks)) or np.any(ks[np.minimum(idx, len(ks) - 1)] != k1):
        raise InternalError("rho image is not a reduced form")
    img = order[idx]
    n = len(F)
    G = coo_matrix((np.ones(n), (np.arange(n), img)), shape=(n, n))
    _, lab = connected_components(G, directed=True, connection="weak")
    w = np.log((bp + np.sqrt(D.astype(np.float64))) / (2 * ac))
    cyc = np.bincount(lab, weights=w)
    first = np.unique(lab, return_index=True)[1]
    Dc = D[first]
    Rp = cyc[lab[first]]
    Ds, inv = np.unique(Dc, return_inverse=True)
    hplus = np.bincount(inv)
    rplus = np.zeros(len(Ds))
    rplus[inv] = Rp
    out = {}
    # the principal cycle contains (1, b, .); it contains (-1, b', .) iff N(eps) = -1
    pm = a == 1
    nm = a == -1
    plab = dict(zip(D[pm].tolist(), lab[pm].tolist()))
    nlab = {}
    for d, l in zip(D[nm].tolist(), lab[nm].tolist()):
        nlab.setdefault(d, set()).add(l)
    for i, d in enumerate(Ds.tolist()):
        neg = plab[d] in nlab.get(d, ())
        h = int(hplus[i]) if neg else int(hplus[i]) // 2
        R = rplus[i] / 2 if neg else rplus[i]
        out[d] = (h, float(R), -1 if neg else 1)
    return out


def prime_forms(D, bound):
    """Forms (p, b, c) for primes p <= bound not inert in discriminant D."""
    out = []
    for p in primes_up_to(bound):
        for b in range(0, 2 * p):
            if (b * b - D) % (4 * p) == 0:
                out.append((p, b, (b * b - D) // (4 * p)))
                break
    return out
