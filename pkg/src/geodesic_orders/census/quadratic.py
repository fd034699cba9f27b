"""Quadratic orders O_D and the two classical regulator censuses.

For every nonsquare D = 0, 1 mod 4 the order O_D of discriminant D has wide
class number h and regulator R = log eps.  In the narrow sense (classes of
forms under SL2(Z), least totally positive unit) the pair becomes (h, 2R)
when N(eps) = -1 and (2h, R) otherwise, so h+ R+ = 2 h R.
"""

import math
from concurrent.futures import ProcessPoolExecutor

import mpmath
from mpmath import mp

from ..errors import InvalidArgument
from ..forms import batch_class_data
from .records import CensusTable, OrderInvariants

GOLDEN_LOG = math.log((1 + math.sqrt(5)) / 2)
BLOCK = 25000
CONVENTIONS = ("wide", "narrow")


def _block(args):
    lo, hi = args
    return sorted(batch_class_data(lo, hi).items())


def _blocks(limit_D, block):
    lo = 5
    while lo <= limit_D:
        hi = min(limit_D, lo + block - 1)
        yield lo, hi
        lo = hi + 1


def class_data(limit_D, threads=1, block=BLOCK):
    """Ascending (D, h, R, N(eps)) for all D in the discriminant set up to limit_D."""
    if limit_D < 5:
        raise InvalidArgument("limit_D must be at least 5")
    parts = list(_blocks(limit_D, block))
    if threads > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_block, parts))
    else:
        results = [_block(p) for p in parts]
    for res in results:
        for D, (h, R, n) in res:
            yield D, h, R, n


def enumerate_quadratic(limit_D, threads=1):
    """Stream (D, h, R) over nonsquare D = 0, 1 mod 4 with 5 <= D <= limit_D."""
    for D, h, R, _ in class_data(limit_D, threads):
        yield D, h, R


def narrow(h, R, norm):
    return (h, 2 * R) if norm == -1 else (2 * h, R)


def quadratic_key(D):
    """Key c0:c1:1 of the order O_D: minimal polynomial of (D mod 2 + sqrt D)/2."""
    if D % 4 == 0:
        return f"{-D // 4}:0:1"
    return f"{-(D - 1) // 4}:-1:1"


def quadratic_invariants(D, h, R):
    return OrderInvariants(field_key=quadratic_key(D), disc=D, r=2, s=0, class_h=h, regulator=R, mu=2)


def gauss_siegel_constant():
    return float(mp.pi**2 / (18 * mpmath.zeta(3)))


def gauss_siegel_target(x):
    return gauss_siegel_constant() * x**1.5


def _geometric_checkpoints(lo, hi, per_decade=4):
    pts = []
    k = 0
    while True:
        x = lo * 10 ** (k / per_decade)
        if x > hi * (1 + 1e-12):
            break
        pts.append(round(x))
        k += 1
    if not pts or pts[-1] != round(hi):
        pts.append(round(hi))
    return sorted(set(pts))


def gauss_siegel_census(limit_x, convention="narrow", checkpoints=None, threads=1, ceiling=None):
    """Partial sums of h R over D <= x against pi^2 x^{3/2} / (18 zeta(3))."""
    if convention not in CONVENTIONS:
        raise InvalidArgument(f"convention must be one of {CONVENTIONS}")
    if ceiling is not None and limit_x > ceiling:
        raise InvalidArgument(f"limit {limit_x} exceeds the configured ceiling {ceiling}")
    limit = int(limit_x)
    cps = sorted(checkpoints) if checkpoints else _geometric_checkpoints(100, limit)
    rows = []
    total = 0.0
    acc = []
    ci = 0
    for D, h, R, n in class_data(limit, threads):
        while ci < len(cps) and cps[ci] < D:
            total = math.fsum(acc)
            rows.append(_gs_row(cps[ci], total))
            ci += 1
        hh, RR = (h, R) if convention == "wide" else narrow(h, R, n)
        acc.append(hh * RR)
    total = math.fsum(acc)
    while ci < len(cps):
        rows.append(_gs_row(cps[ci], total))
        ci += 1
    meta = {
        "census": "gauss-siegel",
        "convention": convention,
        "limit_x": limit,
        "constant": gauss_siegel_constant(),
    }
    return CensusTable(["x", "partial_sum", "target", "ratio"], rows, meta)


def _gs_row(x, total):
    t = gauss_siegel_target(x)
    return (x, total, t, total / t)


def L_quad(x):
    """L(x) = int_1^x e^t / t dt by adaptive quadrature."""
    with mp.workdps(30):
        return float(mp.quad(lambda t: mp.exp(t) / t, [1, x]))


def L_series(x, tol=1e-20):
    """L(x) = log x + sum_k (x^k - 1) / (k k!), the convergent series for Ei(x) - Ei(1)."""
    with mp.workdps(40):
        x = mp.mpf(x)
        s = mp.log(x)
        term_x = mp.mpf(1)
        k = 0
        while True:
            k += 1
            term_x = term_x * x / k
            t = (term_x - 1 / mp.factorial(k)) / k
            s += t
            if abs(t) < tol * abs(s) and k > x:
                break
        return float(s)


def L_asymptotic(x, terms):
    """e^x/x sum_{k<terms} k!/x^k: asymptotic only, error never below about e^x x^{-1} x!/x^x."""
    return math.exp(x) / x * math.fsum(math.factorial(k) / x**k for k in range(terms))


def unit_bound_discriminant(limit_R):
    """Largest D that can have R(O_D) <= limit_R: eps >= (sqrt(D-4) + sqrt D)/2 > sqrt(D) - 1."""
    return int((math.exp(limit_R) + 1) ** 2) + 1


def sarnak_census(limit_R, convention="wide", checkpoints=None, threads=1, ceiling=6.0, step=0.5):
    """Sum of h over orders with R <= x against L(2x) and e^{2x}/(2x)."""
    if convention not in CONVENTIONS:
        raise InvalidArgument(f"convention must be one of {CONVENTIONS}")
    if ceiling is not None and limit_R > ceiling:
        raise InvalidArgument(f"limit {limit_R} exceeds the configured ceiling {ceiling}")
    cols = ["x", "partial_sum", "target", "ratio", "target_exp", "ratio_exp"]
    meta = {"census": "sarnak", "convention": convention, "limit_R": format(limit_R, "g")}
    if limit_R < GOLDEN_LOG:
        meta["limit_D"] = 0
        return CensusTable(cols, [], meta)
    limit_D = unit_bound_discriminant(limit_R)
    meta["limit_D"] = limit_D
    pairs = []
    for D, h, R, n in class_data(limit_D, threads):
        hh, RR = (h, R) if convention == "wide" else narrow(h, R, n)
        if RR <= limit_R:
            pairs.append((RR, hh))
    pairs.sort()
    if checkpoints is None:
        checkpoints = []
        x = step
        while x <= limit_R + 1e-12:
            if x >= GOLDEN_LOG:
                checkpoints.append(round(x, 10))
            x += step
        if not checkpoints or checkpoints[-1] < limit_R:
            checkpoints.append(limit_R)
    rows = []
    total = 0
    j = 0
    for x in sorted(checkpoints):
        while j < len(pairs) and pairs[j][0] <= x:
            total += pairs[j][1]
            j += 1
        t = L_quad(2 * x)
        te = math.exp(2 * x) / (2 * x)
        # L(1) = 0, so the first ratio is undefined when x = 1/2
        rows.append((x, total, t, total / t if t > 0 else None, te, total / te))
    return CensusTable(cols, rows, meta)
