"""Finite representation theory of K_M = S(O(2) x O(2)).

Irreducible unitary representations are triv, delta (the determinant of
either factor) and delta(l,k) = indicated rotation character plus its
inverse, with delta(l,k) ~ delta(-l,-k).  A character is stored as a weight
multiset on the rotation torus together with its (constant) value on the
other component, which is all that is needed to decompose.
"""

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError, InvalidArgument

# a_0..a_4; sum_{m} a_{k-m} binom(2, m) = (-1)^k
A_COEFFS = (1, -3, 6, -10, 15)


@dataclass(frozen=True, order=True)
class KMType:
    tag: str
    l: int = 0
    k: int = 0

    def __post_init__(self):
        if self.tag not in ("triv", "delta", "delta_lk"):
            raise InvalidArgument(f"unknown K_M type {self.tag}")
        if self.tag == "delta_lk":
            if self.l == 0 and self.k == 0:
                raise InvalidArgument("delta(0,0) is triv + delta, not irreducible")
            if self.l < 0 or (self.l == 0 and self.k < 0):
                object.__setattr__(self, "l", -self.l)
                object.__setattr__(self, "k", -self.k)

    @property
    def dim(self):
        return 2 if self.tag == "delta_lk" else 1

    def __str__(self):
        return self.tag if self.tag != "delta_lk" else f"delta({self.l},{self.k})"


TRIV = KMType("triv")
DELTA = KMType("delta")


def delta_lk(l, k):
    return KMType("delta_lk", l, k)


def km_character(t: KMType, theta, phi, component="identity"):
    if component == "identity":
        if t.tag == "delta_lk":
            return complex(2 * math.cos(t.l * theta + t.k * phi))
        return complex(1)
    if component == "swap":
        return complex({"triv": 1, "delta": -1, "delta_lk": 0}[t.tag])
    raise InvalidArgument("component must be 'identity' or 'swap'")


@dataclass
class Character:
    """Weights (l, k) -> multiplicity on the torus, trace on the swap coset."""

    weights: Counter
    swap: int

    @property
    def dim(self):
        return sum(self.weights.values())

    def swap_power_sum(self, j):
        # the swap element squares to the identity
        return self.dim if j % 2 == 0 else self.swap


def character_of(decomp) -> Character:
    w = Counter()
    swap = 0
    for t, m in decomp.items():
        if t.tag == "delta_lk":
            w[(t.l, t.k)] += m
            w[(-t.l, -t.k)] += m
        else:
            w[(0, 0)] += m
            swap += m if t.tag == "triv" else -m
    return Character(Counter({k: v for k, v in w.items() if v}), swap)


# seeds: p_M = delta(2,0) + delta(0,2); m = 2 delta + p_M
SEEDS = {
    "pM": {delta_lk(2, 0): 1, delta_lk(0, 2): 1},
    "m": {DELTA: 2, delta_lk(2, 0): 1, delta_lk(0, 2): 1},
}


def _scale(weights, j):
    return Counter({(j * l, j * k): m for (l, k), m in weights.items()})


def exterior_characters(base: Character):
    """Characters of all exterior powers via Newton's identities."""
    d = base.dim
    p_w = [None] + [_scale(base.weights, j) for j in range(1, d + 1)]
    p_s = [None] + [base.swap_power_sum(j) for j in range(1, d + 1)]
    e_w = [Counter({(0, 0): Fraction(1)})]
    e_s = [Fraction(1)]
    for n in range(1, d + 1):
        acc = Counter()
        acc_s = Fraction(0)
        for i in range(1, n + 1):
            sign = 1 if i % 2 else -1
            for (a, b), x in e_w[n - i].items():
                for (c, e), y in p_w[i].items():
                    acc[(a + c, b + e)] += sign * x * y
            acc_s += sign * e_s[n - i] * p_s[i]
        e_w.append(Counter({k: v / n for k, v in acc.items() if v}))
        e_s.append(acc_s / n)
    out = []
    for w, s in zip(e_w, e_s):
        if any(v.denominator != 1 for v in w.values()) or s.denominator != 1:
            raise InternalError("exterior power character is not integral")
        out.append(Character(Counter({k: int(v) for k, v in w.items()}), int(s)))
    return out


def decompose(ch: Character):
    """Multiplicities by orthogonality of torus monomials and the swap coset.

    <chi, delta(l,k)> picks the coefficient of e^{i(l theta + k phi)}; the
    weight-zero part m0 with swap trace s splits as (m0+s)/2 triv + (m0-s)/2 delta.
    """
    out = {}
    seen = set()
    for (l, k), m in sorted(ch.weights.items()):
        if (l, k) == (0, 0):
            continue
        t = delta_lk(l, k)
        if t in seen:
            continue
        seen.add(t)
        if ch.weights.get((-l, -k), 0) != m:
            raise InternalError("character is not invariant under the swap")
        out[t] = m
    m0 = ch.weights.get((0, 0), 0)
    if (m0 + ch.swap) % 2:
        raise InternalError("non-integral multiplicity of triv")
    if (m0 + ch.swap) // 2:
        out[TRIV] = (m0 + ch.swap) // 2
    if (m0 - ch.swap) // 2:
        out[DELTA] = (m0 - ch.swap) // 2
    return {t: m for t, m in out.items() if m}


def decompose_exterior(space: str, n: int):
    """K_M decomposition of the n-th exterior power of p_M or m."""
    if space not in SEEDS:
        raise InvalidArgument("space must be 'pM' or 'm'")
    base = character_of(SEEDS[space])
    if not 0 <= n <= base.dim:
        raise InvalidArgument(f"n must lie in 0..{base.dim}")
    return decompose(exterior_characters(base)[n])


def _elementary(values, n):
    e = [1] + [0] * n
    for v in values:
        for j in range(n, 0, -1):
            e[j] += e[j - 1] * v
    return e


def verify_ak_identity(grid=12):
    """Check sum_m a_{k-m} binom(2,m) = (-1)^k and the virtual-module identity.

    Returns (ok, residuals) with residuals[k] for k = 0..4 and
    residuals['character'] the largest grid deviation of
    sum_n a_{4-n} chi(Lambda^n m) from the alternating sum over m/b.
    """
    res = {}
    for k in range(5):
        s = sum(A_COEFFS[k - m] * math.comb(2, m) for m in range(k + 1))
        res[k] = s - (-1) ** k
    worst = 0.0
    for i in range(grid):
        for j in range(grid):
            th, ph = 2 * math.pi * i / grid, 2 * math.pi * j / grid
            lhs, rhs = _virtual_pair(th, ph)
            worst = max(worst, abs(lhs - rhs))
    res["character"] = worst
    ok = all(res[k] == 0 for k in range(5)) and worst < 1e-12
    return ok, res


def _adjoint_eigs(theta, phi):
    # m = b + m/b with b acting trivially on b
    quot = [complex(math.cos(w), math.sin(w)) for w in (2 * theta, -2 * theta, 2 * phi, -2 * phi)]
    return [1, 1] + quot, quot


def _virtual_pair(theta, phi):
    full, quot = _adjoint_eigs(theta, phi)
    e_full = _elementary(full, 6)
    e_quot = _elementary(quot, 4)
    lhs = sum(A_COEFFS[4 - n] * e_full[n] for n in range(5))
    rhs = sum((-1) ** q * e_quot[q] for q in range(5))
    return lhs, rhs


def sigma_tilde_virtual(theta, phi):
    """sum_n a_{4-n} tr(b | Lambda^n m) at b = R(theta, phi)."""
    return _virtual_pair(theta, phi)[0]


def sigma_tilde_trace(theta, phi):
    """tr sigma~(b) = 4(1 - cos 2theta)(1 - cos 2phi), checked against the virtual sum."""
    closed = 4 * (1 - math.cos(2 * theta)) * (1 - math.cos(2 * phi))
    virt = sigma_tilde_virtual(theta, phi)
    if abs(virt - closed) > 1e-12 * max(1.0, abs(closed)) or abs(virt.imag) > 1e-12:
        raise InternalError(f"virtual character {virt} differs from closed form {closed}")
    return closed


def weyl_integral(grid_size: int) -> float:
    """(1/2)(1/4pi^2) int int 16 sin^2 theta sin^2 phi over [0, 2pi]^2 by the trapezoid rule.

    The integrand is a trigonometric polynomial of degree 2 in each variable,
    so the equispaced rule with at least 3 nodes per variable is exact.
    """
    if grid_size < 4:
        raise InvalidArgument("grid_size must be at least 4")
    s = [math.sin(2 * math.pi * i / grid_size) ** 2 for i in range(grid_size)]
    mean = 16 * (math.fsum(s) / grid_size) ** 2
    return mean / 2


def _published_tables():
    D = delta_lk
    pM = [
        {TRIV: 1},
        {D(2, 0): 1, D(0, 2): 1},
        {DELTA: 2, D(2, 2): 1, D(2, -2): 1},
        {D(2, 0): 1, D(0, 2): 1},
        {TRIV: 1},
    ]
    m = [
        {TRIV: 1},
        {DELTA: 2, D(2, 0): 1, D(0, 2): 1},
        {TRIV: 1, DELTA: 2, D(2, 0): 2, D(0, 2): 2, D(2, 2): 1, D(2, -2): 1},
        {TRIV: 4, D(2, 0): 2, D(0, 2): 2, D(2, 2): 2, D(2, -2): 2},
        {TRIV: 1, DELTA: 2, D(2, 0): 2, D(0, 2): 2, D(2, 2): 1, D(2, -2): 1},
    ]
    return {"pM": pM, "m": m}


def verify_rep_suite(grid=100):
    """Run every representation-theoretic check; list of (name, ok, detail)."""
    out = []
    for space, table in _published_tables().items():
        for n, expected in enumerate(table):
            got = decompose_exterior(space, n)
            out.append((f"Lambda^{n} {space}", got == expected, ", ".join(f"{m} {t}" for t, m in sorted(got.items()))))
    ok, res = verify_ak_identity()
    out.append(("a_k identity", ok, f"character residual {res['character']:.3g}"))
    w = weyl_integral(64)
    out.append(("Weyl integral", abs(w - 2) <= 1e-12, f"{w!r}"))
    worst = 0.0
    try:
        for i in range(grid):
            for j in range(grid):
                th, ph = 2 * math.pi * i / grid, 2 * math.pi * j / grid
                worst = max(worst, abs(sigma_tilde_virtual(th, ph) - sigma_tilde_trace(th, ph)))
        good = worst <= 1e-12
    except InternalError:
        good = False
    out.append(("sigma~ trace", good, f"max deviation {worst:.3g} on a {grid}x{grid} grid"))
    return out
