"""Small integer utilities: primality, factorisation, squarefree parts."""

from functools import lru_cache
from math import isqrt

from sympy import factorint as _sympy_factorint

# Deterministic Miller-Rabin witnesses for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def _factor_cached(n):
    return tuple(sorted(_sympy_factorint(n).items()))


def factorint(n: int) -> dict:
    """Prime factorisation of |n| as {p: e}; empty for |n| <= 1."""
    n = abs(int(n))
    if n <= 1:
        return {}
    return dict(_factor_cached(n))


def squarefree_part(n: int) -> int:
    """The squarefree integer d with n = d * m**2 (sign kept)."""
    if n == 0:
        raise ValueError("squarefree part of 0")
    d = -1 if n < 0 else 1
    for p, e in factorint(n).items():
        if e % 2:
            d *= p
    return d


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def primes_up_to(n: int) -> list:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, v in enumerate(sieve) if v]
