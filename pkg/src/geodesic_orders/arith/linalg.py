"""Exact integer and rational linear algebra on small dense matrices.

Matrices are lists of row lists.  Lattices are spanned by rows.
"""

from fractions import Fraction
from math import gcd

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors


def hnf_rows(rows, ncols=None):
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows, upper triangular with positive pivots and
    entries above each pivot reduced into [0, pivot).
    """
    A = [list(map(int, r)) for r in rows]
    if not A:
        return []
    m = ncols if ncols is not None else len(A[0])
    out = []
    col = 0
    while A and col < m:
        nz = [r for r in A if r[col] != 0]
        zero = [r for r in A if r[col] == 0]
        if not nz:
            col += 1
            continue
        # gcd-reduce the column among nz rows
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col] != 0:
                    rest.append(r)
                elif any(r):
                    zero.append(r)
            nz = [piv] + rest
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        A = zero
        col += 1
    # reduce above pivots
    for i in range(len(out)):
        pc = next(c for c in range(m) if out[i][c] != 0)
        for k in range(i):
            q = out[k][pc] // out[i][pc]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def hnf_with_modulus(rows, modulus, n):
    """HNF of the lattice spanned by rows together with modulus * Z^n."""
    extra = [[modulus if i == j else 0 for j in range(n)] for i in range(n)]
    return hnf_rows(list(rows) + extra, n)


def det(M):
    """Determinant of a square matrix of ints or Fractions (Bareiss / Gauss)."""
    n = len(M)
    if n == 0:
        return 1
    if all(isinstance(x, int) for r in M for x in r):
        A = [list(r) for r in M]
        sign, prev = 1, 1
        for k in range(n - 1):
            if A[k][k] == 0:
                sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
                if sw is None:
                    return 0
                A[k], A[sw] = A[sw], A[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            prev = A[k][k]
        return sign * A[n - 1][n - 1]
    A = [[Fraction(x) for x in r] for r in M]
    d = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            A[k], A[p] = A[p], A[k]
            d = -d
        d *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    return d


def inverse(M):
    """Inverse of a square rational matrix as Fractions."""
    n = len(M)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[k], A[p] = A[p], A[k]
        inv = 1 / A[k][k]
        A[k] = [x * inv for x in A[k]]
        for i in range(n):
            if i != k and A[i][k]:
                f = A[i][k]
                A[i] = [a - f * b for a, b in zip(A[i], A[k])]
    return [r[n:] for r in A]


def matmul(A, B):
    return [[sum(a * b for a, b in zip(r, c)) for c in zip(*B)] for r in A]


def vecmat(v, M):
    return [sum(v[i] * M[i][j] for i in range(len(v))) for j in range(len(M[0]))]


def solve_row(v, M):
    """Coordinates x with x * M = v for square invertible M."""
    return vecmat(v, inverse(M))


def common_denominator(rows):
    d = 1
    for r in rows:
        for x in r:
            x = Fraction(x)
            d = d * x.denominator // gcd(d, x.denominator)
    return d


def elementary_divisors(rows):
    """Nonzero invariant factors of an integer matrix (Smith normal form)."""
    if not rows:
        return []
    return [int(x) for x in invariant_factors(Matrix(rows)) if x != 0]


def kernel_mod_p(rows, p):
    """Basis of the left kernel {x : x * A = 0} over F_p, as lists of ints."""
    m = len(rows)
    if m == 0:
        return []
    ncols = len(rows[0])
    # augment with identity and row reduce
    A = [[x % p for x in rows[i]] + [int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        r += 1
    return [row[ncols:] for row in A[r:]]


def rank_mod_p(rows, p):
    if not rows:
        return 0
    return len(rows) - len(kernel_mod_p(rows, p))


def row_space_mod_p(rows, p):
    """Reduced echelon basis of the row space over F_p."""
    A = [[x % p for x in r] for r in rows]
    if not A:
        return []
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        r += 1
    return A[:r]
