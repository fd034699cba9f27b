"""Short-vector enumeration for small positive definite quadratic forms.

Used for the T2 form of an order: every element with T2 below a bound is
listed, which is what makes the unit and principality searches exhaustive.
"""

import math

import numpy as np

# relative slack added to enumeration bounds to absorb float rounding
SLACK = 1e-9


def lll_gram(G, delta=0.99):
    """LLL reduction of a Gram matrix.

    Returns (G', U) with U unimodular (integer rows) and G' = U G U^T.
    """
    G = np.array(G, dtype=float)
    n = G.shape[0]

    def gram(U):
        Um = np.array(U, dtype=float)
        return Um @ G @ Um.T

    return _lll(gram, n, delta)


def lll_gram_mp(G, prec, delta=0.99):
    """LLL of an ill-conditioned Gram matrix carried in mpmath at ``prec`` bits.

    Returns (G' as floats, U).  Use this when the entries span many orders
    of magnitude; the reduced Gram matrix is then well conditioned.
    """
    from mpmath import mp

    n = len(G)
    with mp.workprec(prec):
        Gm = mp.matrix(G)

        def gram_mp(U):
            Um = mp.matrix(U)
            return Um * Gm * Um.T

        def gram(U):
            H = gram_mp(U)
            return np.array([[float(H[i, j]) for j in range(n)] for i in range(n)])

        def gso_mp(U):
            H = gram_mp(U)
            mu = [[mp.mpf(0)] * n for _ in range(n)]
            B = [mp.mpf(0)] * n
            for i in range(n):
                for j in range(i):
                    mu[i][j] = (H[i, j] - mp.fsum(mu[j][k] * mu[i][k] * B[k] for k in range(j))) / B[j]
                B[i] = H[i, i] - mp.fsum(mu[i][k] ** 2 * B[k] for k in range(i))
            return mu, B

        U = [[int(i == j) for j in range(n)] for i in range(n)]
        mu, B = gso_mp(U)
        k = 1
        while k < n:
            for j in range(k - 1, -1, -1):
                q = int(mp.nint(mu[k][j]))
                if q:
                    U[k] = [a - q * b for a, b in zip(U[k], U[j])]
                    mu, B = gso_mp(U)
            if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
                k += 1
            else:
                U[k], U[k - 1] = U[k - 1], U[k]
                mu, B = gso_mp(U)
                k = max(k - 1, 1)
        return gram(U), U


def _lll(gram, n, delta):
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    k = 1
    H = gram(U)
    mu, B = _gso(H)
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                U[k] = [a - q * b for a, b in zip(U[k], U[j])]
                H = gram(U)
                mu, B = _gso(H)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            U[k], U[k - 1] = U[k - 1], U[k]
            H = gram(U)
            mu, B = _gso(H)
            k = max(k - 1, 1)
    return gram(U), U


def _gso(H):
    n = H.shape[0]
    mu = np.zeros((n, n))
    B = np.zeros(n)
    for i in range(n):
        for j in range(i):
            mu[i][j] = (H[i][j] - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))) / B[j]
        B[i] = H[i][i] - sum(mu[i][k] ** 2 * B[k] for k in range(i))
    return mu, B


def _cholesky_q(G):
    """Coefficients q with x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    n = G.shape[0]
    q = np.array(G, dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def enumerate_short(G, bound, include_zero=False, limit=None, reduced=None):
    """All integer x with x^T G x <= bound, up to sign only once (x and -x).

    ``G`` is a positive definite matrix (float).  The result is a list of
    tuples.  With ``limit`` the search stops early and returns None once more
    than ``limit`` vectors were found.  ``reduced`` may carry a precomputed
    (G', U) from lll_gram_mp, in which case ``G`` is ignored.
    """
    if reduced is None:
        Gr, U = lll_gram(np.array(G, dtype=float))
    else:
        Gr, U = reduced
    Gr = np.array(Gr, dtype=float)
    n = Gr.shape[0]
    q = _cholesky_q(Gr)
    C = bound * (1 + SLACK) + SLACK
    found = []
    x = [0] * n
    count = 0

    def rec(i, rem):
        nonlocal count
        center = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(rem, 0.0) / q[i][i])
        lo, hi = math.ceil(center - r), math.floor(center + r)
        if i == 0:
            for v in range(lo, hi + 1):
                if rem - q[0][0] * (v - center) ** 2 >= 0:
                    x[0] = v
                    found.append(tuple(x))
            x[0] = 0
            count = len(found)
            if limit is not None and count > 2 * limit + 1:
                raise _Overflow
            return
        for v in range(lo, hi + 1):
            t = rem - q[i][i] * (v - center) ** 2
            if t >= 0:
                x[i] = v
                rec(i - 1, t)
        x[i] = 0

    try:
        rec(n - 1, C)
    except _Overflow:
        return None
    res = [(0,) * n] if include_zero else []
    for y in found:
        if not any(y):
            continue
        # one representative of each pair +-y
        if next(c for c in y if c) < 0:
            continue
        res.append(tuple(sum(y[i] * U[i][j] for i in range(n)) for j in range(n)))
    return res


class _Overflow(Exception):
    pass
