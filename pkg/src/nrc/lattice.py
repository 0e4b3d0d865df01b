"""Exact LLL on Gram matrices and Fincke-Pohst enumeration.

Used as a search accelerator: every candidate produced here is re-checked
exactly by the caller, so the positive definite form only has to be
reasonable, not canonical.
"""

from __future__ import annotations

import math
from fractions import Fraction


def gram_of(basis_cols, G):
    """Gram matrix B^T G B for integer basis columns and rational form G."""
    n = len(G)
    k = len(basis_cols)
    GB = [[sum(G[i][a] * basis_cols[j][a] for a in range(n)) for i in range(n)]
          for j in range(k)]
    return [[sum(basis_cols[i][a] * GB[j][a] for a in range(n)) for j in range(k)]
            for i in range(k)]


def _gso(Q):
    k = len(Q)
    mu = [[Fraction(0)] * k for _ in range(k)]
    B = [Fraction(0)] * k
    for i in range(k):
        for j in range(i):
            s = Fraction(Q[i][j])
            for t in range(j):
                s -= mu[j][t] * mu[i][t] * B[t]
            mu[i][j] = s / B[j]
        s = Fraction(Q[i][i])
        for t in range(i):
            s -= mu[i][t] ** 2 * B[t]
        B[i] = s
    return mu, B


def lll(Q, delta=Fraction(3, 4)):
    """LLL-reduce the lattice with Gram matrix Q.

    Returns (T, Q') where T is an integer unimodular matrix whose columns
    express the reduced basis in the original one and Q' = T^t Q T.
    """
    k = len(Q)
    Q = [[Fraction(x) for x in row] for row in Q]
    T = [[int(i == j) for j in range(k)] for i in range(k)]

    def size_reduce(i, j, q):
        # b_i -= q b_j
        for r in range(k):
            T[r][i] -= q * T[r][j]
        for r in range(k):
            Q[r][i] -= q * Q[r][j]
        for r in range(k):
            Q[i][r] -= q * Q[j][r]

    def swap(i, j):
        for r in range(k):
            T[r][i], T[r][j] = T[r][j], T[r][i]
        Q[i], Q[j] = Q[j], Q[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    i = 1
    while i < k:
        mu, B = _gso(Q)
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                size_reduce(i, j, q)
                mu, B = _gso(Q)
        if B[i] >= (delta - mu[i][i - 1] ** 2) * B[i - 1]:
            i += 1
        else:
            swap(i, i - 1)
            i = max(i - 1, 1)
    return T, Q


def enumerate_short(Q, bound):
    """Yield (x, Q(x)) for all nonzero integer x with x^t Q x <= bound.

    Traversal uses floating point with a small slack; the returned values
    are exact and filtered exactly.
    """
    k = len(Q)
    Qf = [[float(x) for x in row] for row in Q]
    # q_ii, q_ij decomposition:  Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    q = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            q[i][j] = Qf[i][j]
    for i in range(k):
        for j in range(i + 1, k):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for a in range(i + 1, k):
            for b in range(a, k):
                q[a][b] -= q[a][i] * q[i][b]
    bound = Fraction(bound)
    fb = float(bound) * (1 + 1e-9) + 1e-9
    x = [0] * k

    def exact_value(v):
        return sum(Q[i][j] * v[i] * v[j] for i in range(k) for j in range(k))

    def rec(i, remaining):
        if i < 0:
            if any(x):
                val = exact_value(x)
                if val <= bound:
                    yield list(x), val
            return
        c = -sum(q[i][j] * x[j] for j in range(i + 1, k))
        if q[i][i] <= 0:
            raise ValueError("form is not positive definite")
        r = math.sqrt(max(remaining, 0.0) / q[i][i]) + 1e-9
        lo, hi = math.ceil(c - r), math.floor(c + r)
        for xi in range(lo, hi + 1):
            x[i] = xi
            t = xi - c
            rem = remaining - q[i][i] * t * t
            if rem >= -1e-9 * (1 + fb):
                yield from rec(i - 1, rem)
        x[i] = 0

    yield from rec(k - 1, fb)
