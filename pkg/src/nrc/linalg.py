"""Exact integer matrix algebra.

Matrices are plain lists of rows of Python ints (or Fractions where noted).
Lattices are column spans throughout: an n x m matrix describes the lattice
generated by its m columns in Z^n.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


class DimensionError(ValueError):
    pass


class NotCoprimeError(ValueError):
    pass


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        return -a, -u0, -v0
    return a, u0, v0


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int) -> Matrix:
    return [[0] * m for _ in range(n)]


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    if not M:
        return 0, 0
    return len(M), len(M[0])


def copy(M):
    return [list(r) for r in M]


def transpose(M):
    n, m = shape(M)
    return [[M[i][j] for i in range(n)] for j in range(m)]


def matmul(A, B):
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise DimensionError(f"cannot multiply {n}x{k} by {k2}x{m}")
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    if A and len(A[0]) != len(v):
        raise DimensionError("matrix/vector size mismatch")
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def hconcat(*mats):
    rows = {len(M) for M in mats if M}
    if len(rows) > 1:
        raise DimensionError("row counts differ")
    n = rows.pop() if rows else 0
    return [sum((list(M[i]) for M in mats if M), []) for i in range(n)]


def columns(M) -> list[list]:
    return transpose(M)


def from_columns(cols, n: int | None = None):
    if not cols:
        return [[] for _ in range(n or 0)]
    return transpose(cols)


def det(M) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    n, m = shape(M)
    if n != m:
        raise DimensionError("determinant of non-square matrix")
    if n == 0:
        return 1
    A = copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def det_rational(M) -> Fraction:
    den = 1
    for row in M:
        for x in row:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    scaled = [[int(Fraction(x) * den) for x in row] for row in M]
    return Fraction(det(scaled), den ** len(M))


def inverse_rational(M) -> list[list[Fraction]]:
    n, m = shape(M)
    if n != m:
        raise DimensionError("inverse of non-square matrix")
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def is_unimodular(U) -> bool:
    return abs(det(U)) == 1


def hnf(M, allow_deficient: bool = True) -> tuple[Matrix, Matrix]:
    """Column Hermite normal form.

    Returns (H, U) with H = M*U, U unimodular. H is upper triangular in
    the sense that the pivot of the k-th nonzero column from the right
    sits in the k-th row from the bottom; pivots are positive and entries
    to the right of a pivot are reduced into [0, pivot). Zero columns are
    moved to the left.
    """
    n, m = shape(M)
    A = copy(M)
    U = identity(m)
    k = m - 1
    pivots_found = 0

    def colop(j, kk, a, b, c, d):
        # (col_j, col_k) <- (a*col_j + b*col_k, c*col_j + d*col_k)
        for X in (A, U):
            for row in X:
                x, y = row[j], row[kk]
                row[j] = a * x + b * y
                row[kk] = c * x + d * y

    for i in range(n - 1, -1, -1):
        if k < 0:
            break
        for j in range(k - 1, -1, -1):
            if A[i][j] == 0:
                continue
            a, b = A[i][k], A[i][j]
            g, u, v = xgcd(a, b)
            # new col_k = u*col_k + v*col_j; new col_j = (a/g)*col_j - (b/g)*col_k
            colop(j, k, a // g, -(b // g), v, u)
        if A[i][k] == 0:
            if not allow_deficient:
                raise DimensionError("matrix is not of full row rank")
            continue
        if A[i][k] < 0:
            for X in (A, U):
                for row in X:
                    row[k] = -row[k]
        p = A[i][k]
        for j in range(k + 1, m):
            q = A[i][j] // p
            if q:
                for X in (A, U):
                    for row in X:
                        row[j] -= q * row[k]
        k -= 1
        pivots_found += 1
    return A, U


def hnf_basis(M) -> Matrix:
    """Nonzero columns of the HNF of M (a canonical lattice basis)."""
    H, _ = hnf(M)
    n, m = shape(H)
    keep = [j for j in range(m) if any(H[i][j] for i in range(n))]
    return [[H[i][j] for j in keep] for i in range(n)]


def kernel(M) -> Matrix:
    """Integer kernel basis of M (columns), via HNF transformation."""
    n, m = shape(M)
    H, U = hnf(M)
    zero = [j for j in range(m) if all(H[i][j] == 0 for i in range(n))]
    return [[U[i][j] for j in zero] for i in range(m)]


def snf(M) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: returns (D, U, V) with D = U*M*V.

    D is diagonal with d1 | d2 | ... (zeros last), U and V unimodular.
    """
    n, m = shape(M)
    A = copy(M)
    U = identity(n)
    V = identity(m)

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for X in (A, V):
                for row in X:
                    row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for X in (A, V):
            for row in X:
                row[dst] += q * row[src]

    for t in range(min(n, m)):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                        best = (abs(A[i][j]), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, n):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, m):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < n and t < m and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return A, U, V


def diagonal(D) -> list[int]:
    n, m = shape(D)
    return [D[i][i] for i in range(min(n, m))]


def solve_integer(A, b) -> list[int] | None:
    """One integer solution x of A x = b, or None."""
    n, m = shape(A)
    H, U = hnf(A)
    # H is echelon from the right: walk rows bottom-up with pivot columns
    y = [0] * m
    r = list(b)
    k = m - 1
    for i in range(n - 1, -1, -1):
        if k >= 0 and H[i][k] != 0 and all(H[ii][k] == 0 for ii in range(i + 1, n)):
            q, rem = divmod(r[i], H[i][k])
            if rem:
                return None
            y[k] = q
            for ii in range(n):
                r[ii] -= q * H[ii][k]
            k -= 1
        elif r[i] != 0:
            return None
    if any(r):
        return None
    return matvec(U, y)


def crt_solve(residues: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Chinese remaindering over Z: returns (x, M) with x = r_i mod m_i."""
    x, M = 0, 1
    for r, mod in residues:
        if mod <= 0:
            raise ValueError("moduli must be positive")
        g, u, _ = xgcd(M, mod)
        if g != 1:
            raise NotCoprimeError(f"moduli {M} and {mod} are not coprime")
        # x + M*t = r mod mod  ->  t = (r - x) * M^-1
        t = ((r - x) * u) % mod
        x = x + M * t
        M *= mod
        x %= M
    return x, M


def common_denominator(M) -> int:
    den = 1
    for row in M:
        for x in row:
            d = Fraction(x).denominator
            den = den * d // gcd(den, d)
    return den


def rational_lattice_basis(M) -> tuple[Matrix, int]:
    """Canonical basis of the Z-span of rational columns: (H, d) meaning H/d."""
    d = common_denominator(M)
    scaled = [[int(Fraction(x) * d) for x in row] for row in M]
    H = hnf_basis(scaled)
    g = 0
    for row in H:
        for x in row:
            g = gcd(g, x)
    g = gcd(g, d)
    if g > 1:
        H = [[x // g for x in row] for row in H]
        d //= g
    return H, d


def dual_lattice(rows) -> list[list[Fraction]]:
    """Basis (columns) of {x : <r, x> in Z for every given row r}.

    The rows must span Q^n.
    """
    n = len(rows[0])
    H, d = rational_lattice_basis(transpose(rows))
    if len(H[0]) != n:
        raise DimensionError("rows do not span a full-rank lattice")
    B = [[Fraction(x, d) for x in row] for row in H]
    # columns of B span the row lattice; dual basis = columns of (B^-1)^T
    Binv = inverse_rational(B)
    return transpose(Binv)


def nullspace_mod_p(M, p: int) -> list[list[int]]:
    """Basis of the right kernel of M over F_p, as a list of vectors."""
    n, m = shape(M)
    A = [[x % p for x in row] for row in M]
    pivcols = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(n):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivcols.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(m) if c not in pivcols]
    basis = []
    for fc in free:
        v = [0] * m
        v[fc] = 1
        for i, pc in enumerate(pivcols):
            v[pc] = (-A[i][fc]) % p
        basis.append(v)
    return basis


def rank_mod_p(M, p: int) -> int:
    n, m = shape(M)
    return m - len(nullspace_mod_p(M, p)) if n else 0
