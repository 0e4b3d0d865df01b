"""Univariate integer polynomials, coefficient lists low degree first."""

from __future__ import annotations

from fractions import Fraction

from sympy import ZZ
from sympy.polys.galoistools import gf_factor, gf_irreducible_p


class DiscriminantDivisible(ValueError):
    pass


def degree(f) -> int:
    d = len(f) - 1
    while d >= 0 and f[d] == 0:
        d -= 1
    return d


def strip(f):
    return list(f[: degree(f) + 1])


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def derivative(f):
    return [i * f[i] for i in range(1, len(f))]


# -- arithmetic over F_p ----------------------------------------------------

def pmod(f, p):
    return strip([c % p for c in f])


def pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return pmod(out, p)


def pdivmod(f, g, p):
    f = pmod(f, p)
    g = pmod(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 0)
    r = list(f)
    while len(r) - 1 >= dg and r:
        c = r[-1] * inv % p
        shift = len(r) - 1 - dg
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = (r[shift + i] - c * b) % p
        r = strip(r)
    return strip(q), r


def pgcd(f, g, p):
    f, g = pmod(f, p), pmod(g, p)
    while g:
        f, g = g, pdivmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def ppowmod(f, e, g, p):
    result = [1]
    base = pdivmod(f, g, p)[1]
    while e:
        if e & 1:
            result = pdivmod(pmul(result, base, p), g, p)[1]
        base = pdivmod(pmul(base, base, p), g, p)[1]
        e >>= 1
    return result


def resultant_int(f, g) -> int:
    """Resultant over Z via the Sylvester determinant."""
    from .linalg import det

    f, g = strip(f), strip(g)
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    if size == 0:
        return 1
    rows = []
    fh = list(reversed(f))
    gh = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fh + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gh + [0] * (size - n - 1 - i))
    return det(rows)


def discriminant(f) -> int:
    f = strip(f)
    n = len(f) - 1
    r = resultant_int(f, derivative(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, f[-1])
    assert rem == 0
    return q


def poly_split_test(g, ell: int) -> bool:
    """True iff g splits into distinct linear factors modulo the prime ell."""
    g = strip(g)
    if discriminant(g) % ell == 0:
        raise DiscriminantDivisible(f"{ell} divides disc(g)")
    if g[-1] % ell == 0:
        raise DiscriminantDivisible(f"{ell} divides the leading coefficient")
    n = len(g) - 1
    xl = ppowmod([0, 1], ell, g, ell)
    h = list(xl) + [0] * max(0, 2 - len(xl))
    h[1] = (h[1] - 1) % ell
    d = pgcd(g, strip(h), ell)
    return len(d) - 1 == n


def _shift_scale(f, r, p):
    """Coefficients of f(r + p*y)."""
    out = [0] * len(f)
    # Horner in the variable r + p*y
    for c in reversed(f):
        nxt = [0] * len(f)
        for i, a in enumerate(out):
            if a:
                nxt[i] += a * r
                if i + 1 < len(f):
                    nxt[i + 1] += a * p
        nxt[0] += c
        out = nxt
    return out


def count_padic_roots(f, p: int, depth: int = 64) -> int:
    """Number of roots in Z_p of a squarefree integer polynomial f.

    Roots mod p where f' does not vanish lift uniquely; at the others the
    polynomial f(r + p*y)/p^k is examined recursively.
    """
    f = strip([int(c) for c in f])
    if len(f) <= 1:
        return 0
    if depth == 0:
        raise ValueError("p-adic root count did not terminate (f not squarefree?)")
    while all(c % p == 0 for c in f):
        f = [c // p for c in f]
    df = derivative(f)
    total = 0
    for r in range(p):
        if evaluate(f, r) % p:
            continue
        if evaluate(df, r) % p:
            total += 1
        else:
            total += count_padic_roots(_shift_scale(f, r, p), p, depth - 1)
    return total


def splits_completely_padic(g, ell: int) -> bool:
    """g (squarefree, monic) has deg g distinct roots in Z_ell."""
    return count_padic_roots(g, ell) == degree(g)


# -- factorisation mod p (sympy's galoistools) ------------------------------

def factor_mod_p(f, p: int) -> list[tuple[list[int], int]]:
    """Monic irreducible factors of f mod p with multiplicities (low-first)."""
    high = [c % p for c in reversed(strip(f))]
    lc, facs = gf_factor(high, p, ZZ)
    out = []
    for fac, mult in facs:
        out.append(([int(c) for c in reversed(fac)], mult))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def irreducible_mod_p(f, p: int) -> bool:
    high = [c % p for c in reversed(strip(f))]
    if high[0] == 0:
        return False
    return bool(gf_irreducible_p(high, p, ZZ))


def rational_roots(f) -> list[Fraction]:
    """Rational roots of an integer polynomial (brute force over divisors)."""
    from sympy import divisors

    f = strip(f)
    roots = []
    if f and f[0] == 0:
        roots.append(Fraction(0))
        while f and f[0] == 0:
            f = f[1:]
    if len(f) <= 1:
        return roots
    for p in divisors(abs(f[0])):
        for q in divisors(abs(f[-1])):
            for s in (1, -1):
                x = Fraction(s * p, q)
                if x not in roots and evaluate(f, x) == 0:
                    roots.append(x)
    return roots


# -- real root counting -----------------------------------------------------

def _prem(f, g):
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    while len(f) >= len(g) and any(f):
        c = f[-1] / g[-1]
        shift = len(f) - len(g)
        for i, b in enumerate(g):
            f[shift + i] -= c * b
        f = f[:-1]
        while f and f[-1] == 0:
            f = f[:-1]
    return f


def count_real_roots(f) -> int:
    """Number of distinct real roots via a Sturm chain."""
    chain = [[Fraction(c) for c in strip(f)], [Fraction(c) for c in derivative(strip(f))]]
    while chain[-1] and len(chain[-1]) > 1:
        r = _prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])

    def changes(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def sgn(x):
        return (x > 0) - (x < 0)

    at_pos = [sgn(p[-1]) for p in chain if p]
    at_neg = [sgn(p[-1]) * (-1) ** (len(p) - 1) for p in chain if p]
    return changes(at_neg) - changes(at_pos)
