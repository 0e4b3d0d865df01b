"""Number fields given by a monic polynomial and a trusted integral basis."""

from __future__ import annotations

import logging
import warnings
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt, lcm

import mpmath

from . import linalg, poly

log = logging.getLogger(__name__)


class FieldError(ValueError):
    pass


class NumberField:
    """K = Q[x]/(f) with an integral basis omega_1 = 1, ..., omega_n.

    ``basis[i]`` holds the power-basis coordinates of omega_i.
    """

    def __init__(self, poly_coeffs, basis, name: str = "K"):
        f = [int(c) for c in poly_coeffs]
        f = poly.strip(f)
        if len(f) < 2 or f[-1] != 1:
            raise FieldError("defining polynomial must be monic of degree >= 1")
        self.f = f
        self.n = n = len(f) - 1
        self.name = name
        B = [[Fraction(x) for x in row] for row in basis]
        if linalg.shape(B) != (n, n):
            raise FieldError(f"basis must be {n}x{n}")
        if B[0] != [Fraction(1)] + [Fraction(0)] * (n - 1):
            raise FieldError("first basis element must be 1")
        if n > 1 and poly.rational_roots(f):
            raise FieldError("defining polynomial has a rational root")
        dB = linalg.det_rational(B)
        if dB == 0:
            raise FieldError("basis matrix is singular")
        self.basis = B
        self._basis_inv = linalg.inverse_rational(B)
        inv_index = abs(dB)
        if inv_index.numerator != 1:
            raise FieldError("basis does not contain Z[theta]")
        self.index = inv_index.denominator  # [o_K : Z[theta]]
        self._build_table()
        self.irreducibility_witness = self._find_irreducibility_witness()
        if self.irreducibility_witness is None and n > 1:
            warnings.warn("no prime <= 200 certifies irreducibility; accepted unverified")
        self.r1 = poly.count_real_roots(f)
        self.r2 = (n - self.r1) // 2
        self.disc = self._discriminant()
        self._check_maximal()

    # -- construction helpers ------------------------------------------------

    def _power_to_basis(self, coeffs) -> list[Fraction]:
        c = list(coeffs) + [0] * (self.n - len(coeffs))
        # coords y with sum y_i * basis[i] = c  ->  y = c * B^{-1}
        return [sum(Fraction(c[k]) * self._basis_inv[k][i] for k in range(self.n))
                for i in range(self.n)]

    def _basis_to_power(self, coords) -> list[Fraction]:
        return [sum(Fraction(coords[i]) * self.basis[i][k] for i in range(self.n))
                for k in range(self.n)]

    def _reduce_power(self, p) -> list[Fraction]:
        p = list(p)
        n = self.n
        for d in range(len(p) - 1, n - 1, -1):
            c = p[d]
            if c:
                for k in range(n + 1):
                    p[d - n + k] -= c * self.f[k]
        return (p + [0] * n)[:n]

    def _build_table(self):
        n = self.n
        table = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                prod = [Fraction(0)] * (2 * n - 1)
                for a, x in enumerate(self.basis[i]):
                    if x:
                        for b, y in enumerate(self.basis[j]):
                            prod[a + b] += x * y
                coords = self._power_to_basis(self._reduce_power(prod))
                if any(c.denominator != 1 for c in coords):
                    raise FieldError("basis is not closed under multiplication")
                table[i][j] = table[j][i] = [int(c) for c in coords]
        self.table = table

    def _find_irreducibility_witness(self):
        from sympy import primerange

        if self.n == 1:
            return 0
        for p in primerange(2, 201):
            if poly.irreducible_mod_p(self.f, p):
                return p
        return None

    def _discriminant(self) -> int:
        n = self.n
        tr = [self.trace_basis(k) for k in range(n)]
        gram = [[sum(self.table[i][j][k] * tr[k] for k in range(n)) for j in range(n)]
                for i in range(n)]
        return linalg.det(gram)

    def _check_maximal(self):
        from sympy import factorint

        for p, k in sorted(factorint(abs(self.disc)).items()):
            if k >= 2 and not self.is_p_maximal(p):
                raise FieldError(f"basis is not maximal at {p}; supply an integral basis")

    def is_p_maximal(self, p: int) -> bool:
        """One step of the round-2 test: the p-radical has no larger multiplier ring."""
        n = self.n
        q = p
        while q < n:
            q *= p
        # Frobenius x -> x^q is F_p-linear on o/p; its kernel is the radical mod p
        cols = []
        for i in range(n):
            v = self._powmod_p(i, q, p)
            cols.append(v)
        ker = linalg.nullspace_mod_p(linalg.from_columns(cols, n), p)
        gens = ker + [[p * int(i == j) for i in range(n)] for j in range(n)]
        I = linalg.hnf_basis(linalg.from_columns(gens, n))
        Iinv = linalg.inverse_rational(I)
        Icols = linalg.columns(I)
        # x in o with x*I inside p*I  <=>  kernel of x -> (b -> x b mod p I)
        rows = []
        for b in Icols:
            imgs = []
            for i in range(n):
                prod = [0] * n
                for j, bj in enumerate(b):
                    if bj:
                        for k, c in enumerate(self.table[i][j]):
                            prod[k] += bj * c
                y = [sum(Iinv[r][k] * prod[k] for k in range(n)) for r in range(n)]
                imgs.append([int(t) % p for t in y])
            for r in range(n):
                rows.append([imgs[i][r] for i in range(n)])
        return not linalg.nullspace_mod_p(rows, p)

    def _powmod_p(self, i: int, e: int, p: int) -> list[int]:
        n = self.n
        result = [int(k == 0) for k in range(n)]
        base = [int(k == i) for k in range(n)]

        def mul(a, b):
            out = [0] * n
            for s, x in enumerate(a):
                if x:
                    for t, y in enumerate(b):
                        if y:
                            for k, c in enumerate(self.table[s][t]):
                                out[k] += x * y * c
            return [c % p for c in out]

        while e:
            if e & 1:
                result = mul(result, base)
            base = mul(base, base)
            e >>= 1
        return result

    # -- elements --------------------------------------------------------------

    def trace_basis(self, k: int) -> int:
        return sum(self.table[k][j][j] for j in range(self.n))

    def element(self, coords, den: int = 1) -> "FieldElement":
        return FieldElement(self, coords, den)

    def from_fractions(self, coords) -> "FieldElement":
        fr = [Fraction(c) for c in coords]
        d = 1
        for c in fr:
            d = lcm(d, c.denominator)
        return FieldElement(self, [int(c * d) for c in fr], d)

    def from_power_basis(self, coeffs) -> "FieldElement":
        fr = [Fraction(c) for c in coeffs]
        return self.from_fractions(self._power_to_basis(self._reduce_power(fr + [0])))

    def from_int(self, a) -> "FieldElement":
        a = Fraction(a)
        return FieldElement(self, [a.numerator] + [0] * (self.n - 1), a.denominator)

    def one(self) -> "FieldElement":
        return self.from_int(1)

    def zero(self) -> "FieldElement":
        return self.from_int(0)

    def gen(self) -> "FieldElement":
        """The root theta of the defining polynomial."""
        return self.from_power_basis([0, 1])

    def omega(self, i: int) -> "FieldElement":
        v = [0] * self.n
        v[i] = 1
        return FieldElement(self, v, 1)

    # -- numerics ----------------------------------------------------------------

    @cached_property
    def roots(self):
        """Complex roots: r1 real ones first, then one of each conjugate pair."""
        with mpmath.workdps(60):
            rts = mpmath.polyroots(list(reversed(self.f)), maxsteps=200, extraprec=200)
        real = sorted((mpmath.re(r) for r in rts if abs(mpmath.im(r)) < mpmath.mpf(10) ** -30))
        cplx = sorted((r for r in rts if mpmath.im(r) > mpmath.mpf(10) ** -30),
                      key=lambda z: (mpmath.re(z), mpmath.im(z)))
        if len(real) != self.r1 or len(cplx) != self.r2:
            raise FieldError("root isolation disagrees with the Sturm count")
        return real + cplx

    def embed(self, x: "FieldElement", k: int):
        with mpmath.workdps(60):
            r = self.roots[k]
            pc = self._basis_to_power(x.coords())
            return mpmath.polyval([mpmath.mpf(c.numerator) / c.denominator for c in reversed(pc)], r)

    def real_sign(self, x: "FieldElement", k: int) -> int:
        if k >= self.r1:
            raise FieldError("not a real place")
        v = self.embed(x, k)
        if abs(v) < mpmath.mpf(10) ** -40:
            raise FieldError("element too close to zero at a real place")
        return 1 if v > 0 else -1

    @cached_property
    def t2_gram(self) -> list[list[Fraction]]:
        """A positive definite rational Gram matrix close to the T2 form.

        Exact for imaginary quadratic fields (where T2 = 2N).
        """
        n = self.n
        if n == 2 and self.r1 == 0:
            t = self.trace_basis(1)
            nw = self.omega(1).norm()
            return [[Fraction(2), Fraction(t)], [Fraction(t), 2 * nw]]
        with mpmath.workdps(60):
            emb = [[self.embed(self.omega(i), k) for k in range(self.r1 + self.r2)]
                   for i in range(n)]
            G = []
            for i in range(n):
                row = []
                for j in range(n):
                    s = mpmath.mpf(0)
                    for k in range(self.r1):
                        s += emb[i][k] * emb[j][k]
                    for k in range(self.r1, self.r1 + self.r2):
                        s += 2 * mpmath.re(emb[i][k] * mpmath.conj(emb[j][k]))
                    row.append(Fraction(int(mpmath.nint(s * 2 ** 48)), 2 ** 48))
                G.append(row)
        return G

    def __repr__(self):
        return f"NumberField({self.f}, disc={self.disc})"


class FieldElement:
    """An element of K as an integer vector over the integral basis / den."""

    __slots__ = ("K", "num", "den")

    def __init__(self, K: NumberField, coords, den: int = 1):
        num = [int(c) for c in coords]
        if len(num) != K.n:
            raise FieldError("wrong number of coordinates")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-c for c in num], -den
        g = den
        for c in num:
            g = gcd(g, c)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.K = K
        self.num = tuple(num)
        self.den = den

    def coords(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def is_integral(self) -> bool:
        return self.den == 1

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise FieldError("element is not rational")
        return Fraction(self.num[0], self.den)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        return self.K.from_int(other)

    def __add__(self, other):
        other = self._coerce(other)
        d = lcm(self.den, other.den)
        a, b = d // self.den, d // other.den
        return FieldElement(self.K, [a * x + b * y for x, y in zip(self.num, other.num)], d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.K, [-x for x in self.num], self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            q = Fraction(other)
            return FieldElement(self.K, [x * q.numerator for x in self.num], self.den * q.denominator)
        n = self.K.n
        T = self.K.table
        out = [0] * n
        for i, a in enumerate(self.num):
            if a:
                Ti = T[i]
                for j, b in enumerate(other.num):
                    if b:
                        ab = a * b
                        for k, c in enumerate(Ti[j]):
                            if c:
                                out[k] += ab * c
        return FieldElement(self.K, out, self.den * other.den)

    __rmul__ = __mul__

    def mult_matrix(self) -> list[list[int]]:
        """Integer matrix of multiplication by den*x on the integral basis (columns)."""
        n = self.K.n
        cols = []
        for j in range(n):
            v = [0] * n
            for i, a in enumerate(self.num):
                if a:
                    for k, c in enumerate(self.K.table[i][j]):
                        v[k] += a * c
            cols.append(v)
        return linalg.transpose(cols)

    def norm(self) -> Fraction:
        return Fraction(linalg.det(self.mult_matrix()), self.den ** self.K.n)

    def trace(self) -> Fraction:
        M = self.mult_matrix()
        return Fraction(sum(M[i][i] for i in range(self.K.n)), self.den)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        M = self.mult_matrix()
        inv = linalg.inverse_rational(M)
        # (den*x) * y = 1 has y = M^{-1} e_1; x^{-1} = den * y
        return self.K.from_fractions([inv[i][0] * self.den for i in range(self.K.n)])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.K.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.K.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.K is other.K and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def min_poly_power_coords(self) -> list[Fraction]:
        return self.K._basis_to_power(self.coords())

    def to_json(self):
        if self.den == 1:
            return list(self.num)
        return [str(Fraction(c, self.den)) for c in self.num]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords()):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*w{i + 1}")
        return "(" + (" + ".join(terms) or "0") + ")"


def load_field(poly_coeffs, basis=None, name: str = "K") -> NumberField:
    """Validated NumberField; the power basis is used when no basis is given."""
    n = len(poly.strip([int(c) for c in poly_coeffs])) - 1
    if basis is None:
        basis = [[int(i == j) for j in range(n)] for i in range(n)]
    basis = [[Fraction(x) for x in row] for row in basis]
    return NumberField(poly_coeffs, basis, name=name)


def isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None
