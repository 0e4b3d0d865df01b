"""Fractional ideals of o_K as HNF lattices over the integral basis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

from sympy import factorint

from . import lattice, linalg, poly
from .field import FieldElement, NumberField


class IndexDivisor(ValueError):
    def __init__(self, ell):
        super().__init__(f"{ell} divides the index [o_K : Z[theta]]; supply its primes as verified input")
        self.ell = ell


class IdealError(ValueError):
    pass


class FracIdeal:
    """(1/den) * lattice spanned by the columns of an upper triangular HNF."""

    __slots__ = ("K", "hnf", "den", "__dict__")

    def __init__(self, K: NumberField, hnf, den: int = 1):
        g = den
        for row in hnf:
            for x in row:
                g = gcd(g, x)
        if g == 0:
            raise IdealError("zero ideal")
        self.K = K
        self.hnf = [[x // g for x in row] for row in hnf] if g > 1 else [list(r) for r in hnf]
        self.den = den // g

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_lattice(cls, K: NumberField, cols, den: int = 1) -> "FracIdeal":
        """Ideal from integer column generators (divided by den) of a full lattice."""
        H = linalg.hnf_basis(linalg.from_columns(cols, K.n))
        if not H or len(H[0]) != K.n:
            raise IdealError("generators do not span a full-rank lattice")
        return cls(K, H, den)

    @classmethod
    def from_generators(cls, K: NumberField, gens) -> "FracIdeal":
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            raise IdealError("zero ideal")
        d = 1
        for g in gens:
            d = lcm(d, g.den)
        cols = []
        for g in gens:
            s = d // g.den
            M = g.mult_matrix()
            for j in range(K.n):
                cols.append([M[i][j] * s for i in range(K.n)])
        return cls.from_lattice(K, cols, d)

    @classmethod
    def principal(cls, x: FieldElement) -> "FracIdeal":
        return cls.from_generators(x.K, [x])

    @classmethod
    def unit(cls, K: NumberField) -> "FracIdeal":
        return cls(K, linalg.identity(K.n), 1)

    @classmethod
    def from_int(cls, K: NumberField, a) -> "FracIdeal":
        a = Fraction(a)
        n = K.n
        return cls(K, [[abs(a.numerator) * int(i == j) for j in range(n)] for i in range(n)],
                   a.denominator)

    # -- basic data ----------------------------------------------------------------

    def basis(self) -> list[FieldElement]:
        cols = linalg.columns(self.hnf)
        return [FieldElement(self.K, c, self.den) for c in cols]

    def is_integral(self) -> bool:
        return self.den == 1

    def norm(self) -> Fraction:
        return Fraction(abs(linalg.det(self.hnf)), self.den ** self.K.n)

    def min_integer(self) -> Fraction:
        """Positive generator of the ideal intersected with Q."""
        # for an upper triangular column HNF, Z e_1 meets the lattice in H[0][0]
        return Fraction(self.hnf[0][0], self.den)

    def key(self):
        return (self.den, tuple(map(tuple, self.hnf)))

    def __eq__(self, other):
        return isinstance(other, FracIdeal) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FracIdeal(N={self.norm()}, hnf={self.hnf}, den={self.den})"

    def to_json(self):
        return {"den": self.den, "hnf": self.hnf}

    # -- membership --------------------------------------------------------------

    def _solve(self, x: FieldElement):
        """Integer coordinates of x in the HNF basis, or None."""
        n = self.K.n
        # den_a * x = H y  with x = num/dx  ->  H y = den_a * num / dx
        v = [Fraction(c * self.den, x.den) for c in x.num]
        y = [0] * n
        for i in range(n - 1, -1, -1):
            s = v[i] - sum(self.hnf[i][j] * y[j] for j in range(i + 1, n))
            q = s / self.hnf[i][i]
            if q.denominator != 1:
                return None
            y[i] = int(q)
        return y

    def contains(self, x: FieldElement) -> bool:
        return self._solve(x) is not None

    def __contains__(self, x):
        return self.contains(x)

    def issubset(self, other: "FracIdeal") -> bool:
        return all(other.contains(b) for b in self.basis())

    def reduce(self, x: FieldElement) -> FieldElement:
        """Canonical representative of an integral x modulo an integral ideal."""
        if self.den != 1 or x.den != 1:
            raise IdealError("reduction needs integral data")
        v = list(x.num)
        n = self.K.n
        for i in range(n - 1, -1, -1):
            q = v[i] // self.hnf[i][i]
            if q:
                for r in range(n):
                    v[r] -= q * self.hnf[r][i]
        return FieldElement(self.K, v, 1)

    # -- arithmetic ----------------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return FracIdeal.from_generators(self.K, [b * other for b in self.basis()])
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FracIdeal(self.K, [[x * abs(q.numerator) for x in r] for r in self.hnf],
                             self.den * q.denominator)
        A, B = self.basis(), other.basis()
        # products of Z-bases span the product ideal
        gens = [a * b for a in A for b in B]
        cols = [[c * (self.den * other.den // g.den) for c in g.num] for g in gens]
        return FracIdeal.from_lattice(self.K, cols, self.den * other.den)

    __rmul__ = __mul__

    def __add__(self, other: "FracIdeal") -> "FracIdeal":
        d = lcm(self.den, other.den)
        cols = [[x * (d // self.den) for x in c] for c in linalg.columns(self.hnf)]
        cols += [[x * (d // other.den) for x in c] for c in linalg.columns(other.hnf)]
        return FracIdeal.from_lattice(self.K, cols, d)

    def inverse(self) -> "FracIdeal":
        rows = []
        for b in self.basis():
            M = b.mult_matrix()
            rows.extend([[Fraction(x, b.den) for x in row] for row in M])
        cols = linalg.dual_lattice(rows)
        d = linalg.common_denominator(cols)
        icols = [[int(x * d) for x in row] for row in linalg.transpose(cols)]
        return FracIdeal.from_lattice(self.K, icols, d)

    def __truediv__(self, other):
        if isinstance(other, FieldElement):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, e: int) -> "FracIdeal":
        if e < 0:
            return self.inverse() ** (-e)
        result = FracIdeal.unit(self.K)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_coprime(self, other: "FracIdeal") -> bool:
        return (self + other) == FracIdeal.unit(self.K)

    def scaled_integral(self) -> "FracIdeal":
        return FracIdeal(self.K, self.hnf, 1)

    # -- short elements --------------------------------------------------------

    def t2_gram(self):
        cols = linalg.columns(self.hnf)
        return lattice.gram_of(cols, self.K.t2_gram)

    @cached_property
    def reduced_basis(self) -> list[FieldElement]:
        """LLL-reduced Z-basis with respect to (an approximation of) T2."""
        T, _ = lattice.lll(self.t2_gram())
        cols = linalg.matmul(self.hnf, T)
        return [FieldElement(self.K, c, self.den) for c in linalg.columns(cols)]

    def short_elements(self, bound):
        """Elements with T2-form value <= bound (in units of the ideal's scale)."""
        red = self.reduced_basis
        G = lattice.gram_of([list(b.num) for b in red], self.K.t2_gram)
        scale = Fraction(1, self.den ** 2)
        for x, val in lattice.enumerate_short(G, Fraction(bound) / scale):
            elt = FieldElement(self.K, [sum(xi * b.num[r] for xi, b in zip(x, red))
                                        for r in range(self.K.n)], self.den)
            yield elt, val * scale


@dataclass(eq=False)
class PrimeIdeal:
    """A prime of o_K above ell with two-element representation (ell, pi)."""

    K: NumberField
    p: int
    e: int
    f: int
    pi: FieldElement
    ideal: FracIdeal
    label: str = ""
    tau: FieldElement = field(init=False, repr=False)

    def __post_init__(self):
        inv = self.ideal.inverse()
        self.tau = next(b for b in inv.basis() if not b.is_integral())

    def norm(self) -> int:
        return self.p ** self.f

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self.ideal == other.ideal

    def __hash__(self):
        return hash(self.ideal)

    def __repr__(self):
        return f"PrimeIdeal({self.label or self.p}, e={self.e}, f={self.f})"

    def valuation_elt(self, x: FieldElement) -> int:
        if x.is_zero():
            raise IdealError("valuation of zero")
        v = -self.e * _vp(x.den, self.p)
        a = FieldElement(self.K, x.num, 1)
        while True:
            b = a * self.tau
            if not b.is_integral():
                return v
            a = b
            v += 1

    def to_json(self):
        return {"p": self.p, "e": self.e, "f": self.f, "pi": self.pi.to_json()}


def _vp(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def valuation(a, P: PrimeIdeal) -> int:
    """P-adic valuation of a fractional ideal or a field element."""
    if isinstance(a, FieldElement):
        return P.valuation_elt(a)
    vals = [P.valuation_elt(FieldElement(a.K, c, 1)) for c in linalg.columns(a.hnf) if any(c)]
    return min(vals) - P.e * _vp(a.den, P.p)


# -- prime decomposition ------------------------------------------------------

def _registry(K: NumberField) -> dict:
    if not hasattr(K, "_prime_cache"):
        K._prime_cache = {}
    return K._prime_cache


def _quotient_positions(P: FracIdeal) -> list[int]:
    return [i for i in range(P.K.n) if P.hnf[i][i] != 1]


def _residue_field_check(K: NumberField, P: FracIdeal, ell: int) -> int:
    """Return f if o_K/P is a field with ell^f elements, else raise."""
    pos = _quotient_positions(P)
    if any(P.hnf[i][i] != ell for i in pos):
        raise IdealError("lattice does not contain ell*o_K with elementary quotient")
    f = len(pos)
    if f == 0:
        raise IdealError("unit ideal is not prime")
    cols = []
    for i in pos:
        w = K.omega(i) ** ell
        r = P.reduce(FieldElement(K, [c % ell for c in w.num], 1))
        cols.append([r.num[j] % ell for j in pos])
    frob = linalg.transpose(cols)
    if linalg.rank_mod_p(frob, ell) != f:
        raise IdealError("quotient ring is not reduced")
    fixed = [[frob[i][j] - int(i == j) for j in range(f)] for i in range(f)]
    if len(linalg.nullspace_mod_p(fixed, ell)) != 1:
        raise IdealError("quotient ring is not a field")
    return f


def prime_from_generators(K: NumberField, ell: int, pi: FieldElement, label: str = "") -> PrimeIdeal:
    """Verified-input prime (ell, pi): checks the residue ring is a field."""
    P = FracIdeal.from_generators(K, [K.from_int(ell), pi])
    f = _residue_field_check(K, P, ell)
    tmp = PrimeIdeal(K, ell, 1, f, pi, P, label)
    e = tmp.valuation_elt(K.from_int(ell))
    return PrimeIdeal(K, ell, e, f, pi, P, label)


def register_primes(K: NumberField, ell: int, primes: list[PrimeIdeal]) -> None:
    """Accept a verified decomposition of ell (needed for index divisors)."""
    if sum(P.e * P.f for P in primes) != K.n:
        raise IdealError(f"sum e*f != n for the supplied primes above {ell}")
    prod = FracIdeal.unit(K)
    for P in primes:
        prod = prod * P.ideal ** P.e
    if prod != FracIdeal.from_int(K, ell):
        raise IdealError(f"supplied primes do not multiply to {ell}*o_K")
    _registry(K)[ell] = list(primes)


def decompose_prime(K: NumberField, ell: int) -> list[PrimeIdeal]:
    """Kummer-Dedekind factorisation of ell*o_K."""
    cache = _registry(K)
    if ell in cache:
        return cache[ell]
    if K.index % ell == 0:
        raise IndexDivisor(ell)
    theta = K.gen()
    out = []
    for k, (g, mult) in enumerate(poly.factor_mod_p(K.f, ell)):
        pi = K.zero()
        power = K.one()
        for c in g:
            pi = pi + power * c
            power = power * theta
        P = FracIdeal.from_generators(K, [K.from_int(ell), pi])
        out.append(PrimeIdeal(K, ell, mult, len(g) - 1, pi, P, label=f"p{ell}_{k + 1}"))
    if sum(P.e * P.f for P in out) != K.n:
        raise IdealError("inconsistent decomposition")
    cache[ell] = out
    return out


def factor_ideal(a: FracIdeal) -> list[tuple[PrimeIdeal, int]]:
    """Prime factorisation of a nonzero fractional ideal."""
    N = a.norm()
    ells = set(factorint(N.numerator)) | set(factorint(N.denominator)) | set(factorint(a.den))
    ells.discard(1)
    out = []
    for ell in sorted(ells):
        for P in decompose_prime(a.K, ell):
            v = valuation(a, P)
            if v:
                out.append((P, v))
    return out


def primes_up_to(K: NumberField, bound: int, skip_index_divisors: bool = True):
    """All primes of o_K with norm <= bound (sorted by norm, then label)."""
    from sympy import primerange

    out = []
    for ell in primerange(2, bound + 1):
        try:
            ps = decompose_prime(K, ell)
        except IndexDivisor:
            if skip_index_divisors:
                continue
            raise
        out.extend(P for P in ps if P.norm() <= bound)
    out.sort(key=lambda P: (P.norm(), P.p, P.ideal.key()))
    return out


# -- CRT, weak approximation, coprime representatives -----------------------

def idempotents(ideals: list[FracIdeal]) -> list[FieldElement]:
    """e_i = 1 mod I_i and e_i = 0 mod I_j (j != i) for coprime integral ideals."""
    K = ideals[0].K
    out = []
    for i, I in enumerate(ideals):
        J = FracIdeal.unit(K)
        for j, Ij in enumerate(ideals):
            if j != i:
                J = J * Ij
        A = linalg.hconcat(I.hnf, J.hnf)
        y = linalg.solve_integer(A, [1] + [0] * (K.n - 1))
        if y is None:
            raise linalg.NotCoprimeError("moduli are not coprime")
        v = linalg.matvec(J.hnf, y[K.n:])
        out.append(FieldElement(K, v, 1))
    return out


def crt(residues: list[tuple[FieldElement, FracIdeal]]) -> FieldElement:
    """Integral x with x = r_i mod I_i for pairwise coprime integral ideals."""
    if not residues:
        raise ValueError("empty CRT system")
    K = residues[0][1].K
    ideals = [I for _, I in residues]
    es = idempotents(ideals)
    x = K.zero()
    M = FracIdeal.unit(K)
    for (r, _), e in zip(residues, es):
        x = x + r * e
    for I in ideals:
        M = M * I
    if x.is_integral():
        x = M.reduce(x)
    return x


def crt_solve(residues):
    """Dispatch: integer moduli go to the integer CRT, ideals to the ideal CRT."""
    if all(isinstance(m, int) for _, m in residues):
        return linalg.crt_solve(residues)[0]
    return crt(residues)


def uniformizer(P: PrimeIdeal) -> FieldElement:
    for b in P.ideal.basis():
        if P.valuation_elt(b) == 1:
            return b
    return P.pi  # unreachable for a genuine prime


def weak_approx(S: list[PrimeIdeal], e: list[int]) -> FieldElement:
    """a in K with ord_P(a) = e_P on S and ord_Q(a) >= 0 elsewhere."""
    if len(set(S)) != len(S):
        raise ValueError("primes must be distinct")
    if not S:
        raise ValueError("weak approximation needs at least one prime")
    K = S[0].K
    target = dict(zip(S, e))
    ells = sorted({P.p for P in S})
    # rational denominator supported on the residue characteristics of S
    k_ell = {}
    for ell in ells:
        need = [(-target[P] + P.e - 1) // P.e for P in S if P.p == ell and target[P] < 0]
        k_ell[ell] = max(need, default=0)
    D = 1
    for ell, k in k_ell.items():
        D *= ell ** k
    residues = []
    for P in S:
        t = target[P] + P.e * k_ell[P.p]
        pi = uniformizer(P)
        residues.append((pi ** t, P.ideal ** (t + 1)))
    for ell in ells:
        if k_ell[ell] == 0:
            continue
        for Q in decompose_prime(K, ell):
            if Q not in target:
                residues.append((K.zero(), Q.ideal ** (Q.e * k_ell[ell])))
    b = crt(residues)
    return b * Fraction(1, D)


def coprime_representative(a: FracIdeal, m_fin: FracIdeal, search_box: int = 2):
    """(a', gamma) with a' = gamma*a integral and coprime to the integral ideal m_fin.

    Small combinations of an LLL-reduced basis of a^{-1} are tried in order of
    the resulting norm; weak approximation is the fallback.
    """
    K = a.K
    unit = FracIdeal.unit(K)
    if a.is_integral() and (a + m_fin) == unit:
        return a, K.one()
    red = a.inverse().reduced_basis
    Na = a.norm()
    cands = []
    seen = set()
    for coeffs in itertools.product(range(-search_box, search_box + 1), repeat=K.n):
        if not any(coeffs):
            continue
        # g and -g give the same ideal
        first = next(c for c in coeffs if c)
        if first < 0:
            continue
        g = K.zero()
        for c, b in zip(coeffs, red):
            if c:
                g = g + b * c
        if g.is_zero() or g in seen:
            continue
        seen.add(g)
        cands.append((Na * abs(g.norm()), coeffs, g))
    cands.sort(key=lambda t: (t[0], t[1]))
    for N, _, g in cands:
        cand = a * g
        if (cand + m_fin) == unit:
            return cand, g
    support = {P for P, _ in factor_ideal(a)} | {P for P, _ in factor_ideal(m_fin)}
    S = sorted(support, key=lambda P: (P.p, P.ideal.key()))
    g = weak_approx(S, [-valuation(a, P) for P in S])
    return a * g, g


@dataclass
class Modulus:
    """Finite part (integral ideal) times a set of real places (indices)."""

    finite: FracIdeal
    infinite: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.finite.is_integral():
            raise IdealError("finite part of a modulus must be integral")
        if any(k < 0 or k >= self.finite.K.r1 for k in self.infinite):
            raise IdealError("infinite part must consist of real places")
        self.infinite = tuple(sorted(set(self.infinite)))

    def to_json(self):
        return {"finite": self.finite.to_json(), "infinite": list(self.infinite)}
