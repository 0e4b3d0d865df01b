"""Orders, number rings R = o[1/eps], residue unit groups and Pic(R)."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import factorint

from . import abgroup, linalg
from .abgroup import FinAbGroup, GroupError
from .classgroup import ClassGroup, TClassGroup, t_units, tclassgroup
from .field import FieldElement, NumberField
from .ideal import (FracIdeal, PrimeIdeal, decompose_prime, factor_ideal, valuation,
                    weak_approx, crt)

log = logging.getLogger(__name__)

RESIDUE_BOUND = 10 ** 6


class ResidueRingTooLarge(RuntimeError):
    pass


class NotCoprime(ValueError):
    pass


class RingError(ValueError):
    pass


# -- orders ------------------------------------------------------------------

class Order:
    """A full-rank subring of o_K given by integer columns over the integral basis."""

    def __init__(self, K: NumberField, basis_cols):
        self.K = K
        n = K.n
        B = linalg.hnf_basis(linalg.from_columns([list(c) for c in basis_cols], n))
        if not B or len(B[0]) != n:
            raise RingError("order basis does not have full rank")
        self.basis = B
        self.index = abs(linalg.det(B))
        one = K.one()
        if not self.contains(one):
            raise RingError("order does not contain 1")
        els = self.elements_basis()
        for x in els:
            for y in els:
                if not self.contains(x * y):
                    raise RingError("order basis is not closed under multiplication")

    @classmethod
    def maximal(cls, K):
        return cls(K, linalg.columns(linalg.identity(K.n)))

    @classmethod
    def from_elements(cls, K, elements):
        cols = []
        for x in elements:
            if not x.is_integral():
                raise RingError("order generators must be integral")
            cols.append(list(x.num))
        return cls(K, cols)

    def elements_basis(self) -> list[FieldElement]:
        return [FieldElement(self.K, c, 1) for c in linalg.columns(self.basis)]

    def contains(self, x: FieldElement) -> bool:
        if not x.is_integral():
            return False
        n = self.K.n
        v = list(x.num)
        for i in range(n - 1, -1, -1):
            q, r = divmod(v[i], self.basis[i][i])
            if r:
                return False
            for t in range(n):
                v[t] -= q * self.basis[t][i]
        return True

    def is_maximal(self) -> bool:
        return self.index == 1

    def conductor(self) -> FracIdeal:
        return conductor_of_order(self)


def conductor_of_order(o: Order) -> FracIdeal:
    """Largest o_K-ideal contained in o: {x in o_K : x*w_j in o for all j}."""
    K = o.K
    n = K.n
    if o.index == 1:
        return FracIdeal.unit(K)
    Binv = linalg.inverse_rational(o.basis)
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for j in range(n):
        # coordinates of x*w_j are M_j x where M_j is multiplication by w_j
        M = K.omega(j).mult_matrix()
        BM = [[sum(Binv[i][t] * M[t][s] for t in range(n)) for s in range(n)] for i in range(n)]
        rows.extend(BM)
    cols = linalg.dual_lattice(rows)
    d = linalg.common_denominator(cols)
    if d != 1:
        raise RingError("conductor lattice is not integral")
    icols = [[int(x) for x in row] for row in linalg.transpose(cols)]
    return FracIdeal.from_lattice(K, icols, 1)


# -- residue unit groups -----------------------------------------------------

def reduce_mod(x: FieldElement, m: FracIdeal) -> FieldElement:
    return m.reduce(x)


def _powmod(x, e, m):
    result = m.reduce(x.K.one())
    base = m.reduce(x)
    while e:
        if e & 1:
            result = m.reduce(result * base)
        base = m.reduce(base * base)
        e >>= 1
    return result


def _primitive_root(P: PrimeIdeal) -> FieldElement:
    K = P.K
    q = P.norm()
    order = q - 1
    qs = list(factorint(order)) if order > 1 else []
    rng = range(0, P.p)
    for coeffs in itertools.product(rng, repeat=K.n):
        x = FieldElement(K, list(reversed(coeffs)), 1)
        x = P.ideal.reduce(x)
        if P.ideal.contains(x):
            continue
        if all(_powmod(x, order // r, P.ideal) != P.ideal.reduce(K.one()) for r in qs):
            return x
    raise RingError("no primitive root found")


@dataclass
class ResidueUnitGroup:
    """(o_K/m)^* with dlog on integral elements coprime to m."""

    m: FracIdeal
    group: FinAbGroup
    local: list = field(default_factory=list)   # (P, k, P^k, local group)

    def dlog(self, x: FieldElement) -> list[int]:
        return self.group.dlog(x)

    def order(self) -> int:
        return self.group.order()

    def dlog_element(self, x: FieldElement) -> list[int]:
        """dlog of any x in K with valuation 0 at the primes dividing m."""
        return self.group.dlog(x)


def split_coprime(x: FieldElement, m: FracIdeal, primes_of_m):
    """(a, b) integral, coprime to m, with x = a/b (x must be a unit at m)."""
    K = x.K
    for P in primes_of_m:
        if valuation(x, P) != 0:
            raise NotCoprime("element is not a unit at the modulus")
    d = x.den
    Nm = m.norm().numerator
    if gcd(d, Nm) == 1:
        return FieldElement(K, x.num, 1), K.from_int(d)
    # denominators meet the modulus characteristics: weak approximation
    S = {}
    for P, e in factor_ideal(FracIdeal.principal(x)):
        if e < 0:
            S[P] = -e
    for P in primes_of_m:
        S.setdefault(P, 0)
    Ps = sorted(S, key=lambda P: (P.p, P.ideal.key()))
    b = weak_approx(Ps, [S[P] for P in Ps])
    a = x * b
    assert a.is_integral() and b.is_integral()
    return a, b


def residue_unit_group(m: FracIdeal, limit: int = RESIDUE_BOUND) -> ResidueUnitGroup:
    """(o_K/m)^* assembled by CRT over the prime-power factors of m."""
    K = m.K
    if not m.is_integral():
        raise RingError("modulus must be integral")
    facs = factor_ideal(m)
    if m.norm() == 1:
        return ResidueUnitGroup(m, FinAbGroup([], [], lambda x: []), [])
    local = []
    parts = []
    for P, k in facs:
        Pk = P.ideal ** k
        size = P.norm() ** (k - 1) * (P.norm() - 1)
        if size > limit:
            raise ResidueRingTooLarge(f"|(o_K/P^k)^*| = {size} exceeds {limit}")
        gens = [_primitive_root(P)]
        for i in range(1, k):
            for b in (P.ideal ** i).basis():
                gens.append(Pk.reduce(K.one() + b))

        def mul(x, y, Pk=Pk):
            return Pk.reduce(x * y)

        G = abgroup.blackbox_group(gens, mul, Pk.reduce(K.one()), key=lambda x: x.num,
                                   canon=lambda x, Pk=Pk: Pk.reduce(x), limit=limit,
                                   compose=lambda terms, Pk=Pk: _compose_mod(terms, Pk))
        local.append((P, k, Pk, G))
        parts.append(Pk)
    # CRT lift of local generators: g mod P^k, 1 mod the other factors
    injections = []
    for i, (_, _, Pk, _) in enumerate(local):
        def inj(g, i=i):
            res = [(g if j == i else K.one(), Q) for j, (_, _, Q, _) in enumerate(local)]
            return m.reduce(crt(res)) if len(res) > 1 else m.reduce(g)
        injections.append(inj)

    def split(x):
        if not x.is_integral():
            raise NotCoprime("residue dlog needs an integral element")
        return [Q.reduce(x) for _, _, Q, _ in local]

    def compose(terms):
        return _compose_mod(terms, m)

    G = abgroup.direct_sum([g for *_, g in local], injections, split, compose)
    primes = [P for P, _ in facs]
    integral_dlog = G._dlog

    def dlog(x):
        # any element that is a unit at the primes of m
        if x.is_integral():
            return integral_dlog(x)
        num, den = split_coprime(x, m, primes)
        return [s - t for s, t in zip(integral_dlog(num), integral_dlog(den))]

    G._dlog = dlog
    return ResidueUnitGroup(m, G, local)


def _compose_mod(terms, m: FracIdeal):
    K = m.K
    x = m.reduce(K.one())
    for g, e in terms:
        if isinstance(g, tuple):
            g = _compose_mod(g, m)
        if e:
            x = m.reduce(x * _powmod(g, e % _exp_bound(m), m))
    return x


def _exp_bound(m: FracIdeal) -> int:
    # exponent of (o_K/m)^* divides |(o_K/m)^*| which divides N(m) * prod (N(P)-1)
    N = m.norm().numerator
    out = N
    for P, _ in factor_ideal(m):
        out *= P.norm() - 1
    return out


def order_residues(o: Order, m: FracIdeal, limit: int = RESIDUE_BOUND):
    """Representatives of o/m (m an o_K-ideal contained in o)."""
    K = o.K
    n = K.n
    Binv = linalg.inverse_rational(o.basis)
    rel = linalg.matmul(Binv, m.hnf)
    if any(Fraction(x).denominator != 1 for row in rel for x in row):
        raise RingError("ideal is not contained in the order")
    rel = [[int(x) for x in row] for row in rel]
    D, U, V = linalg.snf(rel)
    diag = linalg.diagonal(D)
    size = 1
    for d in diag:
        size *= d
    if size > limit:
        raise ResidueRingTooLarge(f"|o/m| = {size} exceeds {limit}")
    Uinv = linalg.inverse_rational(U)
    gens = []
    for i in range(n):
        col = [int(Uinv[r][i]) for r in range(n)]
        gens.append(FieldElement(K, linalg.matvec(o.basis, col), 1))
    for coeffs in itertools.product(*[range(d) for d in diag]):
        x = K.zero()
        for c, g in zip(coeffs, gens):
            if c:
                x = x + g * c
        yield m.reduce(x)


def suborder_unit_subgroup(o: Order, res: ResidueUnitGroup, limit: int = RESIDUE_BOUND):
    """Subgroup matrix of the image of (o/f_cond)^* in (o_K/f_cond)^*."""
    m = res.m
    primes = [P for P, _, _, _ in res.local]
    vecs = []
    for x in order_residues(o, m, limit):
        if any(P.ideal.contains(x) for P in primes):
            continue
        vecs.append(res.dlog(x))
    G = res.group
    if G.rank == 0:
        return [], []
    # keep a small generating set: HNF of all the vectors with D_G
    M = G.subgroup_matrix(vecs)
    return M, vecs


# -- number rings --------------------------------------------------------------

class NumberRing:
    """R = o[1/eps] for an order o and an element eps of o (or a rational integer)."""

    def __init__(self, order: Order, eps: FieldElement | int = 1, name: str = "R"):
        K = order.K
        self.K = K
        self.order = order
        self.name = name
        if not isinstance(eps, FieldElement):
            eps = K.from_int(eps)
        if eps.is_zero():
            raise RingError("eps must be nonzero")
        if not order.contains(eps):
            raise RingError("eps must lie in the order")
        self.eps = eps
        self.inverted_primes: list[PrimeIdeal] = [P for P, e in factor_ideal(FracIdeal.principal(eps)) if e > 0]
        self.inverted_primes.sort(key=lambda P: (P.p, P.ideal.key()))
        self.f_cond = conductor_of_order(order)
        self.m_fin = FracIdeal.unit(K)
        for P in self.inverted_primes:
            self.m_fin = self.m_fin * P.ideal
        if not self.f_cond.is_coprime(self.m_fin):
            raise RingError("conductor of the order must be prime to the primes inverted")
        self.modulus = self.f_cond * self.m_fin
        self.f_primes = [P for P, _ in factor_ideal(self.f_cond)] if self.f_cond.norm() != 1 else []

    def T_chars(self) -> set[int]:
        return {P.p for P in self.inverted_primes}

    def is_coprime_to_modulus(self, a: FracIdeal) -> bool:
        return a.is_integral() and a.is_coprime(self.modulus)

    def describe(self):
        return {"index": self.order.index, "T": [P.to_json() for P in self.inverted_primes],
                "conductor": self.f_cond.to_json(), "modulus": self.modulus.to_json()}


@dataclass
class Picard:
    R: NumberRing
    group: FinAbGroup
    tc: TClassGroup
    A: FinAbGroup
    res: ResidueUnitGroup
    units: list

    @property
    def invariants(self):
        return self.group.invariants

    def dlog(self, a) -> list[int]:
        return picard_dlog(self, a)

    def to_json(self):
        return {"invariants": list(self.invariants),
                "generators": [_ideal_json(g) for g in self.group.gens],
                "modulus": self.R.modulus.to_json()}


def _ideal_json(g):
    if isinstance(g, PrimeIdeal):
        return g.ideal.to_json() | {"prime": g.to_json()}
    if isinstance(g, FracIdeal):
        return g.to_json()
    return repr(g)


def _strip_T(I: FracIdeal, T) -> FracIdeal:
    for P in T:
        v = valuation(I, P)
        if v:
            I = I * P.ideal ** (-v)
    return I


def picard_group(R: NumberRing, cl: ClassGroup, candidate_bound: int = 200) -> Picard:
    """Pic(R) from 1 -> A -> Pic(R) -> Cl(o_{K,T}) -> 1.

    A = ((o_K/f_cond)^*/(o/f_cond)^*) / image of the T-units.
    """
    K = R.K
    fprimes = {P.ideal.key() for P in R.f_primes}

    def divides_modulus(P):
        return P.ideal.key() in fprimes

    tc = tclassgroup(cl, R.inverted_primes, avoid=divides_modulus, candidate_bound=candidate_bound)
    res = residue_unit_group(R.f_cond)
    units = t_units(cl, R.inverted_primes)
    G = res.group
    if G.rank:
        sub, _ = suborder_unit_subgroup(R.order, res)
        uvecs = [res.dlog_element(u) for u in units]
        cols = (linalg.columns(sub) if sub else []) + uvecs
        A = G.quotient(G.subgroup_matrix(cols), compose=lambda terms: _compose_mod(terms, R.f_cond))
    else:
        A = G
    C = tc.group

    def a_dlog(x: FieldElement):
        return A.dlog(x) if A.rank else []

    lifts = [tc.gen_ideal(i) for i in range(C.rank)]
    rels = []
    for i, d in enumerate(C.invariants):
        v, g, _ = tc.dlog(lifts[i] ** d)
        if any(v):
            raise GroupError("lifted relation does not land in A")
        rels.append(a_dlog(g))

    def raw_dlog(a):
        if isinstance(a, PrimeIdeal):
            a = a.ideal
        if not a.is_integral() or not a.is_coprime(R.f_cond):
            raise NotCoprime("ideal is not coprime to the conductor")
        v, g, _ = tc.dlog(a)
        return a_dlog(g) + list(v)

    def inject(x):
        return _strip_T(FracIdeal.principal(x), R.inverted_primes)

    B = abgroup.extension_assemble(A, C, inject, lifts, rels, raw_dlog)
    # prefer the T-class generators, then small primes prime to the modulus
    if B.rank:
        cands = [tc.group.gens[i] for i in range(C.rank)]
        avoid_keys = {P.ideal.key() for P in R.inverted_primes} | fprimes
        from .classgroup import _candidate_primes
        cands += _candidate_primes(K, candidate_bound, lambda P: P.ideal.key() in avoid_keys)
        try:
            B2 = B.with_generators(cands, [f"P{P.p}" for P in cands])
            B2.history = B.history
            B = B2
        except GroupError:
            log.info("keeping SNF generators for Pic(R)")
    return Picard(R, B, tc, A, res, units)


def picard_dlog(pic: Picard, a) -> list[int]:
    R = pic.R
    if isinstance(a, PrimeIdeal):
        a = a.ideal
    if not R.is_coprime_to_modulus(a):
        raise NotCoprime("ideal must be integral and coprime to the modulus")
    return pic.group.dlog(a)


def verify_order_ring_surjection(R: NumberRing, cl: ClassGroup, pic: Picard | None = None):
    """Pic(o) -> Pic(R) is onto with kernel generated by the classes of T."""
    pic = pic or picard_group(R, cl)
    R0 = NumberRing(R.order, 1)
    avoid = {P.ideal.key() for P in R.inverted_primes}
    pic0 = picard_group(R0, cl)
    P0 = pic0.group
    # Pic(o) generators avoiding T so that Pic(R)'s dlog applies
    if P0.rank:
        from .classgroup import _candidate_primes
        fkeys = {P.ideal.key() for P in R.f_primes}
        cands = _candidate_primes(R.K, 200, lambda P: P.ideal.key() in avoid | fkeys)
        P0 = P0.with_generators(cands, [f"P{P.p}" for P in cands])
    images = [pic.group.dlog(g.ideal if isinstance(g, PrimeIdeal) else g) for g in P0.gens]
    tvecs = [P0.dlog(P.ideal) for P in R.inverted_primes] if P0.rank else []
    # |Pic(o) / <classes of T>| is the index of the subgroup they span
    quotient_order = P0.index(P0.subgroup_matrix(tvecs)) if P0.rank else 1
    image_index = pic.group.index(pic.group.subgroup_matrix(images)) if pic.group.rank else 1
    # T classes must die in Pic(R)
    t_die = True
    for x in tvecs:
        img = [0] * pic.group.rank
        for g, e in zip(images, x):
            img = [s + e * t for s, t in zip(img, g)]
        if pic.group.rank and not pic.group.is_zero(img):
            t_die = False
    lines = [
        ("surjective", image_index == 1),
        ("T-classes map to zero", t_die),
        ("|Pic(o)/<T>| = |Pic(R)|", quotient_order == pic.group.order()),
    ]
    return {
        "pic_o": P0.invariants,
        "pic_R": pic.group.invariants,
        "kernel_generators": [P.to_json() for P in R.inverted_primes],
        "checks": [{"check": name, "result": "PASS" if ok else "FAIL"} for name, ok in lines],
        "ok": all(ok for _, ok in lines),
    }
