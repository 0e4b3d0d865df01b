"""Class groups, principal ideal testing, T-class groups and T-units."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from sympy import factorint, primerange

from . import abgroup, lattice, linalg
from .abgroup import FinAbGroup
from .field import FieldElement, NumberField
from .ideal import (FracIdeal, IndexDivisor, PrimeIdeal, decompose_prime, factor_ideal,
                    prime_from_generators, valuation)

log = logging.getLogger(__name__)

DEFAULT_PIP_RADIUS = 8


class Inconclusive(RuntimeError):
    def __init__(self, bound):
        super().__init__(f"principal ideal search exhausted radius {bound}")
        self.bound = bound


class ClassGroupError(ValueError):
    pass


def is_imaginary_quadratic(K: NumberField) -> bool:
    return K.n == 2 and K.r1 == 0


def minkowski_bound(K: NumberField) -> float:
    n = K.n
    return math.factorial(n) / n ** n * (4 / math.pi) ** K.r2 * math.sqrt(abs(K.disc))


# -- principal ideal test ------------------------------------------------

def principal_ideal_test(a: FracIdeal, radius: float | None = None):
    """Generator of a if one is found; None only when provably non-principal.

    Short elements of the integral ideal den*a are enumerated under the T2
    form; an element whose norm equals the ideal norm generates it.  For
    imaginary quadratic fields T2 = 2N, so the search is complete.
    """
    K = a.K
    J = a.scaled_integral()
    N = J.norm()
    scale = Fraction(1, a.den)
    if N == 1:
        return K.from_int(scale)
    exact = is_imaginary_quadratic(K)
    if exact:
        bound = 2 * N
    else:
        r = DEFAULT_PIP_RADIUS if radius is None else radius
        bound = Fraction(r * K.n * float(N) ** (2 / K.n)).limit_denominator(1000)
    best = None
    for x, val in J.short_elements(bound):
        if abs(x.norm()) == N:
            key = (val, x.num)
            if best is None or key < best[0]:
                best = (key, x)
    if best is not None:
        return best[1] * scale
    if exact:
        return None
    raise Inconclusive(bound)


def roots_of_unity(K: NumberField):
    """(generator, order) of the torsion subgroup of K^*."""
    n = K.n
    best = (K.from_int(-1), 2)
    G = K.t2_gram
    for x, val in lattice.enumerate_short(G, Fraction(n) + Fraction(1, 10 ** 6)):
        z = FieldElement(K, x, 1)
        if abs(z.norm()) != 1:
            continue
        p = z
        for k in range(1, 4 * n * n + 3):
            if p == K.one():
                if k > best[1]:
                    best = (z, k)
                break
            p = p * z
    return best


# -- binary quadratic forms (negative discriminant) ------------------------

def form_reduce(f):
    a, b, c = f
    while True:
        if not (-a < b <= a):
            # b <- b + 2ka with b in (-a, a]
            k = (a - b) // (2 * a)
            b2 = b + 2 * k * a
            c = c + k * b + k * k * a
            b = b2
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return (a, b, c)


def form_compose(f1, f2):
    """Gaussian composition of primitive positive definite forms."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    D = b1 * b1 - 4 * a1 * c1
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = linalg.xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u, v = linalg.xgcd(s, d)
        x2, y2 = u, -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return form_reduce((a3, b3, c3))


def principal_form(D: int):
    k = D % 2
    return (1, k, (k - D) // 4)


def ideal_to_form(a: FracIdeal):
    """Reduced form of the class of a in an imaginary quadratic field."""
    K = a.K
    H = a.hnf  # [[h00, h01], [0, h11]] over the basis 1, w
    h00, h01, h11 = H[0][0], H[0][1], H[1][1]
    A = h00 // h11
    r = h01 // h11
    t = K.trace_basis(1)
    b = -(2 * r + t)
    D = K.disc
    c = (b * b - D) // (4 * A)
    return form_reduce((A, b, c))


def form_to_ideal(K: NumberField, f) -> FracIdeal:
    a, b, _ = f
    t = K.trace_basis(1)
    # (-b + sqrt(D))/2 = (-b - t)/2 + w
    return FracIdeal.from_lattice(K, [[a, 0], [(-b - t) // 2, 1]])


# -- class group data ------------------------------------------------------

@dataclass
class ClassGroup:
    """Cl_K on prime-ideal generators b_i with witnesses b_i^{d_i} = alpha_i o_K."""

    K: NumberField
    group: FinAbGroup
    witnesses: list
    torsion: tuple
    fundamental_units: list = field(default_factory=list)
    dlog_raw: Callable = None
    method: str = ""
    pip_radius: float = DEFAULT_PIP_RADIUS

    def __post_init__(self):
        self._cache = {}

    @property
    def generators(self) -> list[PrimeIdeal]:
        return self.group.gens

    @property
    def invariants(self):
        return self.group.invariants

    def gen_ideal(self, i: int) -> FracIdeal:
        return self.group.gens[i].ideal

    def dlog(self, I) -> tuple[list[int], FieldElement]:
        """(w, gamma) with I = gamma * prod b_i^{w_i}, 0 <= w_i < d_i."""
        if isinstance(I, PrimeIdeal):
            I = I.ideal
        k = I.key()
        if k in self._cache:
            return self._cache[k]
        w, g = self.dlog_raw(I)
        w2 = []
        for i, (x, d) in enumerate(zip(w, self.invariants)):
            q, r = divmod(x, d)
            if q:
                g = g * self.witnesses[i] ** q
            w2.append(r)
        self._cache[k] = (w2, g)
        return w2, g

    def units(self) -> list[FieldElement]:
        return [self.torsion[0]] + list(self.fundamental_units)

    def check_identity(self, I: FracIdeal, w, g) -> bool:
        J = FracIdeal.principal(g)
        for i, e in enumerate(w):
            if e:
                J = J * self.gen_ideal(i) ** e
        return J == I

    def to_json(self):
        return {"invariants": list(self.invariants),
                "generators": [P.to_json() for P in self.generators],
                "witnesses": [a.to_json() for a in self.witnesses]}


def _candidate_primes(K, bound, avoid=None):
    out = []
    for ell in primerange(2, bound + 1):
        try:
            ps = decompose_prime(K, ell)
        except IndexDivisor:
            continue
        for P in ps:
            if P.norm() <= bound and (avoid is None or not avoid(P)):
                out.append(P)
    out.sort(key=lambda P: (P.norm(), P.p))
    return out


def classgroup_imag_quadratic(K: NumberField, candidate_bound: int = 200) -> ClassGroup:
    """Cl_K for imaginary quadratic K via reduced binary quadratic forms."""
    if not is_imaginary_quadratic(K):
        raise ClassGroupError("field is not imaginary quadratic")
    D = K.disc
    one = principal_form(D)
    gen_bound = max(2, math.isqrt(abs(D) // 3) + 1)
    fb = _candidate_primes(K, gen_bound)
    forms = [ideal_to_form(P.ideal) for P in fb]

    def to_form(obj):
        if isinstance(obj, PrimeIdeal):
            obj = obj.ideal
        if isinstance(obj, FracIdeal):
            return ideal_to_form(obj.scaled_integral())
        return obj

    G = abgroup.blackbox_group(forms, form_compose, one)
    bb_dlog = G._dlog
    G._dlog = lambda obj: bb_dlog(to_form(obj))
    cands = _candidate_primes(K, max(candidate_bound, gen_bound))
    # generator choice is not canonical: odd primes by norm, primes above 2 last
    cands.sort(key=lambda P: (P.p == 2, P.norm(), P.p))
    G = G.with_generators(cands, [f"p{P.p}" for P in cands])
    witnesses = []
    for i, P in enumerate(G.gens):
        alpha = principal_ideal_test(P.ideal ** G.invariants[i])
        if alpha is None:
            raise ClassGroupError("generator power is not principal")
        witnesses.append(alpha)
    gen_powers = {}

    def dlog_raw(I):
        w = G.dlog(I)
        # I * prod b^{(-w) mod d} is principal
        J = I
        corr = K.one()
        for i, e in enumerate(w):
            if e:
                d = G.invariants[i]
                key = (i, d - e)
                if key not in gen_powers:
                    gen_powers[key] = G.gens[i].ideal ** (d - e)
                J = J * gen_powers[key]
                corr = corr * witnesses[i]
        x = principal_ideal_test(J)
        if x is None:
            raise ClassGroupError("form dlog inconsistent with ideal arithmetic")
        return w, x / corr

    return ClassGroup(K, G, witnesses, roots_of_unity(K), [], dlog_raw, method="forms")


# -- verified input for general fields -------------------------------------

def _reduce_and_factor(I: FracIdeal, known: dict, max_tries: int = 4000):
    """Find x in integral I with x I^{-1} supported on known primes.

    Returns (x, [(P, e), ...]) where x*I^{-1} = prod P^e.
    """
    K = I.K
    N = I.norm()
    known_chars = {P.p for P in known.values()}
    n = K.n
    base = Fraction(n * float(N) ** (2 / n)).limit_denominator(1000)
    tried = 0
    for mult in (1, 2, 4, 8, 16, 32, 64):
        cands = sorted(I.short_elements(base * mult), key=lambda t: (abs(t[0].norm()), t[1], t[0].num))
        for x, _ in cands:
            tried += 1
            if tried > max_tries:
                return None
            m = abs(x.norm()) / N
            if m.denominator != 1:
                continue
            m = int(m)
            if any(ell not in known_chars for ell in factorint(m)):
                continue
            J = FracIdeal.principal(x) * I.inverse()
            facs = factor_ideal(J) if m > 1 else []
            if all(P.ideal.key() in known for P, _ in facs):
                return x, [(known[P.ideal.key()], e) for P, e in facs]
    return None


def verify_classgroup_input(K: NumberField, data: dict, units: list | None = None,
                            pip_radius: float = DEFAULT_PIP_RADIUS) -> ClassGroup:
    """Check user-supplied Cl_K data by exact ideal arithmetic.

    ``data`` keys: invariants, generators [{p, pi}], witnesses [element],
    relations [{p, pi, vector, gamma}] covering every prime of norm up to
    the Minkowski bound.
    """
    inv = [int(d) for d in data.get("invariants", [])]
    gens = [prime_from_generators(K, int(g["p"]), _elt(K, g["pi"]), label=f"p{g['p']}")
            for g in data.get("generators", [])]
    wits = [_elt(K, w) for w in data.get("witnesses", [])]
    if not (len(inv) == len(gens) == len(wits)):
        raise ClassGroupError("generators, invariants and witnesses must have equal length")
    for i, (P, d, a) in enumerate(zip(gens, inv, wits)):
        if P.ideal ** d != FracIdeal.principal(a):
            raise ClassGroupError(f"witness {i + 1} fails: generator^{d} != alpha*o_K")
    known = {}
    relations = {}
    for i, P in enumerate(gens):
        known[P.ideal.key()] = P
        relations[P.ideal.key()] = ([int(j == i) for j in range(len(gens))], K.one())
    for rel in data.get("relations", []):
        P = prime_from_generators(K, int(rel["p"]), _elt(K, rel["pi"]), label=f"p{rel['p']}")
        v = [int(x) for x in rel["vector"]]
        g = _elt(K, rel["gamma"])
        J = FracIdeal.principal(g)
        for i, e in enumerate(v):
            if e:
                J = J * gens[i].ideal ** e
        if J != P.ideal:
            raise ClassGroupError(f"relation for prime above {rel['p']} fails: "
                                  f"p != gamma * prod b^v with v={v}")
        known[P.ideal.key()] = P
        relations[P.ideal.key()] = (v, g)
    MB = minkowski_bound(K)
    for ell in primerange(2, int(MB) + 1):
        for P in decompose_prime(K, ell):
            if P.norm() <= MB and P.ideal.key() not in relations:
                raise ClassGroupError(f"no relation supplied for a prime above {ell} "
                                      f"of norm {P.norm()} <= Minkowski bound {MB:.2f}")
    fu = []
    for u in units or []:
        u = _elt(K, u) if not isinstance(u, FieldElement) else u
        if abs(u.norm()) != 1 or not u.is_integral() or not u.inverse().is_integral():
            raise ClassGroupError(f"claimed unit {u} is not a unit")
        fu.append(u)
    rank = K.r1 + K.r2 - 1
    if len(fu) < rank:
        raise ClassGroupError(f"unit rank is {rank}: fundamental units must be supplied")

    def dlog_raw(I):
        I0 = I.scaled_integral()
        scale = Fraction(1, I.den)
        if I0.key() in relations:
            v, g = relations[I0.key()]
            return list(v), g * scale
        found = _reduce_and_factor(I0, known)
        if found is None:
            raise Inconclusive("class group reduction")
        x, facs = found
        # I0 = x * prod P^{-e} and P = g_P * prod b^{v_P}
        w = [0] * len(gens)
        gam = x
        for P, e in facs:
            v, g = relations[P.ideal.key()]
            gam = gam * g ** (-e)
            w = [a - e * b for a, b in zip(w, v)]
        return w, gam * scale

    G = FinAbGroup(inv, gens, None, [f"p{P.p}" for P in gens])
    cl = ClassGroup(K, G, wits, roots_of_unity(K), fu, dlog_raw, method="verified",
                    pip_radius=pip_radius)
    G._dlog = lambda obj: cl.dlog(obj)[0]
    return cl


def _elt(K: NumberField, spec) -> FieldElement:
    if isinstance(spec, FieldElement):
        return spec
    return K.from_fractions([Fraction(str(c)) for c in spec])


def trivial_or_quadratic(K: NumberField) -> ClassGroup:
    if is_imaginary_quadratic(K):
        return classgroup_imag_quadratic(K)
    raise ClassGroupError("class group of this field needs verified input")


# -- T-class groups ---------------------------------------------------------

@dataclass
class TClassGroup:
    cl: ClassGroup
    primes: list
    group: FinAbGroup
    coords: list       # Cl_K coordinates of the inverted primes
    cofactors: list    # p_j = cofactor_j * prod b^{coords_j}
    gen_data: list     # (w, gamma) of each generator c_i

    @property
    def invariants(self):
        return self.group.invariants

    def dlog(self, I) -> tuple[list[int], FieldElement, list[int]]:
        """(v, gamma, y) with I = gamma * prod c_i^{v_i} * prod_{p in T} p^{y_p}."""
        if isinstance(I, PrimeIdeal):
            I = I.ideal
        cl = self.cl
        w, g0 = cl.dlog(I)
        v = self.group.dlog(I)
        w2 = list(w)
        g = g0
        for i, e in enumerate(v):
            if e:
                wc, gc = self.gen_data[i]
                w2 = [a - e * b for a, b in zip(w2, wc)]
                g = g * gc ** (-e)
        k = len(cl.invariants)
        A = linalg.hconcat(cl.group.D(), linalg.from_columns(self.coords, k)) if self.coords else cl.group.D()
        if k == 0:
            y = [0] * len(self.primes)
        else:
            sol = linalg.solve_integer(A, w2)
            if sol is None:
                raise ClassGroupError("T-class dlog: residual class not in the T-span")
            y1, y2 = sol[:k], sol[k:]
            for i, e in enumerate(y1):
                if e:
                    g = g * cl.witnesses[i] ** e
            for j, e in enumerate(y2):
                if e:
                    g = g * self.cofactors[j] ** (-e)
            y = y2
        return v, g, list(y)

    def gen_ideal(self, i: int) -> FracIdeal:
        c = self.group.gens[i]
        return c.ideal if isinstance(c, PrimeIdeal) else c

    def check_identity(self, I, v, g, y) -> bool:
        J = FracIdeal.principal(g)
        for i, e in enumerate(v):
            if e:
                J = J * self.gen_ideal(i) ** e
        for P, e in zip(self.primes, y):
            if e:
                J = J * P.ideal ** e
        return J == I

    def to_json(self):
        return {"invariants": list(self.invariants),
                "generators": [self.gen_ideal(i).to_json() for i in range(len(self.invariants))],
                "T": [P.to_json() for P in self.primes]}


def tclassgroup(cl: ClassGroup, tprimes: list[PrimeIdeal], avoid=None,
                candidate_bound: int = 200) -> TClassGroup:
    """Cl(o_{K,T}) = Cl_K / <classes of T>, generators are primes outside avoid."""
    coords, cofactors = [], []
    for P in tprimes:
        w, g = cl.dlog(P.ideal)
        coords.append(w)
        cofactors.append(g)
    G = cl.group
    C = G.quotient(G.subgroup_matrix(coords)) if G.rank else G
    tset = {P.ideal.key() for P in tprimes}

    def bad(P):
        return P.ideal.key() in tset or (avoid is not None and avoid(P))

    if C.rank:
        # the class group's own generators first, then small primes
        cands = [P for P in cl.generators if not bad(P)]
        cands += _candidate_primes(cl.K, candidate_bound, bad)
        seen, uniq = set(), []
        for P in cands:
            if P.ideal.key() not in seen:
                seen.add(P.ideal.key())
                uniq.append(P)
        C = C.with_generators(uniq, [f"p{P.p}" for P in uniq])
    gen_data = [cl.dlog(c.ideal) for c in C.gens]
    return TClassGroup(cl, list(tprimes), C, coords, cofactors, gen_data)


def t_units(cl: ClassGroup, tprimes: list[PrimeIdeal]) -> list[FieldElement]:
    """Generators of the T-unit group modulo nothing: torsion, units, T-part."""
    out = cl.units()
    if not tprimes:
        return out
    coords, cofactors = [], []
    for P in tprimes:
        w, g = cl.dlog(P.ideal)
        coords.append(w)
        cofactors.append(g)
    k = len(cl.invariants)
    t = len(tprimes)
    if k:
        A = linalg.hconcat(linalg.from_columns(coords, k), cl.group.D())
        ker = linalg.kernel(A)
        xs = [[ker[i][j] for i in range(t)] for j in range(len(ker[0]))] if ker and ker[0] else []
        H = linalg.hnf_basis(linalg.from_columns(xs, t)) if xs else []
        xcols = linalg.columns(H) if H else []
    else:
        xcols = [[int(i == j) for i in range(t)] for j in range(t)]
    for x in xcols:
        u = cl.K.one()
        for j, e in enumerate(x):
            if e:
                u = u * cofactors[j] ** e
        if k:
            mixed = [sum(coords[j][i] * x[j] for j in range(t)) for i in range(k)]
            if any(a % d for a, d in zip(mixed, cl.invariants)):
                raise ClassGroupError("kernel vector not in the relation lattice")
            # prod b^{mixed} = prod alpha^{mixed/d}
            for i, (a, d) in enumerate(zip(mixed, cl.invariants)):
                if a:
                    u = u * cl.witnesses[i] ** (a // d)
        out.append(u)
    return out


def t_unit_support_ok(u: FieldElement, tprimes: list[PrimeIdeal]) -> bool:
    """valuation(u) = 0 at every prime outside T (checked on the support of N(u))."""
    N = u.norm()
    tk = {P.ideal.key() for P in tprimes}
    ells = set(factorint(N.numerator)) | set(factorint(N.denominator)) | set(factorint(u.den))
    for ell in ells:
        if ell == 1:
            continue
        for P in decompose_prime(u.K, ell):
            if P.ideal.key() not in tk and valuation(u, P) != 0:
                return False
    return True
