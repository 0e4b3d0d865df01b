"""Ray class groups, the congruence subgroup of a number ring, split primes."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from . import abgroup, linalg, poly
from .abgroup import FinAbGroup, GroupError
from .classgroup import ClassGroup, _candidate_primes
from .field import FieldElement
from .ideal import FracIdeal, IndexDivisor, Modulus, PrimeIdeal, coprime_representative, decompose_prime
from .picard import NotCoprime, Picard, residue_unit_group

log = logging.getLogger(__name__)


class RamifiedOrExcluded(ValueError):
    def __init__(self, ell, why=""):
        super().__init__(f"{ell} is excluded from the split criterion{': ' + why if why else ''}")
        self.ell = ell


@dataclass
class RayClassGroup:
    modulus: Modulus
    group: FinAbGroup
    raw_gens: list          # ideals coprime to the modulus
    res_order: int
    unit_image_order: int

    @property
    def invariants(self):
        return self.group.invariants

    def dlog(self, a):
        if isinstance(a, PrimeIdeal):
            a = a.ideal
        return self.group.dlog(a)

    def order(self):
        return self.group.order()


def _sign_vector(x: FieldElement, places):
    return [0 if x.K.real_sign(x, k) > 0 else 1 for k in places]


def _sign_generators(m_fin: FracIdeal, places):
    """Elements = 1 mod m_fin with sign -1 exactly at one place of ``places``."""
    K = m_fin.K
    N = int(m_fin.min_integer())
    out = []
    for target in range(len(places)):
        want = [1 if j == target else 0 for j in range(len(places))]
        found = None
        for r in range(1, 60):
            for coeffs in itertools.product(range(-r, r + 1), repeat=K.n):
                if max(abs(c) for c in coeffs) != r:
                    continue
                s = K.one() + FieldElement(K, coeffs, 1) * N
                if s.is_zero():
                    continue
                try:
                    if _sign_vector(s, places) == want:
                        found = s
                        break
                except Exception:
                    continue
            if found is not None:
                break
        if found is None:
            raise GroupError("no element with the requested sign pattern found")
        out.append(found)
    return out


def ray_class_group(cl: ClassGroup, modulus: Modulus, candidate_bound: int = 300,
                    rebase: bool = True) -> RayClassGroup:
    """Cl^m as an extension of Cl_K by ((o_K/m_fin)^* x signs) / image of units."""
    K = cl.K
    m_fin = modulus.finite
    places = list(modulus.infinite)
    res = residue_unit_group(m_fin)
    primes_m = [P for P, *_ in res.local]
    signs = _sign_generators(m_fin, places) if places else []

    # residue part with signs: objects are field elements that are units at m_fin
    k_res = res.group.rank
    raw_res_gens = list(res.group.gens) + signs
    diag = list(res.group.invariants) + [2] * len(places)
    R0 = [[diag[i] if i == j else 0 for j in range(len(diag))] for i in range(len(diag))]

    def rs_dlog(x):
        return list(res.group.dlog(x)) + (_sign_vector(x, places) if places else [])

    def compose(terms):
        x = K.one()
        for g, e in terms:
            if isinstance(g, tuple):
                g = compose(g)
            if e:
                x = x * g ** e
        # reducing mod m_fin would lose the signs
        return x if places else m_fin.reduce(x)

    units = cl.units()
    RS = (abgroup.from_presentation(raw_res_gens, R0, rs_dlog, compose) if diag
          else FinAbGroup([], [], lambda x: []))
    if RS.rank:
        uimg = [RS.dlog(u) for u in units]
        A = RS.quotient(RS.subgroup_matrix(uimg), compose)
        unit_image = RS.order() // A.order()
    else:
        A = RS
        unit_image = 1

    # coprime lifts b'_i = g_i * b_i of the class group generators
    lifts, gs = [], []
    for i in range(len(cl.invariants)):
        b = cl.gen_ideal(i)
        bp, g = coprime_representative(b, m_fin)
        lifts.append(bp)
        gs.append(g)
    rels = []
    for i, d in enumerate(cl.invariants):
        gamma = gs[i] ** d * cl.witnesses[i]
        rels.append(A.dlog(gamma) if A.rank else [])

    def raw_dlog(a):
        if not a.is_integral() or not a.is_coprime(m_fin):
            raise NotCoprime("ideal is not coprime to the modulus")
        w, gamma = cl.dlog(a)
        for i, e in enumerate(w):
            if e:
                gamma = gamma * gs[i] ** (-e)
        return (A.dlog(gamma) if A.rank else []) + list(w)

    def inject(x):
        return FracIdeal.principal(x)

    C = FinAbGroup(cl.invariants, lifts, None)
    G = abgroup.extension_assemble(A, C, inject, lifts, rels, raw_dlog)
    raw_gens = [FracIdeal.principal(x) for x in raw_res_gens] + lifts
    if rebase and G.rank:
        mkeys = {P.ideal.key() for P in primes_m}
        cands = _candidate_primes(K, candidate_bound, lambda P: P.ideal.key() in mkeys)
        try:
            G2 = G.with_generators([P.ideal for P in cands], [f"p{P.p}" for P in cands])
            G2.history = G.history
            G = G2
        except GroupError:
            log.info("ray class group keeps composite generators")
    return RayClassGroup(modulus, G, raw_gens, RS.order(), unit_image)


@dataclass
class CongruenceSubgroup:
    ray: RayClassGroup
    subgroup: list
    index: int

    def to_json(self):
        return {"modulus": self.ray.modulus.to_json(),
                "ray_invariants": list(self.ray.invariants),
                "M_R": self.subgroup, "index": self.index}


def congruence_subgroup(pic: Picard, cl: ClassGroup, ray: RayClassGroup | None = None) -> CongruenceSubgroup:
    """Congruence subgroup: kernel of Cl^m -> Pic(R) for m = f_cond * prod_{p in T} p."""
    R = pic.R
    if ray is None:
        ray = ray_class_group(cl, Modulus(R.modulus))
    Gr = ray.group
    Gp = pic.group
    raw = ray.raw_gens
    k = len(raw)
    if Gr.rank == 0:
        return CongruenceSubgroup(ray, [], 1)
    Pmat = linalg.from_columns([Gr.dlog(a) for a in raw], Gr.rank)
    if Gp.rank == 0:
        sub = Gr.subgroup_matrix(linalg.columns(linalg.identity(Gr.rank)))
        return CongruenceSubgroup(ray, sub, Gr.index(sub))
    Phi = linalg.from_columns([pic.group.dlog(a) for a in raw], Gp.rank)
    ker = linalg.kernel(linalg.hconcat(Phi, Gp.D()))
    xs = [[ker[i][j] for i in range(k)] for j in range(len(ker[0]))] if ker and ker[0] else []
    vecs = [linalg.matvec(Pmat, x) for x in xs]
    sub = Gr.subgroup_matrix(vecs)
    return CongruenceSubgroup(ray, sub, Gr.index(sub))


def split_exclusions(pic: Picard) -> set[int]:
    R = pic.R
    K = R.K
    from sympy import factorint

    bad = set(factorint(abs(K.disc))) | set(factorint(R.order.index)) | R.T_chars()
    bad |= set(factorint(R.modulus.norm().numerator))
    bad.discard(1)
    return bad


def splits_completely(pic: Picard, ell: int, degree_one_exists: bool = False) -> bool:
    """Does ell split completely in the ring class field of R?

    Default: every prime above ell has degree 1 and trivial class in Pic(R).
    With degree_one_exists: some degree-1 prime above ell has trivial class.
    """
    if ell in split_exclusions(pic):
        raise RamifiedOrExcluded(ell, "ramified, or divides the modulus or order index")
    K = pic.R.K
    try:
        ps = decompose_prime(K, ell)
    except IndexDivisor as e:
        raise RamifiedOrExcluded(ell, "index divisor") from e
    if degree_one_exists:
        return any(P.f == 1 and not any(pic.dlog(P)) for P in ps)
    if any(P.f != 1 for P in ps):
        return False
    return all(not any(pic.dlog(P)) for P in ps)


def split_scan(pic: Picard, bound: int, exclude=(), degree_one_exists: bool = False):
    """Rows (ell, value) for primes below bound outside the exclusions."""
    from sympy import primerange

    skip = split_exclusions(pic) | set(exclude)
    rows = []
    for ell in primerange(2, bound):
        if ell in skip:
            continue
        rows.append((ell, splits_completely(pic, ell, degree_one_exists)))
    return rows


def verify_splitting(pic: Picard, g, bound: int, exclude=()):
    """Compare the Picard criterion with complete splitting of g at ell.

    Primes dividing disc(g) are decided by counting the roots of g in Z_ell.
    """
    D = poly.discriminant(g)
    rows = []
    for ell, crit in split_scan(pic, bound, exclude):
        if D % ell:
            ps, how = poly.poly_split_test(g, ell), "mod-ell"
        else:
            # ell divides disc(g): count the roots of g in Z_ell instead
            ps, how = poly.splits_completely_padic(g, ell), "ell-adic"
        rows.append({"ell": ell, "criterion": crit, "poly": ps, "test": how,
                     "status": "AGREE" if ps == crit else "DISAGREE"})
    return rows
