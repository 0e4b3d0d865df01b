"""Norm forms of a module basis and a bounded solver for +-l*a^m = f(x)."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import isqrt, lcm

import numpy as np

from . import linalg
from .field import FieldElement

log = logging.getLogger(__name__)


class NormFormError(ValueError):
    pass


# -- sparse multivariate polynomials: {exponent tuple: int} ------------------

def _padd(f, g):
    out = dict(f)
    for k, c in g.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _pmul(f, g):
    out: dict = {}
    for k1, c1 in f.items():
        for k2, c2 in g.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def leibniz_det(M, n):
    """Determinant of an n x n matrix whose entries are sparse polynomials."""
    total: dict = {}
    for perm in itertools.permutations(range(n)):
        term = None
        for i in range(n):
            e = M[i][perm[i]]
            if not e:
                term = {}
                break
            term = e if term is None else _pmul(term, e)
        if not term:
            continue
        if _perm_sign(perm) < 0:
            term = {k: -c for k, c in term.items()}
        total = _padd(total, term)
    return total


@dataclass
class NormForm:
    basis: list                      # FieldElements
    coeffs: dict                     # exponent tuple -> int
    names: list = field(default_factory=list)

    @property
    def n(self):
        return len(self.basis)

    def __call__(self, x) -> int:
        out = 0
        for k, c in self.coeffs.items():
            t = c
            for xi, e in zip(x, k):
                if e:
                    t *= xi ** e
            out += t
        return out

    def element(self, x) -> FieldElement:
        K = self.basis[0].K
        y = K.zero()
        for xi, a in zip(x, self.basis):
            if xi:
                y = y + a * xi
        return y

    def to_string(self) -> str:
        names = self.names or [f"x{i + 1}" for i in range(self.n)]
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(names, k) if e)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return {"variables": self.names,
                "terms": [[list(k), c] for k, c in sorted(self.coeffs.items(), reverse=True)]}


def expand_norm_form(basis, names=None) -> NormForm:
    """f(x_1..x_n) = N(x_1 a_1 + ... + x_n a_n), as det of sum x_i M(a_i)."""
    if not basis:
        raise NormFormError("empty basis")
    K = basis[0].K
    n = K.n
    if len(basis) != n:
        raise NormFormError(f"need {n} basis elements, got {len(basis)}")
    cols = [list(a.coords()) for a in basis]
    if linalg.det_rational(linalg.from_columns(cols, n)) == 0:
        raise NormFormError("basis is rank deficient")
    D = lcm(*[a.den for a in basis])
    mats = [[[c * (D // a.den) for c in row] for row in a.mult_matrix()] for a in basis]
    unit = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    M = []
    for r in range(n):
        row = []
        for c in range(n):
            ent = {}
            for i in range(n):
                if mats[i][r][c]:
                    ent[unit[i]] = mats[i][r][c]
            row.append(ent)
        M.append(row)
    det = leibniz_det(M, n)
    scale = D ** n
    out = {}
    for k, c in det.items():
        if c % scale:
            raise NormFormError("norm form has non-integral coefficients")
        out[k] = c // scale
    return NormForm(list(basis), out, list(names) if names else [])


# -- solver -------------------------------------------------------------------

@dataclass
class Solution:
    ell: int
    m: int
    sign: int
    x: tuple
    value: int

    def to_json(self):
        return {"ell": self.ell, "m": self.m, "sign": "+" if self.sign > 0 else "-",
                "tuple": list(self.x), "value": self.value}


def _definite(nf: NormForm) -> bool:
    K = nf.basis[0].K
    return K.r1 == 0


def _binary_solutions(nf: NormForm, t: int, radius: int):
    """All (x, y) with A x^2 + B x y + C y^2 = t, |x|, |y| <= radius."""
    A = nf.coeffs.get((2, 0), 0)
    B = nf.coeffs.get((1, 1), 0)
    C = nf.coeffs.get((0, 2), 0)
    if A == 0:
        raise NormFormError("leading coefficient vanishes")
    disc = B * B - 4 * A * C
    ybound = radius
    if disc < 0:
        # 4A t = (2Ax + By)^2 - disc y^2 bounds y
        ybound = min(radius, isqrt(4 * A * t // (-disc)) + 1) if A * t >= 0 else -1
    out = []
    for y in range(-ybound, ybound + 1):
        # (2Ax + By)^2 = 4A t + disc y^2
        s = 4 * A * t + disc * y * y
        if s < 0:
            continue
        r = isqrt(s)
        if r * r != s:
            continue
        for u in {r, -r}:
            num = u - B * y
            if num % (2 * A) == 0:
                x = num // (2 * A)
                if abs(x) <= radius:
                    out.append((x, y))
    return out


def _split_first(nf: NormForm):
    """Coefficients of f as a polynomial in the first variable."""
    by_deg: dict = {}
    for k, c in nf.coeffs.items():
        by_deg.setdefault(k[0], {})[k[1:]] = c
    return by_deg


def _eval_rest(poly, y):
    out = 0
    for k, c in poly.items():
        t = c
        for yi, e in zip(y, k):
            if e:
                t *= yi ** e
        out += t
    return out


def _general_solutions(nf: NormForm, targets, radius: int):
    by_deg = _split_first(nf)
    deg = max(by_deg)
    hits = {t: [] for t in targets}
    rng = range(-radius, radius + 1)
    for y in itertools.product(rng, repeat=nf.n - 1):
        c = [_eval_rest(by_deg.get(d, {}), y) for d in range(deg + 1)]
        if not any(c[1:]):
            for t in targets:
                if c[0] == t:
                    hits[t].extend((x,) + y for x in rng)
            continue
        top = max(d for d in range(deg + 1) if c[d])
        for t in targets:
            p = list(c)
            p[0] -= t
            cand = set()
            if top == 0:
                continue
            for z in np.roots([float(v) for v in reversed(p[:top + 1])]):
                if abs(z.imag) > 1e-4 * max(1.0, abs(z)):
                    continue
                base = int(round(z.real))
                cand.update((base - 1, base, base + 1))
            for x in sorted(cand):
                if abs(x) <= radius and sum(cd * x ** d for d, cd in enumerate(p)) == 0:
                    hits[t].append((x,) + y)
    return hits


def solve_norm_eq(nf: NormForm, ell: int, a: int, max_m: int, radius: int):
    """All x with |x_i| <= radius and f(x) = +-ell*a^m, 0 <= m <= max_m.

    Sorted by m, then sign, then lexicographically.  An empty answer only
    says that nothing was found inside the box.
    """
    if a and ell > 1 and a % ell == 0:
        raise NormFormError("ell must not divide a")
    signs = (1,) if _definite(nf) else (1, -1)
    targets = [(m, s, s * ell * a ** m) for m in range(max_m + 1) for s in signs]
    sols = []
    if nf.n == 2:
        for m, s, t in targets:
            for x in _binary_solutions(nf, t, radius):
                sols.append(Solution(ell, m, s, x, t))
    else:
        hits = _general_solutions(nf, sorted({t for *_, t in targets}), radius)
        for m, s, t in targets:
            for x in hits[t]:
                sols.append(Solution(ell, m, s, tuple(x), t))
    # every hit is re-checked against the field norm
    for sol in sols:
        if nf(sol.x) != sol.value or nf.element(sol.x).norm() != sol.value:
            raise NormFormError(f"solver produced a wrong solution {sol.x}")
    sols.sort(key=lambda s: (s.m, -s.sign, s.x))
    return sols


@dataclass
class CrossCheck:
    ell: int
    criterion: bool
    hit: Solution | None
    status: str

    def to_json(self):
        return {"ell": self.ell, "criterion": self.criterion,
                "solver": "HIT" if self.hit else "MISS",
                "solution": self.hit.to_json() if self.hit else None,
                "status": self.status}


def criterion_crosscheck(pic, nf: NormForm, ell: int, a: int, max_m: int, radius: int) -> CrossCheck:
    """Compare the degree-one split criterion with the bounded solver.

    CONSISTENT: both agree.  INCOMPLETE: the criterion holds but nothing
    was found in the box (not a refutation).  FAIL: the solver found a
    representation although the criterion says there is none.
    """
    from .ray import splits_completely

    if a % ell == 0:
        raise NormFormError("ell divides a")
    if pic.R.order.index % ell == 0:
        raise NormFormError("ell divides the index of the order")
    crit = splits_completely(pic, ell, degree_one_exists=True)
    sols = solve_norm_eq(nf, ell, a, max_m, radius)
    hit = sols[0] if sols else None
    if crit and hit:
        status = "CONSISTENT"
    elif crit:
        status = "INCOMPLETE"
    elif hit:
        status = "FAIL"
    else:
        status = "CONSISTENT"
    return CrossCheck(ell, crit, hit, status)
