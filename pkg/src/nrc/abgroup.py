"""Finite abelian groups given by generators and an SNF relation matrix.

A group carries concrete generator objects together with a discrete-log
procedure.  Coordinates are reduced modulo the invariants, which are kept
in descending order (d_1, d_2, ...) with d_{i+1} | d_i, trivial factors
dropped.
"""

from __future__ import annotations

from math import gcd, lcm, prod
from typing import Callable, Sequence

from . import linalg


class GroupError(ValueError):
    pass


def product_compose(terms):
    """Default representative for a combination of generators: the term list."""
    terms = tuple((g, e) for g, e in terms if e)
    if len(terms) == 1 and terms[0][1] == 1:
        return terms[0][0]
    return terms


def snf_presentation(R, k: int):
    """Structure of Z^k / (column span of R).

    Returns (invariants, P, Q): invariants descending and > 1, P maps raw
    coordinates to invariant coordinates (w = P v mod d), column j of Q
    expresses the j-th new generator in the raw generators.
    """
    if k == 0:
        return [], [], []
    if not R or not R[0]:
        raise GroupError("relation matrix has no columns: group is infinite")
    D, U, V = linalg.snf(R)
    diag = linalg.diagonal(D) + [0] * max(0, k - min(len(R), len(R[0])))
    if any(d == 0 for d in diag[:k]):
        raise GroupError("relations do not have full rank: group is infinite")
    keep = [i for i in range(k) if diag[i] != 1]
    keep.reverse()  # descending
    Uinv = linalg.inverse_rational(U)
    invariants = [diag[i] for i in keep]
    P = [[x % diag[i] for x in U[i]] for i in keep]
    Q = [[int(Uinv[r][i]) for i in keep] for r in range(k)]
    # entries of Q can be reduced modulo the raw relations only coordinatewise
    # when the raw relations are diagonal, so leave them as they are
    return invariants, P, Q


class FinAbGroup:
    """(G, D_G) with generator objects and a discrete logarithm."""

    def __init__(self, invariants: Sequence[int], gens: Sequence, dlog: Callable | None,
                 labels: Sequence[str] | None = None):
        invariants = [int(d) for d in invariants]
        if any(d <= 1 for d in invariants):
            raise GroupError("invariants must be > 1")
        if any(invariants[i] % invariants[i + 1] for i in range(len(invariants) - 1)):
            raise GroupError("invariants must form a divisibility chain (descending)")
        if len(gens) != len(invariants):
            raise GroupError("one generator per invariant")
        self.invariants = invariants
        self.gens = list(gens)
        self._dlog = dlog
        self.labels = list(labels) if labels else [f"g{i + 1}" for i in range(len(gens))]
        self.history: list[dict] = []

    # -- basic arithmetic on coordinate vectors -----------------------------

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def order(self) -> int:
        return prod(self.invariants)

    def D(self):
        k = self.rank
        return [[self.invariants[i] if i == j else 0 for j in range(k)] for i in range(k)]

    def reduce(self, v) -> list[int]:
        if len(v) != self.rank:
            raise linalg.DimensionError("vector length does not match the group")
        return [x % d for x, d in zip(v, self.invariants)]

    def add(self, v, w):
        return self.reduce([a + b for a, b in zip(v, w)])

    def neg(self, v):
        return self.reduce([-a for a in v])

    def scale(self, v, k: int):
        return self.reduce([a * k for a in v])

    def zero(self):
        return [0] * self.rank

    def is_zero(self, v) -> bool:
        return not any(self.reduce(v))

    def element_order(self, v) -> int:
        out = 1
        for x, d in zip(self.reduce(v), self.invariants):
            out = lcm(out, d // gcd(d, x))
        return out

    def elements(self):
        import itertools

        for v in itertools.product(*[range(d) for d in self.invariants]):
            yield list(v)

    def dlog(self, obj) -> list[int]:
        if self._dlog is None:
            raise GroupError("no discrete logarithm attached")
        return self.reduce(self._dlog(obj))

    # -- subgroups and quotients -------------------------------------------

    def subgroup_matrix(self, vectors) -> list[list[int]]:
        """HNF of [H | D_G]; its determinant is the index of <H>."""
        k = self.rank
        for v in vectors:
            if len(v) != k:
                raise linalg.DimensionError("vector length does not match the group")
        if k == 0:
            return []
        cols = [list(v) for v in vectors] + linalg.columns(self.D())
        return linalg.hnf_basis(linalg.from_columns(cols, k))

    def index(self, M) -> int:
        if self.rank == 0:
            return 1
        return abs(linalg.det(M))

    def subgroup_order(self, vectors) -> int:
        return self.order() // self.index(self.subgroup_matrix(vectors))

    def quotient(self, M, compose: Callable = product_compose) -> "FinAbGroup":
        """G / (column span of M); M must contain the relations D_G."""
        k = self.rank
        if k == 0:
            return self
        cols = linalg.columns(M) if M and M[0] else []
        for c in linalg.columns(self.D()):
            if linalg.solve_integer(M, c) is None:
                raise GroupError("subgroup matrix does not contain the relations of G")
        inv, P, Q = snf_presentation(linalg.from_columns(cols, k), k)
        gens = []
        for j in range(len(inv)):
            terms = [(self.gens[i], Q[i][j] % self.invariants[i]) for i in range(k)]
            gens.append(compose(terms))
        parent = self

        def dlog(obj):
            v = parent.dlog(obj)
            return [sum(P[i][r] * v[r] for r in range(k)) for i in range(len(inv))]

        return FinAbGroup(inv, gens, dlog)

    def image_matrix_dlog(self, vectors):
        return [self.reduce(v) for v in vectors]

    # -- generator selection -----------------------------------------------

    def with_generators(self, candidates, labels=None) -> "FinAbGroup":
        """Re-express the group on generators chosen greedily from candidates.

        Invariant i (descending) gets the first candidate of exactly that
        order whose cyclic subgroup meets the span of the previously chosen
        ones trivially.  Raises GroupError when the candidates do not
        produce a basis.
        """
        k = self.rank
        if k == 0:
            return self
        labels = list(labels) if labels else [None] * len(candidates)
        vecs = [self.dlog(c) for c in candidates]
        chosen: list[int] = []
        span: list[list[int]] = []
        size = 1
        for d in self.invariants:
            for idx, v in enumerate(vecs):
                if idx in chosen or self.element_order(v) != d:
                    continue
                new_size = self.subgroup_order(span + [v])
                if new_size == size * d:
                    chosen.append(idx)
                    span.append(v)
                    size = new_size
                    break
            else:
                raise GroupError("candidates do not contain a basis adapted to the invariants")
        # new coordinates: solve G_new * y = v mod D
        Gm = linalg.from_columns(span, k)
        A = linalg.hconcat(Gm, self.D())
        inv_cols = []
        for j in range(k):
            e = [int(i == j) for i in range(k)]
            y = linalg.solve_integer(A, e)
            if y is None:
                raise GroupError("chosen generators do not generate the group")
            inv_cols.append(y[:k])
        Inv = linalg.from_columns(inv_cols, k)
        parent = self

        def dlog(obj):
            v = parent.dlog(obj)
            return linalg.matvec(Inv, v)

        out = FinAbGroup(self.invariants, [candidates[i] for i in chosen], dlog,
                         [labels[i] or f"g{n + 1}" for n, i in enumerate(chosen)])
        out.history = self.history
        return out

    def to_json(self, gen_json: Callable = repr):
        return {"invariants": list(self.invariants), "generators": [gen_json(g) for g in self.gens]}

    def __repr__(self):
        return f"FinAbGroup({self.invariants})"


def from_presentation(raw_gens: Sequence, R, raw_dlog: Callable,
                      compose: Callable = product_compose) -> FinAbGroup:
    """Group Z^k / R on raw generator objects with a raw-coordinate dlog."""
    k = len(raw_gens)
    if k == 0:
        return FinAbGroup([], [], lambda obj: [])
    inv, P, Q = snf_presentation(R, k)
    # exponents can be reduced modulo the order of each raw generator
    orders = []
    for i in range(k):
        o = 1
        for r, d in enumerate(inv):
            x = P[r][i] % d
            o = lcm(o, d // gcd(d, x))
        orders.append(o)
    gens = [compose([(raw_gens[i], Q[i][j] % orders[i]) for i in range(k)])
            for j in range(len(inv))]

    def dlog(obj):
        v = raw_dlog(obj)
        return [sum(P[i][r] * v[r] for r in range(k)) for i in range(len(inv))]

    return FinAbGroup(inv, gens, dlog)


def blackbox_group(gens: Sequence, mul: Callable, identity, key: Callable = lambda x: x,
                   canon: Callable = lambda x: x, limit: int = 10 ** 6,
                   compose: Callable = product_compose) -> FinAbGroup:
    """Enumerate the group generated by gens; dlog by table lookup.

    ``canon`` maps an object to its canonical representative and ``key`` to
    a hashable lookup key.
    """
    k = len(gens)
    table = {key(canon(identity)): [0] * k}
    elems = [(canon(identity), [0] * k)]
    relations = []
    for i, g in enumerate(gens):
        g = canon(g)
        # smallest power of g landing in the current subgroup
        h = g
        m = 1
        while key(h) not in table:
            h = canon(mul(h, g))
            m += 1
            if m * len(elems) > limit:
                raise GroupError(f"group exceeds the enumeration bound {limit}")
        rel = [-x for x in table[key(h)]]
        rel[i] += m
        relations.append(rel)
        if m > 1:
            new = []
            for x, v in elems:
                y = x
                for j in range(1, m):
                    y = canon(mul(y, g))
                    w = list(v)
                    w[i] = j
                    table[key(y)] = w
                    new.append((y, w))
            elems.extend(new)
    R = linalg.from_columns(relations, k) if k else []

    def raw_dlog(obj):
        kk = key(canon(obj))
        if kk not in table:
            raise GroupError("element not in the enumerated group")
        return table[kk]

    G = from_presentation(list(gens), R, raw_dlog, compose)
    G.table_size = len(table)
    return G


def direct_sum(groups: Sequence[FinAbGroup], inject: Sequence[Callable], split: Callable,
               compose: Callable = product_compose) -> FinAbGroup:
    """Direct sum; ``inject[i]`` embeds a generator of groups[i], ``split``
    maps an object to the tuple of its components."""
    raw_gens = []
    diag = []
    for G, inj in zip(groups, inject):
        for g, d in zip(G.gens, G.invariants):
            raw_gens.append(inj(g))
            diag.append(d)
    k = len(raw_gens)
    R = [[diag[i] if i == j else 0 for j in range(k)] for i in range(k)]

    def raw_dlog(obj):
        parts = split(obj)
        v = []
        for G, x in zip(groups, parts):
            v.extend(G.dlog(x))
        return v

    return from_presentation(raw_gens, R, raw_dlog, compose)


def extension_assemble(A: FinAbGroup, C: FinAbGroup, inject: Callable, lifts: Sequence,
                       lift_relations: Sequence[Sequence[int]], raw_dlog: Callable,
                       compose: Callable = product_compose) -> FinAbGroup:
    """Group B in 1 -> A -> B -> C -> 1.

    ``lifts[i]`` lifts the i-th generator of C; ``lift_relations[i]`` is the
    A-coordinate vector of lifts[i]^{d_i}.  ``raw_dlog`` maps an object of B
    to (A-coordinates, C-coordinates) concatenated.
    """
    a, c = A.rank, C.rank
    if len(lifts) != c or len(lift_relations) != c:
        raise GroupError("one lift and one relation per generator of C")
    cols = []
    for i, d in enumerate(A.invariants):
        cols.append([d if r == i else 0 for r in range(a + c)])
    for i, d in enumerate(C.invariants):
        r = lift_relations[i]
        if len(r) != a:
            raise GroupError("lifted relation does not land in A")
        cols.append([-x for x in r] + [d if t == i else 0 for t in range(c)])
    raw_gens = [inject(g) for g in A.gens] + list(lifts)
    if a + c == 0:
        return FinAbGroup([], [], lambda obj: [])
    B = from_presentation(raw_gens, linalg.from_columns(cols, a + c), raw_dlog, compose)
    if B.order() != A.order() * C.order():
        raise GroupError("extension cardinality mismatch")
    B.history = [{"A": A.invariants, "C": C.invariants, "B": B.invariants}]
    return B
