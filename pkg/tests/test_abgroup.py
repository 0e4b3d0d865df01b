import pytest

from nrc.abgroup import (FinAbGroup, GroupError, blackbox_group, direct_sum, extension_assemble,
                         from_presentation, snf_presentation)


def zmod(n):
    """(Z/n)^* by enumeration, objects are residues."""
    from math import gcd

    units = [a for a in range(1, n) if gcd(a, n) == 1]
    return blackbox_group(units, lambda x, y: x * y % n, 1, canon=lambda x: x % n)


def test_snf_presentation():
    inv, P, Q = snf_presentation([[2, 0], [0, 3]], 2)
    assert inv == [6]
    inv, _, _ = snf_presentation([[4, 0], [0, 6]], 2)
    assert inv == [12, 2]
    with pytest.raises(GroupError):
        snf_presentation([[2, 0], [0, 0]], 2)


def test_from_presentation_dlog_is_consistent():
    G = from_presentation(["a", "b"], [[4, 0], [0, 6]], lambda v: v)
    assert G.invariants == [12, 2] and G.order() == 24
    # dlog is a homomorphism Z^2 -> G
    for v in ([1, 0], [0, 1], [3, 5], [4, 6]):
        for w in ([2, 1], [7, 0]):
            s = [x + y for x, y in zip(v, w)]
            assert G.dlog(s) == G.add(G.dlog(v), G.dlog(w))
    assert G.is_zero(G.dlog([4, 6]))


def test_units_mod_15():
    G = zmod(15)
    assert G.invariants == [4, 2] and G.order() == 8
    for g, d in zip(G.gens, G.invariants):
        assert pow(g if isinstance(g, int) else _eval(g, 15), d, 15) == 1
    assert G.dlog(1) == [0, 0]
    assert G.element_order(G.dlog(2)) == 4
    assert len(list(G.elements())) == 8


def _eval(terms, n):
    x = 1
    for g, e in terms:
        x = x * pow(g if isinstance(g, int) else _eval(g, n), e, n) % n
    return x


def test_subgroup_index_and_quotient():
    G = FinAbGroup([8, 2], ["x", "y"], lambda v: v)
    M = G.subgroup_matrix([[1, 0]])
    assert G.index(M) == 2
    Q = G.quotient(M)
    assert Q.invariants == [2]
    assert Q.dlog([0, 1]) == [1] and Q.dlog([5, 0]) == [0]
    assert G.subgroup_order([[2, 0], [0, 1]]) == 8
    assert G.index(G.subgroup_matrix([[8, 0], [0, 1]])) == 8
    with pytest.raises(GroupError):
        G.quotient([[3, 0], [0, 1]])  # does not contain 8 * x


def test_with_generators():
    G = FinAbGroup([4, 2], ["x", "y"], lambda v: v)
    H = G.with_generators([[2, 0], [1, 1], [0, 1], [2, 1]])
    assert H.gens == [[1, 1], [0, 1]]
    assert H.dlog([1, 1]) == [1, 0]
    assert H.dlog([1, 0]) == [1, 1]
    with pytest.raises(GroupError):
        G.with_generators([[2, 0], [0, 1]])


def test_direct_sum():
    A, B = zmod(5), zmod(8)
    S = direct_sum([A, B], [lambda g: (g, 1), lambda g: (1, g)], lambda obj: obj)
    assert S.invariants == [4, 2, 2] and S.order() == 16


@pytest.mark.parametrize("c,inv", [(0, [2, 2]), (1, [4])])
def test_extension_both_ways(c, inv):
    # B = Z^2 / <(2, 0), (-c, 2)>: lifting the generator of C to an element
    # whose square is c times the generator of A
    A = FinAbGroup([2], ["a"], lambda v: v[:1])
    C = FinAbGroup([2], ["c"], lambda v: v[1:])
    B = extension_assemble(A, C, lambda g: g, ["l"], [[c]], lambda v: v)
    assert B.invariants == inv
    assert B.order() == A.order() * C.order()
    assert B.history[0]["B"] == inv


def test_extension_rejects_bad_shapes():
    A = FinAbGroup([2], ["a"], lambda v: v[:1])
    C = FinAbGroup([3], ["c"], lambda v: v[1:])
    with pytest.raises(GroupError):
        extension_assemble(A, C, lambda g: g, [], [], lambda v: v)
    with pytest.raises(GroupError):
        extension_assemble(A, C, lambda g: g, ["l"], [[0, 0]], lambda v: v)


def test_trivial_group():
    G = FinAbGroup([], [], lambda v: [])
    assert G.order() == 1 and G.dlog("anything") == []
    assert G.quotient([]) is G
    with pytest.raises(GroupError):
        FinAbGroup([1], ["x"], None)
    with pytest.raises(GroupError):
        FinAbGroup([2, 4], ["x", "y"], None)
