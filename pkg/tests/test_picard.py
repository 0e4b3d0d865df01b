import pytest

from nrc.classgroup import classgroup_imag_quadratic
from nrc.field import load_field
from nrc.ideal import FracIdeal, decompose_prime
from nrc.picard import (NotCoprime, NumberRing, Order, RingError, conductor_of_order,
                        picard_group, residue_unit_group, verify_order_ring_surjection)


@pytest.fixture(scope="module")
def G():
    K = load_field([1, 0, 1])
    return K, classgroup_imag_quadratic(K)


def gauss_order(K, f):
    return Order.from_elements(K, [K.one(), K.gen() * f])


def test_order_checks(G):
    K, _ = G
    o = gauss_order(K, 3)
    assert o.index == 3 and not o.is_maximal()
    assert o.contains(K.element([1, 3])) and not o.contains(K.gen())
    with pytest.raises(RingError):
        Order.from_elements(K, [K.from_int(2), K.gen()])  # no 1
    with pytest.raises(RingError):
        Order.from_elements(K, [K.one(), K.from_fractions([0, "1/2"])])


def test_conductors(G, ex2):
    K, _ = G
    assert conductor_of_order(gauss_order(K, 2)) == FracIdeal.from_int(K, 2)
    assert conductor_of_order(gauss_order(K, 6)) == FracIdeal.from_int(K, 6)
    assert conductor_of_order(Order.maximal(K)) == FracIdeal.unit(K)
    o = ex2.ring.order
    f = conductor_of_order(o)
    assert o.index == 9
    assert FracIdeal.from_int(ex2.K, 9).issubset(f)
    assert all(o.contains(b) for b in f.basis())
    assert f != FracIdeal.unit(ex2.K)


def test_residue_unit_groups(ex1, G):
    K = ex1.K
    p5 = decompose_prime(K, 5)[0]
    assert residue_unit_group(p5.ideal).group.invariants == [4]
    assert residue_unit_group(FracIdeal.from_int(K, 7)).group.invariants == [6, 6]
    assert residue_unit_group(FracIdeal.from_int(K, 13)).group.invariants == [168]
    KG, _ = G
    p2 = decompose_prime(KG, 2)[0]
    assert residue_unit_group(p2.ideal ** 3).group.invariants == [4]
    res = residue_unit_group(FracIdeal.from_int(K, 7))
    x, y = K.element([3, 1]), K.element([1, 2])
    assert res.group.add(res.dlog(x), res.dlog(y)) == res.dlog(x * y)


# |Pic(Z[f i])| = f * prod (1 - (-4/p)/p) / [Z[i]^* : Z[f i]^*]
@pytest.mark.parametrize("f,inv", [(2, []), (3, [2]), (5, [2]), (7, [4])])
def test_gauss_orders(G, f, inv):
    K, cl = G
    pic = picard_group(NumberRing(gauss_order(K, f), 1), cl)
    assert pic.invariants == inv


def test_example1_picard(pic1, ex1):
    assert pic1.invariants == [2]
    p5 = decompose_prime(ex1.K, 5)[0]
    assert pic1.dlog(p5) == [1]
    assert [P.p for P in ex1.ring.inverted_primes] == [7, 7]
    assert ex1.ring.modulus == FracIdeal.from_int(ex1.K, 7)
    with pytest.raises(NotCoprime):
        pic1.dlog(decompose_prime(ex1.K, 7)[0])


def test_example2_picard(pic2, ex2):
    assert pic2.invariants == [2]
    p2 = decompose_prime(ex2.K, 2)[0]
    assert pic2.dlog(p2) == [1]
    assert [P.p for P in ex2.ring.inverted_primes] == [11] * 4  # 11 splits completely
    rep = verify_order_ring_surjection(ex2.ring, ex2.cl, pic2)
    assert rep["ok"], rep


def test_example1_surjection(pic1, ex1):
    rep = verify_order_ring_surjection(ex1.ring, ex1.cl, pic1)
    assert rep["ok"] and rep["pic_o"] == [16, 2] and rep["pic_R"] == [2]


def test_ring_rejects_bad_eps(G):
    K, _ = G
    with pytest.raises(RingError):
        NumberRing(gauss_order(K, 3), 0)
    with pytest.raises(RingError):
        NumberRing(gauss_order(K, 3), K.gen())  # i is not in Z[3i]
    with pytest.raises(RingError):
        NumberRing(gauss_order(K, 3), 3)  # inverts a prime of the conductor


def test_extension_history(pic1, pic2):
    for pic in (pic1, pic2):
        h = pic.group.history[0]
        from math import prod

        assert prod(h["B"]) == prod(h["A"]) * prod(h["C"])
