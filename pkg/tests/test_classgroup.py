import copy
from math import gcd, isqrt

import pytest

from nrc.classgroup import (ClassGroupError, classgroup_imag_quadratic, form_compose, form_reduce,
                            principal_form, principal_ideal_test, roots_of_unity, t_unit_support_ok,
                            t_units, tclassgroup, verify_classgroup_input)
from nrc.config import RingSpec, _read
from nrc.field import load_field
from nrc.ideal import FracIdeal, decompose_prime


def count_reduced_forms(D):
    """Class number by listing reduced primitive forms (independent of nrc)."""
    h = 0
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or gcd(gcd(a, b), c) != 1:
                continue
            if b < 0 and a == c:
                continue
            h += 1
    return h


@pytest.mark.parametrize("poly,D,inv", [
    ([1, 0, 1], -4, []),
    ([6, -1, 1], -23, [3]),
    ([14, 0, 1], -56, [4]),
    ([21, 0, 1], -84, [2, 2]),
    ([710, 0, 1], -2840, [16, 2]),
])
def test_imag_quadratic_class_groups(poly, D, inv):
    K = load_field(poly)
    assert K.disc == D
    cl = classgroup_imag_quadratic(K)
    assert cl.invariants == inv
    assert cl.group.order() == count_reduced_forms(D)
    for i, (d, a) in enumerate(zip(cl.invariants, cl.witnesses)):
        assert cl.gen_ideal(i) ** d == FracIdeal.principal(a)


def test_forms():
    D = -2840
    f = form_reduce((7, 4, 102))
    e = principal_form(D)
    assert form_reduce(form_compose(f, e)) == f
    a, b, c = f
    assert b * b - 4 * a * c == D
    # the form of a prime above 7 has order 16
    g, k = f, 1
    while g != e:
        g, k = form_reduce(form_compose(g, f)), k + 1
    assert k == 16


def test_example1_generators(ex1):
    cl = ex1.cl
    assert cl.invariants == [16, 2]
    assert [P.p for P in cl.generators] == [7, 5]
    P, Q = decompose_prime(ex1.K, 7)
    assert principal_ideal_test(P.ideal) is None
    # the two primes above 7 are inverse classes
    v = cl.group.add(cl.group.dlog(P.ideal), cl.group.dlog(Q.ideal))
    assert cl.group.is_zero(v)


def test_dlog_identity(ex1):
    cl = ex1.cl
    K = ex1.K
    for ell in (3, 11, 17, 89):
        for P in decompose_prime(K, ell):
            w, g = cl.dlog(P)
            assert cl.check_identity(P.ideal, w, g)
            assert all(0 <= x < d for x, d in zip(w, cl.invariants))


def test_pip_generator():
    K = load_field([710, 0, 1])
    a = K.element([39, 2])
    g = principal_ideal_test(FracIdeal.principal(a))
    assert FracIdeal.principal(g) == FracIdeal.principal(a)


def test_roots_of_unity():
    assert roots_of_unity(load_field([1, 0, 1]))[1] == 4
    assert roots_of_unity(load_field([1, 1, 1]))[1] == 6
    assert roots_of_unity(load_field([710, 0, 1]))[1] == 2


def test_example2_verified_input(ex2):
    cl = ex2.cl
    assert cl.method == "verified"
    assert cl.invariants == [2, 2]
    assert [P.p for P in cl.generators] == [11, 2]
    assert len(cl.units()) == 2


def _example2_block():
    spec = RingSpec.load("rings/example2.toml")
    return spec, copy.deepcopy(spec.classgroup)


def test_example2_corrupted_witness_rejected(ex2):
    spec, block = _example2_block()
    block["witnesses"][0] = [-2, 1, 0, 0]
    with pytest.raises(ClassGroupError, match="witness 1"):
        verify_classgroup_input(ex2.K, block, units=[ex2.K.element([0, 0, 1, 0])])


def test_example2_corrupted_relation_rejected(ex2):
    _, block = _example2_block()
    block["relations"][0]["vector"] = [1, 1]
    with pytest.raises(ClassGroupError, match="relation"):
        verify_classgroup_input(ex2.K, block, units=[ex2.K.element([0, 0, 1, 0])])


def test_example2_missing_relation_or_unit_rejected(ex2):
    _, block = _example2_block()
    block["relations"] = [r for r in block["relations"] if int(r["p"]) != 5]
    with pytest.raises(ClassGroupError, match="no relation"):
        verify_classgroup_input(ex2.K, block, units=[ex2.K.element([0, 0, 1, 0])])
    _, block = _example2_block()
    with pytest.raises(ClassGroupError, match="unit rank"):
        verify_classgroup_input(ex2.K, block, units=[])
    with pytest.raises(ClassGroupError, match="not a unit"):
        verify_classgroup_input(ex2.K, block, units=[ex2.K.element([2, 0, 0, 0])])


def test_empty_block_for_gauss(gauss):
    K, _ = gauss
    cl = verify_classgroup_input(K, {"invariants": [], "generators": [], "witnesses": [], "relations": []})
    assert cl.invariants == []
    assert cl.torsion[1] == 4


def test_example2_dlog_identity(ex2):
    cl = ex2.cl
    for ell in (7, 13, 29, 61):
        for P in decompose_prime(ex2.K, ell):
            w, g = cl.dlog(P)
            assert cl.check_identity(P.ideal, w, g)


def test_tclassgroup_example1(ex1):
    cl = ex1.cl
    T = decompose_prime(ex1.K, 7)
    tc = tclassgroup(cl, T)
    assert tc.invariants == [2]
    assert tc.group.gens[0].p == 5
    for ell in (3, 5, 11, 13, 17):
        for P in decompose_prime(ex1.K, ell):
            v, g, y = tc.dlog(P)
            assert tc.check_identity(P.ideal, v, g, y)


def test_tclassgroup_example2(ex2):
    T = decompose_prime(ex2.K, 11)
    tc = tclassgroup(ex2.cl, T)
    assert tc.invariants == [2]
    for ell in (2, 5, 7, 13):
        for P in decompose_prime(ex2.K, ell):
            v, g, y = tc.dlog(P)
            assert tc.check_identity(P.ideal, v, g, y)


def test_t_units(ex1):
    T = decompose_prime(ex1.K, 7)
    us = t_units(ex1.cl, T)
    # torsion plus one T-unit per prime of T
    assert len(us) == 1 + len(T)
    for u in us:
        assert t_unit_support_ok(u, T)
    assert not t_unit_support_ok(ex1.K.from_int(5), T)


def test_shipped_example2_file_has_relations():
    d = _read("src/nrc/data/rings/example2.toml")
    assert {int(r["p"]) for r in d["classgroup"]["relations"]} >= {2, 3, 5, 11}
