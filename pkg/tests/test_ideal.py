from fractions import Fraction

import pytest

from nrc.field import load_field
from nrc.ideal import (FracIdeal, IdealError, IndexDivisor, Modulus, coprime_representative, crt,
                       decompose_prime, factor_ideal, prime_from_generators, primes_up_to,
                       valuation, weak_approx)

EX2_POLY = [45, 0, 15, 0, 1]
EX2_BASIS = [[1, 0, 0, 0], [0, 1, 0, 0], [2, 0, Fraction(1, 3), 0], [0, 3, 0, Fraction(1, 3)]]


@pytest.fixture(scope="module")
def K1():
    return load_field([710, 0, 1])


def test_decomposition_types(K1):
    # -710 is a square mod 7 and mod 11, a non-square mod 13; 5 divides the discriminant
    assert [(P.e, P.f) for P in decompose_prime(K1, 7)] == [(1, 1), (1, 1)]
    assert [(P.e, P.f) for P in decompose_prime(K1, 11)] == [(1, 1), (1, 1)]
    assert [(P.e, P.f) for P in decompose_prime(K1, 13)] == [(1, 2)]
    assert [(P.e, P.f) for P in decompose_prime(K1, 5)] == [(2, 1)]
    assert [(P.e, P.f) for P in decompose_prime(K1, 2)] == [(2, 1)]


def test_ramified_square(K1):
    p5 = decompose_prime(K1, 5)[0]
    assert p5.ideal ** 2 == FracIdeal.from_int(K1, 5)
    assert p5.ideal.norm() == 5


def test_split_product(K1):
    P, Q = decompose_prime(K1, 7)
    assert P != Q
    assert P.ideal * Q.ideal == FracIdeal.from_int(K1, 7)
    assert valuation(K1.from_int(49), P) == 2
    assert valuation(FracIdeal.from_int(K1, Fraction(1, 7)), Q) == -1


def test_norms_and_inverse(K1):
    a = K1.element([3, 1])  # 3 + sqrt(-710), norm 719
    I = FracIdeal.principal(a)
    assert I.norm() == 719 == a.norm()
    J = I * FracIdeal.from_int(K1, 7)
    assert J.norm() == 719 * 49
    assert I * I.inverse() == FracIdeal.unit(K1)
    assert (J / I) == FracIdeal.from_int(K1, 7)


def test_factor_ideal_roundtrip(K1):
    a = K1.element([39, 2])  # 39^2 + 710*4 = 89 * 49
    fac = factor_ideal(FracIdeal.principal(a))
    assert sorted((P.p, v) for P, v in fac) == [(7, 2), (89, 1)]
    prod = FracIdeal.unit(K1)
    for P, v in fac:
        prod = prod * P.ideal ** v
    assert prod == FracIdeal.principal(a)


def test_index_divisor_needs_verified_primes():
    K2 = load_field(EX2_POLY, EX2_BASIS)
    with pytest.raises(IndexDivisor):
        decompose_prime(K2, 3)
    # pi = -4t - t^3/3, the generator shipped in fields/example2.toml
    P = prime_from_generators(K2, 3, K2.element([0, -1, 0, -1]))
    assert (P.e, P.f) == (2, 2)
    assert P.ideal ** 2 == FracIdeal.from_int(K2, 3)


def test_prime_from_generators_rejects_non_prime(K1):
    with pytest.raises(IdealError):
        prime_from_generators(K1, 7, K1.from_int(1))
    with pytest.raises(IdealError):
        prime_from_generators(K1, 7, K1.from_int(0))


def test_primes_up_to(K1):
    ps = primes_up_to(K1, 20)
    norms = [P.norm() for P in ps]
    assert norms == sorted(norms)
    assert all(n <= 20 for n in norms)
    assert 13 not in norms and 169 not in norms


def test_crt_and_weak_approx(K1):
    P, Q = decompose_prime(K1, 7)
    p5 = decompose_prime(K1, 5)[0]
    x = crt([(K1.from_int(3), P.ideal ** 2), (K1.from_int(1), p5.ideal)])
    assert (x - 3) in P.ideal ** 2 and (x - 1) in p5.ideal
    a = weak_approx([P, Q, p5], [2, -1, 0])
    assert valuation(a, P) == 2 and valuation(a, Q) == -1 and valuation(a, p5) == 0
    for R, v in factor_ideal(FracIdeal.principal(a)):
        if R not in (P, Q, p5):
            assert v >= 0
    with pytest.raises(ValueError):
        weak_approx([P, P], [1, 1])


def test_coprime_representative(K1):
    P, Q = decompose_prime(K1, 7)
    p5 = decompose_prime(K1, 5)[0]
    a = P.ideal * p5.ideal
    b, g = coprime_representative(a, FracIdeal.from_int(K1, 35))
    assert b == a * g and b.is_integral()
    assert b + FracIdeal.from_int(K1, 35) == FracIdeal.unit(K1)
    # already coprime: returned unchanged
    c, h = coprime_representative(Q.ideal, p5.ideal)
    assert c == Q.ideal and h == K1.one()


def test_modulus_validation(K1):
    with pytest.raises(IdealError):
        Modulus(FracIdeal.from_int(K1, Fraction(1, 2)))
    with pytest.raises(IdealError):
        Modulus(FracIdeal.from_int(K1, 7), (0,))  # no real places
    K = load_field([-2, 0, 1])
    assert Modulus(FracIdeal.from_int(K, 7), (1, 0, 1)).infinite == (0, 1)
