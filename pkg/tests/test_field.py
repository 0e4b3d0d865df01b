from fractions import Fraction

import pytest

from nrc.field import FieldError, load_field

EX2_POLY = [45, 0, 15, 0, 1]
EX2_BASIS = [[1, 0, 0, 0], [0, 1, 0, 0], [2, 0, Fraction(1, 3), 0], [0, 3, 0, Fraction(1, 3)]]


@pytest.fixture(scope="module")
def K1():
    return load_field([710, 0, 1])


@pytest.fixture(scope="module")
def K2():
    return load_field(EX2_POLY, EX2_BASIS)


def test_discriminants(K1, K2):
    assert K1.disc == -2840
    assert K2.disc == 18000
    G = load_field([1, 0, 1])
    assert G.disc == -4 and (G.r1, G.r2) == (0, 1)
    assert (K2.r1, K2.r2) == (0, 2)
    assert K2.index == 9


def test_element_arithmetic(K1):
    a = K1.gen()
    assert a * a == K1.from_int(-710)
    assert (1 + a) * (1 - a) == K1.from_int(711)
    inv = a.inverse()
    assert inv == a * Fraction(-1, 710)
    assert a * inv == K1.one()
    with pytest.raises(ZeroDivisionError):
        K1.zero().inverse()


def test_norms(K2):
    a = K2.gen()
    assert K2.one().norm() == 1
    assert (1 + a).norm() == 61
    assert (1 + 2 * a).norm() == 781 == 71 * 11
    assert K2.from_int(Fraction(3, 2)).norm() == Fraction(3, 2) ** 4


def test_norm_resultant_identity(K2):
    # N(a + b t) = b^n f(-a/b) for monic f
    def f(x):
        return sum(c * x ** k for k, c in enumerate(EX2_POLY))
    t = K2.gen()
    for a, b in [(1, 1), (1, 2), (3, -1), (-2, 5), (7, 3)]:
        assert (a + b * t).norm() == b ** 4 * f(Fraction(-a, b))


def test_table_associative(K2):
    n = K2.n
    w = [K2.omega(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                assert (w[i] * w[j]) * w[k] == w[i] * (w[j] * w[k])


def test_trace(K1):
    assert K1.gen().trace() == 0
    assert K1.from_int(3).trace() == 6


def test_load_errors():
    with pytest.raises(FieldError):
        load_field([-1, 0, 1])  # rational root
    with pytest.raises(FieldError):
        load_field([1, 0, 1], [[1, 0], [Fraction(1, 2), Fraction(1, 2)]])  # not closed
    with pytest.raises(FieldError):
        load_field([1, 0, 1], [[0, 1], [1, 0]])  # first element not 1
    with pytest.raises(FieldError):
        load_field(EX2_POLY)  # Z[t] is not maximal at 3


def test_maximality_test(K2):
    assert all(K2.is_p_maximal(p) for p in (2, 3, 5))
    K = load_field([-5, 0, 1], [[1, 0], [Fraction(1, 2), Fraction(1, 2)]])
    assert K.disc == 5


def test_embeddings_and_signs():
    K = load_field([-2, 0, 1])
    s = K.gen()
    assert sorted(K.real_sign(s, k) for k in range(2)) == [-1, 1]
    assert abs(float(K.embed(s, 0)) ** 2 - 2) < 1e-12
