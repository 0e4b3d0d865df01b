import pytest

from nrc import poly
from nrc.poly import DiscriminantDivisible

EX1_CLASS_POLY = [31684, 0, 354, 0, 1]


def brute_roots(g, p):
    return [x for x in range(p) if poly.evaluate(g, x) % p == 0]


def test_split_test_examples():
    assert poly.poly_split_test([-2, 0, 1], 7)          # 3^2 = 2 mod 7
    assert poly.poly_split_test(EX1_CLASS_POLY, 17)
    assert not poly.poly_split_test(EX1_CLASS_POLY, 13)


def test_split_test_rejects_discriminant_primes():
    with pytest.raises(DiscriminantDivisible):
        poly.poly_split_test(EX1_CLASS_POLY, 89)
    with pytest.raises(DiscriminantDivisible):
        poly.poly_split_test([-2, 0, 1], 2)


@pytest.mark.parametrize("p", [3, 7, 11, 13, 17, 19, 23, 29, 31, 37])
def test_split_test_against_root_count(p):
    g = [1, 1, 0, 1]  # x^3 + x + 1, disc -31
    if p == 31:
        return
    assert poly.poly_split_test(g, p) == (len(brute_roots(g, p)) == 3)


def test_discriminant():
    assert poly.discriminant([710, 0, 1]) == -2840
    assert poly.discriminant([1, 0, 1]) == -4
    assert poly.discriminant([1, 1, 0, 1]) == -31


def test_factor_mod_p():
    facs = poly.factor_mod_p([710, 0, 1], 7)
    assert sorted(len(f) - 1 for f, _ in facs) == [1, 1]
    facs = poly.factor_mod_p([710, 0, 1], 5)
    assert facs == [([0, 1], 2)]


def test_rational_roots_and_real_roots():
    assert poly.rational_roots([-2, 1]) == [2]
    assert poly.rational_roots([710, 0, 1]) == []
    assert poly.count_real_roots([45, 0, 15, 0, 1]) == 0
    assert poly.count_real_roots([-2, 0, 1]) == 2
    assert poly.count_real_roots([-2, 0, 0, 1]) == 1


def test_padic_root_count():
    assert poly.count_padic_roots([-2, 0, 1], 7) == 2  # 3^2 = 2 mod 7
    assert poly.count_padic_roots([-2, 0, 1], 5) == 0
    # x^2 - 17 has two roots in Z_2 although 2 divides its discriminant
    assert poly.count_padic_roots([-17, 0, 1], 2) == 2
    assert poly.count_padic_roots([-5, 0, 1], 2) == 0
    with pytest.raises(ValueError):
        poly.count_padic_roots([0, 0, 1], 3)  # not squarefree


def test_padic_split_at_index_prime():
    # x^4 + 354x^2 + 31684 has a root (sqrt 2 + sqrt -710)/2; 89 divides its discriminant,
    # 2 and -710 are squares mod 89
    g = [31684, 0, 354, 0, 1]
    assert poly.discriminant(g) % 89 == 0
    assert poly.splits_completely_padic(g, 89)
    assert not poly.splits_completely_padic(g, 13)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_padic_roots_of_products(p):
    # distinct integer roots, some congruent mod p
    roots = [0, p, 2 * p * p, 1, 1 + p ** 3]
    g = [1]
    for r in roots:
        g = [a - r * b for a, b in zip([0] + g, g + [0])]
    assert poly.count_padic_roots(g, p) == len(roots)
