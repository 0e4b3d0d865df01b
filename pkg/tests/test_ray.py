import pytest

from nrc.classgroup import verify_classgroup_input
from nrc.field import load_field
from nrc.ideal import FracIdeal, Modulus, decompose_prime
from nrc.picard import NotCoprime, NumberRing, Order, picard_group
from nrc.ray import (RamifiedOrExcluded, congruence_subgroup, ray_class_group, split_exclusions,
                     split_scan, splits_completely)

EMPTY = {"invariants": [], "generators": [], "witnesses": [], "relations": []}


def unit_image_order(d, unit, m, signs):
    """|<-1, unit>| inside (Z[sqrt d]/m)^* x {+-1}^places, by closure.

    unit = (a, b) meaning a + b*sqrt(d); signs are the signs of the unit
    at the real places kept in the modulus.  Plain integers only.
    """
    def mul(x, y):
        (a, b, s), (c, e, t) = x, y
        return ((a * c + d * b * e) % m, (a * e + b * c) % m, tuple(p * q for p, q in zip(s, t)))

    gens = [((-1) % m, 0, tuple(-1 for _ in signs)), (unit[0] % m, unit[1] % m, tuple(signs))]
    seen = {(1 % m, 0, tuple(1 for _ in signs))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def residue_order(d, p):
    # units of Z[sqrt d]/p for an odd prime p not dividing d: nonzero norm mod p
    return sum(1 for a in range(p) for b in range(p) if (a * a - d * b * b) % p)


@pytest.mark.parametrize("d,unit,m,places,signs", [
    (2, (1, 1), 1, (0, 1), (-1, 1)),
    (2, (1, 1), 7, (), ()),
    (2, (1, 1), 7, (0, 1), (-1, 1)),
    (2, (1, 1), 7, (0,), (-1,)),
    (3, (2, 1), 1, (0, 1), (1, 1)),
    (3, (2, 1), 7, (), ()),
    (3, (2, 1), 7, (0, 1), (1, 1)),
])
def test_real_quadratic_ray_orders(d, unit, m, places, signs):
    K = load_field([-d, 0, 1])
    u = K.from_power_basis(list(unit))
    # real places are ordered by the root: place 0 sends sqrt(d) to -sqrt(d)
    assert [K.real_sign(u, k) for k in places] == list(signs)
    cl = verify_classgroup_input(K, EMPTY, units=[u])
    ray = ray_class_group(cl, Modulus(FracIdeal.from_int(K, m), places))
    res = residue_order(d, m) if m > 1 else 1
    want = res * 2 ** len(places) // unit_image_order(d, unit, m, signs)
    assert ray.order() == want
    assert ray.unit_image_order == unit_image_order(d, unit, m, signs)


def test_narrow_class_groups():
    # Q(sqrt 2) has a unit of norm -1, Q(sqrt 3) does not
    for d, unit, inv in ((2, [1, 1], []), (3, [2, 1], [2])):
        K = load_field([-d, 0, 1])
        cl = verify_classgroup_input(K, EMPTY, units=[K.from_power_basis(unit)])
        assert ray_class_group(cl, Modulus(FracIdeal.unit(K), (0, 1))).invariants == inv


def test_gauss_mod_5(gauss):
    K, cl = gauss
    ray = ray_class_group(cl, Modulus(FracIdeal.from_int(K, 5)))
    assert ray.order() == 4 and ray.res_order == 16 and ray.unit_image_order == 4
    assert ray_class_group(cl, Modulus(FracIdeal.unit(K))).invariants == []


def test_example1_ray(ex1):
    ray = ray_class_group(ex1.cl, Modulus(FracIdeal.from_int(ex1.K, 7)))
    assert ray.order() == 576
    assert ray.res_order == 36 and ray.unit_image_order == 2
    K = ex1.K
    # principal ideals with a generator = 1 mod 7 are trivial
    for x in (K.element([8, 7]), K.element([-13, 14]), K.element([1, 21])):
        assert ray.group.is_zero(ray.dlog(FracIdeal.principal(x)))
    # (3 + sqrt(-710)) has residues 5 and 1 at the primes above 7, not +-(1, 1)
    assert not ray.group.is_zero(ray.dlog(FracIdeal.principal(K.element([3, 1]))))
    with pytest.raises(NotCoprime):
        ray.dlog(decompose_prime(K, 7)[0])


def test_example1_congruence(pic1, ex1):
    cs = congruence_subgroup(pic1, ex1.cl)
    assert cs.index == 2
    assert cs.ray.order() == 576
    assert cs.to_json()["index"] == 2


def test_trivial_ring_congruence(gauss):
    K, cl = gauss
    pic = picard_group(NumberRing(Order.maximal(K), 1), cl)
    cs = congruence_subgroup(pic, cl)
    assert pic.invariants == [] and cs.index == cs.ray.order() == 1


def test_example1_split_values(pic1):
    assert split_exclusions(pic1) == {2, 5, 7, 71}
    assert splits_completely(pic1, 17) is True
    assert splits_completely(pic1, 13) is False  # inert in K
    assert splits_completely(pic1, 3) is False   # split in K, nontrivial class
    with pytest.raises(RamifiedOrExcluded):
        splits_completely(pic1, 7)
    assert splits_completely(pic1, 17, degree_one_exists=True) is True
    assert splits_completely(pic1, 13, degree_one_exists=True) is False


def test_example1_89_splits(pic1, ex1):
    # 39^2 + 710 * 2^2 = 89 * 7^2, so a prime above 89 is trivial in Pic(R)
    assert 39 ** 2 + 710 * 2 ** 2 == 89 * 7 ** 2
    assert splits_completely(pic1, 89) is True
    rows = dict(split_scan(pic1, 100, exclude=[19]))
    assert {ell for ell, v in rows.items() if v} == {17, 23, 47, 79, 89, 97}


def test_example2_split_values(pic2):
    assert {2, 3, 5, 11} <= split_exclusions(pic2)
    assert splits_completely(pic2, 61) is True
    assert splits_completely(pic2, 7) is False
