import pytest

from nrc.field import load_field
from nrc.normform import (NormFormError, criterion_crosscheck, expand_norm_form, leibniz_det,
                          solve_norm_eq)

# N(X + Y t + Z t^2 + W t^3) for t^4 + 15 t^2 + 45, exponents (X, Y, Z, W)
EX2_FORM = {
    (4, 0, 0, 0): 1, (3, 0, 1, 0): -30, (2, 2, 0, 0): 15, (2, 1, 0, 1): -270,
    (2, 0, 2, 0): 315, (2, 0, 0, 2): 1350, (1, 2, 1, 0): -180, (1, 1, 1, 1): 2700,
    (1, 0, 3, 0): -1350, (1, 0, 1, 2): -12150, (0, 4, 0, 0): 45, (0, 3, 0, 1): -1350,
    (0, 2, 2, 0): 675, (0, 2, 0, 2): 14175, (0, 1, 2, 1): -8100, (0, 1, 0, 3): -60750,
    (0, 0, 4, 0): 2025, (0, 0, 2, 2): 30375, (0, 0, 0, 4): 91125,
}


def test_leibniz_det_numbers():
    M = [[{(): 2}, {(): 1}], [{(): 7}, {(): 4}]]
    assert leibniz_det(M, 2) == {(): 1}


def test_quadratic_forms(ex1, gauss):
    nf = expand_norm_form(ex1.module_basis, ["X", "Y"])
    assert nf.coeffs == {(2, 0): 1, (0, 2): 710}
    assert nf.to_string() == "1*X^2 + 710*Y^2"
    K, _ = gauss
    g = expand_norm_form([K.one(), K.gen()])
    assert g.coeffs == {(2, 0): 1, (0, 2): 1}
    assert g((3, 4)) == 25


def test_example2_form_matches_display(ex2):
    nf = expand_norm_form(ex2.module_basis, ["X", "Y", "Z", "W"])
    assert nf.coeffs == EX2_FORM


def test_form_is_norm(ex2):
    nf = expand_norm_form(ex2.module_basis)
    for x in ((1, 0, 0, 0), (1, 1, 0, 0), (2, -1, 3, 1), (0, 0, 0, 1), (5, 2, -2, 1)):
        assert nf(x) == nf.element(x).norm()
        # homogeneous of degree 4
        assert nf(tuple(3 * v for v in x)) == 81 * nf(x)


def test_integral_basis_form(ex2):
    K = ex2.K
    nf = expand_norm_form([K.omega(i) for i in range(4)])
    assert nf((0, 0, 0, 1)) == 45  # N(t^3/3 + 3t) = 45 * 81 / 81
    assert all(isinstance(c, int) for c in nf.coeffs.values())


def test_bad_bases(ex1):
    K = ex1.K
    with pytest.raises(NormFormError):
        expand_norm_form([K.one()])
    with pytest.raises(NormFormError):
        expand_norm_form([K.one(), K.from_int(2)])
    with pytest.raises(NormFormError):
        expand_norm_form([])


@pytest.mark.parametrize("ell,m,x", [(17, 5, (447, 11)), (47, 3, (69, 4)), (79, 4, (173, 15))])
def test_example1_solver(ex1, ell, m, x):
    nf = expand_norm_form(ex1.module_basis)
    sols = solve_norm_eq(nf, ell, 7, m, 500)
    assert any(s.m == m and s.x == x for s in sols)
    assert all(s.sign == 1 for s in sols)  # definite form
    assert [(s.m, s.x) for s in sols] == sorted((s.m, s.x) for s in sols)
    assert nf.element(x).norm() == ell * 7 ** m


def test_example1_solver_misses_inert_prime(ex1):
    nf = expand_norm_form(ex1.module_basis)
    assert solve_norm_eq(nf, 13, 7, 5, 500) == []
    with pytest.raises(NormFormError):
        solve_norm_eq(nf, 7, 7, 3, 10)


def test_example2_solver(ex2):
    nf = expand_norm_form(ex2.module_basis)
    sols = solve_norm_eq(nf, 61, 11, 0, 3)
    assert (1, 1, 0, 0) in [s.x for s in sols]
    sols = solve_norm_eq(nf, 71, 11, 1, 3)
    assert any(s.m == 1 and s.x == (1, 2, 0, 0) for s in sols)
    assert nf((2, 8, 3, 1)) == 131 * 11 ** 3


def test_crosscheck(pic1, ex1, pic2, ex2):
    nf = expand_norm_form(ex1.module_basis)
    assert criterion_crosscheck(pic1, nf, 17, 7, 5, 500).status == "CONSISTENT"
    c = criterion_crosscheck(pic1, nf, 13, 7, 5, 500)
    assert c.status == "CONSISTENT" and c.hit is None and not c.criterion
    nf2 = expand_norm_form(ex2.module_basis)
    c = criterion_crosscheck(pic2, nf2, 61, 11, 0, 2)
    assert c.criterion and c.status == "CONSISTENT"
    assert c.to_json()["solver"] == "HIT"
    with pytest.raises(NormFormError):
        criterion_crosscheck(pic2, nf2, 3, 11, 0, 2)


def test_solution_json(ex1):
    nf = expand_norm_form(ex1.module_basis)
    s = solve_norm_eq(nf, 47, 7, 3, 100)[0]
    assert s.to_json() == {"ell": 47, "m": s.m, "sign": "+", "tuple": list(s.x), "value": s.value}
