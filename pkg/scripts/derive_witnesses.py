#!/usr/bin/env python3
"""Independent oracle for the class group block of rings/example2.toml.

Works only with sympy polynomials, rational matrices and brute-force box
search; nothing from the nrc package is imported.  Prints a TOML fragment
with the generators, witnesses and one relation per prime of norm below
the Minkowski bound.

    python3 scripts/derive_witnesses.py [--box 4]
"""

import argparse
import warnings
import itertools
import math
from fractions import Fraction

from sympy import Matrix, Poly, QQ, factor_list, resultant, symbols
from sympy.matrices.normalforms import hermite_normal_form

x = symbols("x")
F = Poly(x**4 + 15 * x**2 + 45, x, domain=QQ)
# integral basis in power-basis coordinates
OMEGA = [Poly(1, x, domain=QQ), Poly(x, x, domain=QQ),
         Poly(x**2 / 3 + 2, x, domain=QQ), Poly(x**3 / 3 + 3 * x, x, domain=QQ)]
N = 4
R1, R2 = 0, 2
DISC = 18000

B = Matrix([[Fraction(int(c.p), int(c.q)) for c in reversed(w.all_coeffs())] + [0] * (N - len(w.all_coeffs()))
            for w in OMEGA]).T  # columns = power coords of omega_j
BINV = B.inv()


def to_poly(v):
    return sum((int(c) * w for c, w in zip(v, OMEGA)), Poly(0, x, domain=QQ))


def to_coords(p):
    p = p.rem(F)
    c = [p.coeff_monomial(x**k) for k in range(N)]
    y = BINV * Matrix(c)
    out = []
    for t in y:
        if t.q != 1:
            raise ValueError("not integral")
        out.append(int(t))
    return out


TABLE = [[to_coords(OMEGA[i] * OMEGA[j]) for j in range(N)] for i in range(N)]


def mul(a, b):
    out = [0] * N
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    for k, c in enumerate(TABLE[i][j]):
                        out[k] += ai * bj * c
    return out


def norm(v):
    return int(resultant(F.as_expr(), to_poly(v).as_expr(), x))


def ideal(gens):
    """Z-basis (HNF columns) of the ideal generated by gens."""
    cols = []
    for g in gens:
        g = [int(t) for t in g]
        for j in range(N):
            e = [int(i == j) for i in range(N)]
            cols.append(mul(g, e))
    H = hermite_normal_form(Matrix(cols).T)
    return H


def ideal_norm(H):
    return abs(int(H.det()))


def same(H1, H2):
    return H1 == H2


def member_test(H):
    Hinv = H.inv()

    def inside(v):
        return all(t.q == 1 for t in Hinv * Matrix(v))

    return inside


def product(H1, H2):
    a = [[int(t) for t in H1[:, j]] for j in range(H1.cols)]
    b = [[int(t) for t in H2[:, j]] for j in range(H2.cols)]
    return ideal([mul(u, w) for u in a for w in b])


def principal_generator(H, box):
    nJ = ideal_norm(H)
    inside = member_test(H)
    best = None
    for v in itertools.product(range(-box, box + 1), repeat=N):
        if not any(v) or not inside(v):
            continue
        if abs(norm(v)) == nJ:
            key = (sum(abs(c) for c in v), v)
            if best is None or key < best[0]:
                best = (key, list(v))
    return None if best is None else best[1]


def primes_above(ell):
    if ell == 3:
        # 3 divides the index of Z[x]; the generator is found by search and
        # certified by (3, pi)^2 = 3 o_K
        for v in itertools.product(range(-1, 2), repeat=N):
            H = ideal([[3, 0, 0, 0], list(v)])
            if ideal_norm(H) == 9 and same(product(H, H), ideal([[3, 0, 0, 0]])):
                return [(H, list(v), 2)]
        raise RuntimeError("no prime above 3 found")
    out = []
    _, facs = factor_list(F.as_expr(), modulus=ell)
    for g, _ in facs:
        gp = Poly(g, x)
        coeffs = [int(c) % ell for c in reversed(gp.all_coeffs())]
        pi = to_coords(Poly(sum(c * x**k for k, c in enumerate(coeffs)), x, domain=QQ))
        H = ideal([[ell, 0, 0, 0], pi])
        out.append((H, pi, gp.degree()))
    return out


def fmt(v):
    return "[" + ", ".join(f'"{c}"' if isinstance(c, Fraction) and c.denominator != 1 else str(int(c)) for c in v) + "]"


def divide(a, b):
    """a / b in integral-basis coordinates (rational)."""
    pa, pb = to_poly(a), to_poly(b)
    inv = pb.invert(F)
    q = (pa * inv).rem(F)
    c = [q.coeff_monomial(x**k) for k in range(N)]
    y = BINV * Matrix(c)
    return [Fraction(int(t.p), int(t.q)) for t in y]


def main():
    warnings.simplefilter("ignore")
    ap = argparse.ArgumentParser()
    ap.add_argument("--box", type=int, default=4)
    ap.add_argument("--units", action="store_true", help="list small units instead")
    args = ap.parse_args()
    if args.units:
        # elements of norm +-1 inside the box, smallest first
        found = []
        for v in itertools.product(range(-2, 3), repeat=N):
            if any(v) and abs(norm(v)) == 1:
                found.append((sum(abs(c) for c in v), list(v)))
        for _, v in sorted(found)[:8]:
            print(v)
        return
    mink = math.factorial(N) / N**N * (4 / math.pi) ** R2 * math.sqrt(abs(DISC))
    table = {}
    for ell in range(2, int(mink) + 1):
        if any(ell % q == 0 for q in range(2, ell)):
            continue
        for H, pi, f in primes_above(ell):
            if ell**f <= mink:
                table.setdefault(ell, []).append((H, pi))
    g11 = primes_above(11)[0]
    g2 = primes_above(2)[0]
    gens = [(11, g11), (2, g2)]
    wits = []
    for _, (H, pi, _) in gens:
        w = principal_generator(product(H, H), args.box)
        if w is None:
            raise SystemExit("generator square not principal inside the box")
        wits.append(w)
    print("# generated by scripts/derive_witnesses.py (sympy resultants, box search)")
    print("[classgroup]")
    print("invariants = [2, 2]")
    print("witnesses = [" + ", ".join(fmt(w) for w in wits) + "]")
    for p, (_, pi, _) in gens:
        print(f"[[classgroup.generators]]\np = {p}\npi = {fmt(pi)}")
    for ell, plist in sorted(table.items()):
        for H, pi in plist:
            for v in itertools.product((0, 1), repeat=2):
                J = H
                for e, (_, (Hg, _, _)) in zip(v, gens):
                    if e:
                        J = product(J, Hg)
                g = principal_generator(J, args.box)
                if g is None:
                    continue
                den = [1, 0, 0, 0]
                for e, w in zip(v, wits):
                    if e:
                        den = mul(den, w)
                gam = divide(g, den)
                print(f"[[classgroup.relations]]\np = {ell}\npi = {fmt(pi)}\nvector = {list(v)}\n"
                      f"gamma = {fmt(gam)}")
                break
            else:
                raise SystemExit(f"no relation for a prime above {ell} inside the box")


if __name__ == "__main__":
    main()
