"""nrc: command line front end.  TOML in, JSON out.

Exit codes: 0 ok, 1 computation error, 2 input error, 3 a check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .config import FieldSpec, InputError, RingSpec, build_ring, class_group_for, resolve

log = logging.getLogger("nrc")

EXIT_OK, EXIT_COMPUTE, EXIT_INPUT, EXIT_FAIL = 0, 1, 2, 3


def _threads() -> int:
    # accepted for compatibility; every computation runs in this process
    raw = os.environ.get("NRC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"NRC_THREADS must be an integer, got {raw!r}")


def _emit(obj, pretty: bool):
    if not pretty:
        print(json.dumps(obj, indent=2))
        return
    _pretty(obj)


def _pretty(obj, indent=0):
    pad = " " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                print(f"{pad}{k}:")
                _pretty(v, indent + 2)
            else:
                print(f"{pad}{k}: {_short(v)}")
    elif isinstance(obj, list) and obj and all(isinstance(r, dict) for r in obj):
        cols = list(obj[0].keys())
        rows = [[_short(r.get(c)) for c in cols] for r in obj]
        w = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
        print(pad + "  ".join(c.ljust(w[i]) for i, c in enumerate(cols)))
        for r in rows:
            print(pad + "  ".join(x.ljust(w[i]) for i, x in enumerate(r)))
    elif isinstance(obj, list):
        for v in obj:
            print(f"{pad}- {_short(v)}")
    else:
        print(f"{pad}{_short(obj)}")


def _flat(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat(x) for x in v)


def _short(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return str(v)


def _is_ring_file(path) -> bool:
    from .config import _read

    return "field" in _read(resolve(path))


def _field_and_cl(path, pip_radius):
    if _is_ring_file(path):
        ctx = build_ring(RingSpec.load(path), pip_radius)
        return ctx.K, ctx.cl
    K = FieldSpec.load(path).build()
    return K, class_group_for(K, None, [], path, pip_radius)


# -- subcommands ---------------------------------------------------------------

def cmd_field(args):
    if _is_ring_file(args.file):
        K = RingSpec.load(args.file).field.build()
    else:
        K = FieldSpec.load(args.file).build()
    return {"name": K.name, "poly": K.f, "degree": K.n, "disc": K.disc,
            "signature": [K.r1, K.r2], "index": K.index,
            "integral_basis": [[str(c) for c in row] for row in K.basis],
            "irreducibility_witness": K.irreducibility_witness}


def cmd_factor(args):
    from .ideal import decompose_prime

    if _is_ring_file(args.file):
        K = RingSpec.load(args.file).field.build()
    else:
        K = FieldSpec.load(args.file).build()
    ps = decompose_prime(K, args.ell)
    return {"ell": args.ell, "primes": [P.to_json() | {"norm": P.norm()} for P in ps]}


def cmd_classgroup(args):
    K, cl = _field_and_cl(args.file, args.pip_radius)
    return {"disc": K.disc, "method": cl.method} | cl.to_json() | {
        "units": [u.to_json() for u in cl.units()]}


def cmd_tclassgroup(args):
    from .classgroup import t_units, tclassgroup

    ctx = build_ring(RingSpec.load(args.file), args.pip_radius)
    R = ctx.ring
    tc = tclassgroup(ctx.cl, R.inverted_primes)
    return tc.to_json() | {"t_units": [u.to_json() for u in t_units(ctx.cl, R.inverted_primes)]}


def _picard(args):
    from .picard import picard_group

    ctx = build_ring(RingSpec.load(args.file), args.pip_radius)
    return ctx, picard_group(ctx.ring, ctx.cl)


def cmd_picard(args):
    ctx, pic = _picard(args)
    return pic.to_json() | {"ring": ctx.ring.describe()}


def cmd_congruence(args):
    from .ray import congruence_subgroup

    ctx, pic = _picard(args)
    cs = congruence_subgroup(pic, ctx.cl)
    return cs.to_json() | {"ray_order": cs.ray.order(),
                           "residue_order": cs.ray.res_order,
                           "unit_image_order": cs.ray.unit_image_order}


def cmd_split(args):
    from .ray import split_exclusions, split_scan

    ctx, pic = _picard(args)
    bound = args.range or ctx.spec.solver.range
    rows = split_scan(pic, bound, args.exclude, args.degree_one_exists)
    return {"range": bound, "semantics": "degree-one-exists" if args.degree_one_exists else "complete",
            "excluded": sorted(split_exclusions(pic) | set(args.exclude)),
            "split": [ell for ell, v in rows if v],
            "rows": [{"ell": ell, "splits": v} for ell, v in rows]}


def _parse_poly(s):
    try:
        return [int(c) for c in s.replace(" ", "").split(",") if c != ""]
    except ValueError:
        raise InputError(f"--poly expects comma separated integers, constant term first: {s!r}")


def cmd_verify_splitting(args):
    from .ray import verify_splitting

    ctx, pic = _picard(args)
    g = _parse_poly(args.poly) if args.poly else ctx.spec.class_poly
    if not g:
        raise InputError("no polynomial: pass --poly or add [check] class_poly to the ring file")
    bound = args.range or ctx.spec.solver.range
    rows = verify_splitting(pic, g, bound, args.exclude)
    return {"poly": g, "range": bound, "rows": rows,
            "all_agree": all(r["status"] != "DISAGREE" for r in rows)}


def cmd_normform(args):
    from .normform import criterion_crosscheck, expand_norm_form, solve_norm_eq

    spec = RingSpec.load(args.file)
    ctx = build_ring(spec, args.pip_radius)
    nf = expand_norm_form(ctx.module_basis, spec.variables)
    a = args.a if args.a is not None else (spec.a or 1)
    max_m = args.max_m if args.max_m is not None else spec.solver.max_m
    radius = args.radius if args.radius is not None else spec.solver.radius
    if args.action == "solve":
        if args.ell is None:
            raise InputError("normform solve needs --ell")
        sols = solve_norm_eq(nf, args.ell, a, max_m, radius)
        return {"form": nf.to_string(), "max_m": max_m, "radius": radius,
                "solutions": [s.to_json() for s in sols]}
    from .picard import picard_group
    from .ray import split_exclusions

    pic = picard_group(ctx.ring, ctx.cl)
    bound = args.range or spec.solver.range
    skip = split_exclusions(pic) | {p for p in range(2, bound) if a % p == 0}
    from sympy import primerange

    rows = []
    for ell in primerange(2, bound):
        if ell in skip:
            continue
        rows.append(criterion_crosscheck(pic, nf, ell, a, max_m, radius).to_json())
    return {"form": nf.to_string(), "max_m": max_m, "radius": radius, "rows": rows,
            "fail": [r["ell"] for r in rows if r["status"] == "FAIL"]}


def _run_checks(checks, pretty):
    if pretty:
        for c in checks:
            print(c.line())
    else:
        print(json.dumps([c.to_json() for c in checks], indent=2))
    return EXIT_OK if all(c.ok for c in checks) else EXIT_FAIL


def cmd_example1(args):
    from .pipelines import example1_checks

    return _run_checks(example1_checks(args.file or "rings/example1.toml"), args.pretty)


def cmd_example2(args):
    from .pipelines import example2_checks

    return _run_checks(example2_checks(args.file or "rings/example2.toml"), args.pretty)


# -- parser ----------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human readable tables")
    common.add_argument("--pip-radius", type=float, default=8.0,
                        help="enumeration radius factor for principal ideal tests")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="nrc", description="Picard groups and ring class field data of number rings")
    ap.add_argument("--version", action="version", version=f"nrc {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_, file_required=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file", nargs=None if file_required else "?")
        p.set_defaults(fn=fn)
        return p

    add("field", cmd_field, "field invariants")
    p = add("factor", cmd_factor, "decompose a rational prime")
    p.add_argument("--ell", type=int, required=True)
    add("classgroup", cmd_classgroup, "class group of the field")
    add("tclassgroup", cmd_tclassgroup, "class group of the T-integers")
    add("picard", cmd_picard, "Picard group of the ring")
    add("congruence", cmd_congruence, "congruence subgroup of the ring class field")
    for name, fn in (("split", cmd_split), ("verify-splitting", cmd_verify_splitting)):
        p = add(name, fn, "split primes" if name == "split" else "compare with a class polynomial")
        p.add_argument("--range", type=int, default=None)
        p.add_argument("--exclude", type=lambda s: [int(x) for x in s.split(",") if x], default=[])
        if name == "split":
            p.add_argument("--degree-one-exists", action="store_true",
                           help="some degree-1 prime above ell has trivial class")
        else:
            p.add_argument("--poly", default=None, help="c0,...,cn (constant term first)")
    p = sub.add_parser("normform", parents=[common], help="norm form equations")
    p.add_argument("action", choices=["solve", "check"])
    p.add_argument("file")
    p.add_argument("--ell", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--max-m", type=int)
    p.add_argument("--radius", type=int)
    p.add_argument("--range", type=int)
    p.set_defaults(fn=cmd_normform)
    add("example1", cmd_example1, "run the first worked example", file_required=False)
    add("example2", cmd_example2, "run the second worked example", file_required=False)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _threads()
        out = args.fn(args)
        if isinstance(out, int):
            return out
        _emit(out, args.pretty)
        return EXIT_OK
    except InputError as e:
        print(f"nrc: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, RuntimeError, ArithmeticError) as e:
        print(f"nrc: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
