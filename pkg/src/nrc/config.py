"""TOML input files for fields and number rings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import tomli

from .classgroup import (ClassGroup, DEFAULT_PIP_RADIUS, classgroup_imag_quadratic,
                         is_imaginary_quadratic, verify_classgroup_input)
from .field import NumberField, load_field
from .ideal import prime_from_generators, register_primes

DATA_DIR = Path(__file__).parent / "data"


class InputError(ValueError):
    """Malformed input file; the message names the file and key."""


def _read(path) -> dict:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except FileNotFoundError as e:
        raise InputError(f"{path}: no such file") from e
    except tomli.TOMLDecodeError as e:
        # tomli messages carry "(at line L, column C)"
        raise InputError(f"{path}: {e}") from e


def resolve(path) -> Path:
    """Paths that do not exist are also looked up in the shipped data."""
    p = Path(path)
    if p.exists():
        return p
    alt = DATA_DIR / p
    if alt.exists():
        return alt
    alt = DATA_DIR / p.parent.name / p.name
    return alt if alt.exists() else p


def _fr(x):
    return Fraction(str(x))


@dataclass
class FieldSpec:
    path: Path
    name: str
    poly: list[int]
    basis: list | None = None
    primes: list[dict] = field(default_factory=list)

    @classmethod
    def load(cls, path) -> "FieldSpec":
        path = resolve(path)
        d = _read(path)
        if "poly" not in d:
            raise InputError(f"{path}: missing key 'poly' (coefficients, constant term first)")
        try:
            poly = [int(c) for c in d["poly"]]
        except (TypeError, ValueError) as e:
            raise InputError(f"{path}: 'poly' must be a list of integers") from e
        basis = None
        if "basis" in d:
            try:
                basis = [[_fr(c) for c in row] for row in d["basis"]]
            except (TypeError, ValueError, ZeroDivisionError) as e:
                raise InputError(f"{path}: 'basis' entries must be integers or \"p/q\" strings") from e
        return cls(path, d.get("name", path.stem), poly, basis, list(d.get("primes", [])))

    def build(self) -> NumberField:
        try:
            K = load_field(self.poly, self.basis, name=self.name)
        except ValueError as e:
            raise InputError(f"{self.path}: {e}") from e
        by_p: dict = {}
        for i, pr in enumerate(self.primes):
            try:
                P = prime_from_generators(K, int(pr["p"]), K.from_fractions([_fr(c) for c in pr["pi"]]))
            except (KeyError, ValueError) as e:
                raise InputError(f"{self.path}: primes[{i}]: {e}") from e
            by_p.setdefault(int(pr["p"]), []).append(P)
        for p, ps in by_p.items():
            try:
                register_primes(K, p, ps)
            except ValueError as e:
                raise InputError(f"{self.path}: primes above {p}: {e}") from e
        return K


@dataclass
class SolverConfig:
    max_m: int = 7
    radius: int = 2500
    range: int = 100
    exclude: list[int] = field(default_factory=list)


@dataclass
class RingSpec:
    path: Path
    field: FieldSpec
    order: object = "maximal"        # "maximal", "power" or a list of generator coordinates
    a: int | None = None
    eps: list | None = None
    classgroup: dict | None = None
    units: list = field(default_factory=list)
    class_poly: list[int] | None = None
    variables: list[str] = field(default_factory=list)
    solver: SolverConfig = field(default_factory=SolverConfig)

    @classmethod
    def load(cls, path) -> "RingSpec":
        path = resolve(path)
        d = _read(path)
        if "field" not in d:
            raise InputError(f"{path}: missing key 'field'")
        fpath = path.parent / d["field"]
        fs = FieldSpec.load(fpath if fpath.exists() else d["field"])
        if "a" in d and "epsilon" in d:
            raise InputError(f"{path}: give either 'a' or 'epsilon', not both")
        sv = d.get("solver", {})
        try:
            solver = SolverConfig(int(sv.get("max_m", 7)), int(sv.get("radius", 2500)),
                                  int(sv.get("range", 100)), [int(x) for x in sv.get("exclude", [])])
        except (TypeError, ValueError) as e:
            raise InputError(f"{path}: [solver] values must be integers") from e
        cp = d.get("check", {}).get("class_poly")
        return cls(path, fs, d.get("order_basis", "maximal"), d.get("a"), d.get("epsilon"),
                   d.get("classgroup"), list(d.get("units", [])),
                   [int(c) for c in cp] if cp else None,
                   list(d.get("normform", {}).get("variables", [])), solver)


@dataclass
class Context:
    """Everything built from a ring file."""

    spec: RingSpec
    K: NumberField
    cl: ClassGroup
    ring: object
    module_basis: list      # Z-basis of the order as entered, used for norm forms


def class_group_for(K: NumberField, block: dict | None, units, path="",
                    pip_radius: float = DEFAULT_PIP_RADIUS) -> ClassGroup:
    if block is None:
        if is_imaginary_quadratic(K):
            return classgroup_imag_quadratic(K)
        if K.n == 1:
            raise InputError(f"{path}: degree one fields are not supported")
        raise InputError(f"{path}: this field needs a [classgroup] block with verified data")
    data = dict(block)
    data.setdefault("generators", [])
    data.setdefault("witnesses", [])
    data.setdefault("relations", [])
    return verify_classgroup_input(K, data, units=units, pip_radius=pip_radius)


def build_ring(spec: RingSpec, pip_radius: float = DEFAULT_PIP_RADIUS) -> Context:
    from .picard import NumberRing, Order

    K = spec.field.build()
    if spec.order == "maximal":
        basis = [K.omega(i) for i in range(K.n)]
    elif spec.order == "power":
        basis = [K.gen() ** i for i in range(K.n)]
    elif isinstance(spec.order, list):
        basis = [K.from_fractions([_fr(c) for c in g]) for g in spec.order]
    else:
        raise InputError(f"{spec.path}: 'order_basis' must be \"maximal\", \"power\" or a list of elements")
    try:
        o = Order.from_elements(K, basis)
    except ValueError as e:
        raise InputError(f"{spec.path}: order_basis: {e}") from e
    if spec.eps is not None:
        eps = K.from_fractions([_fr(c) for c in spec.eps])
    else:
        eps = int(spec.a) if spec.a is not None else 1
    units = [K.from_fractions([_fr(c) for c in u]) for u in spec.units]
    cl = class_group_for(K, spec.classgroup, units, spec.path, pip_radius)
    R = NumberRing(o, eps)
    return Context(spec, K, cl, R, basis)
