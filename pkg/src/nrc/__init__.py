"""nrc: Picard groups, ring class field data and norm form equations for number rings.

Exact arithmetic throughout; floating point only steers searches whose
results are re-checked exactly.
"""

__version__ = "0.1.0"

from .field import FieldElement, NumberField, load_field
from .ideal import FracIdeal, Modulus, PrimeIdeal, decompose_prime, factor_ideal, valuation
from .abgroup import FinAbGroup
from .classgroup import ClassGroup, classgroup_imag_quadratic, tclassgroup, verify_classgroup_input
from .picard import NumberRing, Order, picard_group
from .ray import congruence_subgroup, ray_class_group, splits_completely
from .normform import expand_norm_form, solve_norm_eq

__all__ = [
    "FieldElement", "NumberField", "load_field", "FracIdeal", "Modulus", "PrimeIdeal",
    "decompose_prime", "factor_ideal", "valuation", "FinAbGroup", "ClassGroup",
    "classgroup_imag_quadratic", "tclassgroup", "verify_classgroup_input", "NumberRing",
    "Order", "picard_group", "congruence_subgroup", "ray_class_group", "splits_completely",
    "expand_norm_form", "solve_norm_eq",
]
