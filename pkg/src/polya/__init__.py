"""Polya groups of real quadratic and totally real bi-quadratic fields."""

from .biquad import BiquadraticField, beta_certificate, make_biquad, polya_order
from .errors import BudgetExceeded, InconsistencyError, InvalidInput, PolyaError, SearchExhausted
from .family import (
    FamilyInstance,
    SearchOptions,
    SignMatrix,
    build_family_instance,
    find_prime_tuple,
    trotter_applies,
    trotter_pattern,
    verify_theorem_instance,
)
from .oracle import polya_direct
from .quadfield import QuadraticField, fundamental_unit, hilbert_polya_order, make_field, norm_pm2_solvable
from .sqclass import SquareClass, subgroup_generated

__all__ = [
    "BiquadraticField",
    "BudgetExceeded",
    "FamilyInstance",
    "InconsistencyError",
    "InvalidInput",
    "PolyaError",
    "QuadraticField",
    "SearchExhausted",
    "SearchOptions",
    "SignMatrix",
    "SquareClass",
    "beta_certificate",
    "build_family_instance",
    "find_prime_tuple",
    "fundamental_unit",
    "hilbert_polya_order",
    "make_biquad",
    "make_field",
    "norm_pm2_solvable",
    "polya_direct",
    "polya_order",
    "subgroup_generated",
    "trotter_applies",
    "trotter_pattern",
    "verify_theorem_instance",
]
