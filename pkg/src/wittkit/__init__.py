"""Exact quadratic-form, Witt ring and Grothendieck-Witt computations over Q, R, F_q, Q_p and k(T)."""

from .arith_fields import (
    FiniteField, FunctionField, PadicField, Rationals, RealClosed, SquareClosed, parse_field,
)
from .errors import (
    DomainError, FieldMismatchError, InternalError, ParseError, UnsupportedError, WittkitError,
)
from .quad_forms import DiagonalForm, invariants, is_isotropic, witt_decompose, witt_key
from .witt_rings import GWClass, TorsionLevelElement, WittClass, boxplus, boxplus_inverse
from .unit_groups import is_unit, unit_decompose, unit_inverse, verify_pushout_square
from .residue_theory import (
    ValuationSpec, contraction_classify, first_residue, milnor_lift, milnor_total_residue,
    second_residue, specialization,
)
from .gersten_complex import build_complex, h1_p1, is_orientable_ST, sphere_cohomology
from .cazanave_maps import bezout_form, clutching_class, family_from_form

__version__ = "0.1.0"
