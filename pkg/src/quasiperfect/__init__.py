"""Quasi-perfect q-ary codes with covering radius 2 by switching GRM codes."""

from .errors import BudgetExceeded, ConsistencyError, FormatError, QpcError
from .field import FieldElement, FieldSpec, build_field, field_of_size
from .geometry import AffineSpace, Line, q_analog
from .grm import LinearCode, build_grm, build_target_code, dual_order, grm_dimension, grm_min_distance
from .switching import (
    CosetIndex,
    RiSubspace,
    SwitchedCode,
    Triple,
    apply_switch,
    build_ri,
    coset_partition,
    member,
    recover_lambdas,
    triple_on_line,
)
from .verification import CodeReport, CountingBound, Fingerprint, counting_bound

__all__ = [
    "AffineSpace",
    "BudgetExceeded",
    "CodeReport",
    "ConsistencyError",
    "CosetIndex",
    "CountingBound",
    "FieldElement",
    "FieldSpec",
    "Fingerprint",
    "FormatError",
    "Line",
    "LinearCode",
    "QpcError",
    "RiSubspace",
    "SwitchedCode",
    "Triple",
    "apply_switch",
    "build_field",
    "build_grm",
    "build_ri",
    "build_target_code",
    "coset_partition",
    "counting_bound",
    "dual_order",
    "field_of_size",
    "grm_dimension",
    "grm_min_distance",
    "member",
    "q_analog",
    "recover_lambdas",
    "triple_on_line",
]
