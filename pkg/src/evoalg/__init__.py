"""Toolkit for finite-dimensional evolution algebras.

Covers three areas: classification of 2-dimensional real and complex
evolution algebras into canonical forms, construction and verification of
chains of evolution algebras (two-parameter families whose structure
matrices satisfy the Chapman-Kolmogorov equation), and Rota-Baxter
operators of weight 0 and 1 on the canonical 2-dimensional complex
algebras.
"""

from .core import (
    AlgebraElement,
    DimensionMismatchError,
    EvoalgError,
    MatrixFormatError,
    RotaBaxterOperator,
    StructureMatrix,
    multiply,
    rb_residual,
    rb_residual_norm,
)
from .classify2d import (
    AlgebraClass,
    BasisChange,
    UnclassifiableError,
    canonical_matrix,
    classify,
    find_isomorphism,
    is_E4_shape,
    rescale_permute,
)
from .exprlang import Expr, ExprError, eval_expr, parse_expr
from .cea import (
    ChainFamilySpec,
    ConstraintViolation,
    OutOfDomainError,
    classify_dynamics,
    family_matrix,
    property_diagram,
    verify_cantor,
    verify_ck,
)
from .rotabaxter import catalog, derive_system, search, verify_exclusions, verify_family

__all__ = [
    "AlgebraClass",
    "AlgebraElement",
    "BasisChange",
    "ChainFamilySpec",
    "ConstraintViolation",
    "DimensionMismatchError",
    "EvoalgError",
    "Expr",
    "ExprError",
    "MatrixFormatError",
    "OutOfDomainError",
    "RotaBaxterOperator",
    "StructureMatrix",
    "UnclassifiableError",
    "canonical_matrix",
    "catalog",
    "classify",
    "classify_dynamics",
    "derive_system",
    "eval_expr",
    "family_matrix",
    "find_isomorphism",
    "is_E4_shape",
    "multiply",
    "parse_expr",
    "property_diagram",
    "rb_residual",
    "rb_residual_norm",
    "rescale_permute",
    "search",
    "verify_cantor",
    "verify_ck",
    "verify_exclusions",
    "verify_family",
]

__version__ = "0.1.0"
