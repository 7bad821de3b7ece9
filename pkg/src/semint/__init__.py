"""Seminormed integration on finite spaces, with convergence-mode analysis.

The package provides validated capacities (monotone normalized set
functions on a finite power set), validated semicopulas, an exact
integration routine for the associated seminormed integral together with a
brute-force grid oracle, and tail-based checks of three convergence modes
for function sequences, including executable audits of the two one-way
implications between them.
"""

from semint.capacity import (
    MAX_POINTS,
    Capacity,
    CapacityViolation,
    FiniteSpace,
    random_capacity,
    validate_table,
)
from semint.convergence import (
    DEFAULT_EPSILON,
    BUILTIN_RATES,
    ConvergenceReport,
    FnSequence,
    ImplicationReport,
    check_in_capacity,
    check_in_mean,
    check_strict,
    counterexample_constant,
    default_t_grid,
    default_tail_start,
    random_audit,
    random_strict_sequence,
    theorem1_audit,
    theorem2_audit,
)
from semint.errors import (
    BadDistortionError,
    BadGridError,
    BadRateError,
    BadWeightsError,
    CapacityError,
    DomainError,
    MaxNotOneError,
    NotMonotoneError,
    NotNormalizedError,
    SchemaError,
    SemintError,
    SpaceMismatchError,
)
from semint.integral import (
    IntegralResult,
    integrate,
    integrate_grid_oracle,
    shilkret,
    sugeno,
)
from semint.measurable import (
    MeasurableFn,
    distinct_values,
    level_set,
    residual,
    strict_support,
    survival,
)
from semint.semicopula import (
    AXIOM_TOL,
    BUILTIN_KINDS,
    BUILTINS,
    LUKASIEWICZ,
    MIN,
    PROD_MAX,
    PRODUCT,
    AxiomViolation,
    Semicopula,
    ValidationReport,
    builtin,
    validate_semicopula,
)

__version__ = "0.1.0"

__all__ = [
    "AXIOM_TOL",
    "AxiomViolation",
    "BadDistortionError",
    "BadGridError",
    "BadRateError",
    "BadWeightsError",
    "BUILTIN_KINDS",
    "BUILTIN_RATES",
    "BUILTINS",
    "Capacity",
    "CapacityError",
    "CapacityViolation",
    "ConvergenceReport",
    "DEFAULT_EPSILON",
    "DomainError",
    "FiniteSpace",
    "FnSequence",
    "ImplicationReport",
    "IntegralResult",
    "LUKASIEWICZ",
    "MAX_POINTS",
    "MaxNotOneError",
    "MeasurableFn",
    "MIN",
    "NotMonotoneError",
    "NotNormalizedError",
    "PROD_MAX",
    "PRODUCT",
    "SchemaError",
    "Semicopula",
    "SemintError",
    "SpaceMismatchError",
    "ValidationReport",
    "builtin",
    "check_in_capacity",
    "check_in_mean",
    "check_strict",
    "counterexample_constant",
    "default_t_grid",
    "default_tail_start",
    "distinct_values",
    "integrate",
    "integrate_grid_oracle",
    "level_set",
    "random_audit",
    "random_capacity",
    "random_strict_sequence",
    "residual",
    "shilkret",
    "strict_support",
    "sugeno",
    "survival",
    "theorem1_audit",
    "theorem2_audit",
    "validate_semicopula",
    "validate_table",
]
