"""Backward heat conduction in a two-slab composite."""

from ._twoslab import (
    RNG_NAME,
    EigenValuePair,
    Error,
    Material,
    NumericalError,
    RunConfig,
    SlabSystem,
    ValidationError,
    bound_suite,
    copper_molybdenum,
    find_eigenvalues,
    run_example,
    threshold,
    unit_system,
    validate_system,
    write_example,
)

__all__ = [
    "RNG_NAME",
    "EigenValuePair",
    "Error",
    "Material",
    "NumericalError",
    "RunConfig",
    "SlabSystem",
    "ValidationError",
    "bound_suite",
    "copper_molybdenum",
    "find_eigenvalues",
    "run_example",
    "threshold",
    "unit_system",
    "validate_system",
    "write_example",
]
