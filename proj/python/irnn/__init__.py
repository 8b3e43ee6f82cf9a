"""Low-rank matrix recovery with iteratively reweighted nuclear norms."""

from ._core import (
    ConfigurationError,
    ConsistencyError,
    DomainError,
    NumericalError,
    ParameterError,
    Penalty,
    PenaltyKind,
    PreconditionError,
    SolveReport,
    complete,
    complete_convex,
    corrupt_random,
    gen_lowrank,
    inpaint,
    penalty_kinds,
    psnr,
    read_png,
    relative_error,
    sample_mask,
    singular_values,
    svd,
    weighted_nuclear_norm,
    weights_from_singular_values,
    write_png,
    wsvt,
)

__all__ = [name for name in dir() if not name.startswith("_")]
