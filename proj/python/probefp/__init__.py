"""Fingerprints of finite-state game strategies against parametrized probes."""

from ._core import (
    Error,
    NumericError,
    ParseError,
    Player,
    Probe,
    ReducibleChainError,
    SwellError,
    ValidationError,
    __version__,
    distance_matrix,
    estimate,
    eval_expr,
    fingerprint_at,
    fingerprint_grid,
    joss_ann,
    parse_expr,
    parse_player,
    parse_probe,
    symbolic_fingerprint,
    validate_probe,
)

__all__ = [
    "Error",
    "NumericError",
    "ParseError",
    "Player",
    "Probe",
    "ReducibleChainError",
    "SwellError",
    "ValidationError",
    "__version__",
    "distance_matrix",
    "estimate",
    "eval_expr",
    "fingerprint_at",
    "fingerprint_grid",
    "joss_ann",
    "parse_expr",
    "parse_player",
    "parse_probe",
    "symbolic_fingerprint",
    "validate_probe",
]
