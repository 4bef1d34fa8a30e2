"""Equilibrium cutoffs, effect decompositions, a discrete-time oracle and a
path simulator for the two-player chasing contest."""

from chasing.core import (
    ContestParams,
    DomainError,
    FeasibilityReport,
    NormalizedIndices,
    derive_indices,
    indices,
    params_from_indices,
    validate,
)
from chasing.roots import BracketError, RootResult, bisect

__all__ = [
    "BracketError",
    "ContestParams",
    "DomainError",
    "FeasibilityReport",
    "NormalizedIndices",
    "RootResult",
    "bisect",
    "derive_indices",
    "indices",
    "params_from_indices",
    "validate",
]
