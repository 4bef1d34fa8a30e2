"""Model primitives, normalized indices and feasibility checks.

Every cutoff depends on the primitives only through (delta, phi, lambda, T);
v and c re-enter only through payoff-level quantities such as v - c/lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class DomainError(ValueError):
    """Raised when a formula is evaluated outside its domain."""


@dataclass(frozen=True)
class ContestParams:
    """Primitives: arrival rate, prize, cost rate, present bias and deadline."""

    lam: float
    v: float
    c: float
    beta: float
    T: float


@dataclass(frozen=True)
class NormalizedIndices:
    """Leader bias severity delta, cost index phi, arrival rate and deadline."""

    delta: float
    phi: float
    lam: float = 1.0
    T: float = 1.0

    @property
    def lambdaT(self) -> float:
        return self.lam * self.T


@dataclass(frozen=True)
class FeasibilityReport:
    delta_ok: bool
    phi_ok: bool
    x0_interior: bool
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return self.delta_ok and self.phi_ok


def derive_indices(params: ContestParams) -> NormalizedIndices:
    """Map primitives to (delta, phi, lambda, T).

    Raises:
        DomainError: if lambda*v == c or a primitive is not positive.
    """
    lam, v, c, beta, T = params.lam, params.v, params.c, params.beta, params.T
    if min(lam, v, c, beta, T) <= 0:
        raise DomainError("all primitives must be strictly positive")
    if lam * v == c:
        raise DomainError("lambda*v == c: both indices are undefined")
    delta = (beta * lam * v - c) / (beta * lam * v - beta * c)
    phi = c / (lam * v - c)
    return NormalizedIndices(delta, phi, lam, T)


def indices(delta: float, phi: float, lam: float = 1.0,
            T: float = 1.0) -> NormalizedIndices:
    return NormalizedIndices(float(delta), float(phi), float(lam), float(T))


def params_from_indices(idx: NormalizedIndices, c: float = 1.0) -> ContestParams:
    """Primitives reproducing the given indices (requires phi > 0, delta < 1)."""
    lam = idx.lam
    if idx.phi <= 0 or idx.delta >= 1:
        raise DomainError("need phi > 0 and delta < 1")
    v = c * (1.0 + 1.0 / idx.phi) / lam
    beta = c / (lam * v - idx.delta * (lam * v - c))
    return ContestParams(lam, v, c, beta, idx.T)


def x0_interior(idx: NormalizedIndices) -> bool:
    return idx.delta < -math.expm1(-idx.lambdaT)


def validate(params: ContestParams | NormalizedIndices) -> FeasibilityReport:
    """Report which feasibility conditions hold; never raises."""
    notes = []
    if isinstance(params, ContestParams):
        p = params
        if min(p.lam, p.v, p.c, p.beta, p.T) <= 0 or p.beta > 1:
            return FeasibilityReport(False, False, False, ("primitives out of range",))
        if p.beta * p.lam * p.v < p.c:
            notes.append("leader never works: beta*lambda*v < c")
        if p.lam * p.v < 2 * p.c:
            notes.append("chaser never works in the chasing stage: lambda*v < 2c")
        try:
            idx = derive_indices(p)
        except DomainError as exc:
            return FeasibilityReport(False, False, False, tuple(notes) + (str(exc),))
    else:
        idx = params
    delta_ok = 0.0 < idx.delta < 1.0
    phi_ok = 0.0 < idx.phi <= 1.0
    interior = delta_ok and x0_interior(idx)
    if not delta_ok:
        notes.append("delta outside (0, 1)")
    if not phi_ok:
        notes.append("phi outside (0, 1]")
    if delta_ok and not interior:
        notes.append("solo start is a corner: delta >= 1 - exp(-lambda*T)")
    return FeasibilityReport(delta_ok, phi_ok, interior, tuple(dict.fromkeys(notes)))
