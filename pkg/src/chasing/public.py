"""Equilibrium of the public chasing contest, where the chaser's first
breakthrough is announced immediately.

The leader uses an x-start rule (a later start in the chasing stage, an
earlier one once the chaser has caught up) and the chaser a y-stop rule.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from chasing.core import DomainError, NormalizedIndices, x0_interior
from chasing.roots import BracketError, bisect

DEFAULT_TOL = 1e-12


class PublicCase(str, enum.Enum):
    CaseI = "CaseI"
    CaseII = "CaseII"
    CaseIII = "CaseIII"


@dataclass(frozen=True)
class PublicEquilibrium:
    case: PublicCase
    x1F: float
    x0F: float
    yF: float
    x0: float
    yHF: float
    corner_x1F: bool
    corner_yF: bool
    corner_x0F: bool
    residual: float = 0.0


def xtol(idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> float:
    return tol * max(1.0, idx.T)


def leader_start_solo(idx: NormalizedIndices) -> float:
    """Start time of a leader racing alone against the deadline."""
    if not x0_interior(idx):
        return 0.0
    return max(0.0, idx.T + math.log1p(-idx.delta) / idx.lam)


def _half_horizon(q: float, idx: NormalizedIndices) -> float:
    # interior root of 1/2 (1 - exp(-2 lam (T - t))) = q, else the corner 0
    if q < 0.5 * -math.expm1(-2.0 * idx.lambdaT):
        return max(0.0, idx.T + math.log1p(-2.0 * q) / (2.0 * idx.lam))
    return 0.0


def leader_start_contest(idx: NormalizedIndices) -> float:
    """Leader start once the chaser holds one breakthrough."""
    return _half_horizon(idx.delta, idx)


def chaser_stop_high(idx: NormalizedIndices) -> float:
    """Chaser stop when the leader works from the chaser's first breakthrough on."""
    return _half_horizon(idx.phi, idx)


def chaser_stop_low(idx: NormalizedIndices) -> float:
    """Chaser stop when delta < phi."""
    if idx.delta >= idx.phi:
        raise DomainError("chaser_stop_low requires delta < phi")
    if idx.phi >= 1.0:
        return 0.0
    x1F = leader_start_contest(idx)
    y = x1F - math.log((1.0 - idx.delta) / (1.0 - idx.phi)) / idx.lam
    return max(0.0, y)


def g_payoff(y: float, t: float, idx: NormalizedIndices) -> float:
    """Leader win probability from working on [t, end] when the chaser stops at y."""
    if t > y or y > idx.T:
        raise DomainError(f"need t <= y <= T, got t={t}, y={y}, T={idx.T}")
    lam, T = idx.lam, idx.T
    s = y - t
    return 0.25 * (3.0 - 2.0 * lam * s * math.exp(-2.0 * lam * (T - t))
                   + math.exp(-2.0 * lam * s) - 4.0 * math.exp(-lam * (T - 2.0 * t + y)))


def g_turning_point(y: float, idx: NormalizedIndices) -> float:
    """Time where g(y, .) switches from decreasing to increasing (may be <= 0 or >= y)."""
    A = math.exp(-idx.lam * (idx.T - y))
    return y - (1.0 - 4.0 * A + A * A) / (2.0 * idx.lam * A * A)


def _g_root(y: float, idx: NormalizedIndices, tol: float) -> tuple[float, float]:
    # root of g(y, t) = delta on the decreasing branch of g(y, .)
    hi = min(y, max(0.0, g_turning_point(y, idx)))
    f = lambda t: g_payoff(y, t, idx) - idx.delta
    if f(0.0) <= 0.0:
        return 0.0, 0.0
    if f(hi) >= 0.0:
        if hi == y:
            return hi, abs(f(hi))
        raise BracketError(f"g(y, t) stays above delta on its decreasing branch (y={y})")
    r = bisect(f, 0.0, hi, xtol(idx, tol))
    return r.root, r.residual


def caseIII_interior(idx: NormalizedIndices) -> bool:
    """Whether the chasing-stage start is strictly positive in CaseIII."""
    yHF = chaser_stop_high(idx)
    if yHF <= 0.0:
        return False
    k = 1.0 / (1.0 - 2.0 * idx.phi)
    lhs = 3.0 - (4.0 * math.sqrt(k) + 2.0 * idx.lambdaT - k - math.log(k)) * math.exp(-2.0 * idx.lambdaT)
    return lhs > 4.0 * idx.delta


def leader_start_chasing_caseIII(idx: NormalizedIndices,
                                 tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Chasing-stage start when delta >= 1 - sqrt(1 - 2 phi); returns (time, residual)."""
    if not caseIII_interior(idx):
        return 0.0, 0.0
    yHF = chaser_stop_high(idx)
    x0 = leader_start_solo(idx)
    if yHF <= x0:
        return x0, abs(g_payoff(yHF, min(x0, yHF), idx) - idx.delta)
    return _g_root(yHF, idx, tol)


def classify(idx: NormalizedIndices) -> PublicCase:
    if idx.delta < idx.phi:
        return PublicCase.CaseI
    if idx.phi < 0.5 and idx.delta < 1.0 - math.sqrt(1.0 - 2.0 * idx.phi):
        return PublicCase.CaseII
    return PublicCase.CaseIII


def solve_public(idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> PublicEquilibrium:
    case = classify(idx)
    x0 = leader_start_solo(idx)
    x1F = leader_start_contest(idx)
    yHF = chaser_stop_high(idx)
    residual = 0.0
    if case is PublicCase.CaseI:
        yF, x0F = chaser_stop_low(idx), x0
    elif case is PublicCase.CaseII:
        yF, x0F = yHF, x0
    else:
        yF = yHF
        x0F, residual = leader_start_chasing_caseIII(idx, tol)
    return PublicEquilibrium(case, x1F, x0F, yF, x0, yHF,
                             x1F == 0.0, yF == 0.0, x0F == 0.0, residual)


def br_leader_public(y: float, idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> float:
    """Leader's chasing-stage start against a chaser who stops at y."""
    x0 = leader_start_solo(idx)
    if y <= x0:
        return x0
    return _g_root(y, idx, tol)[0]


def br_chaser_public(x1: float, idx: NormalizedIndices) -> float:
    """Chaser's stop against a leader who starts at x1 after the chaser's first success."""
    yHF = chaser_stop_high(idx)
    if x1 <= yHF:
        return yHF
    if idx.phi >= 1.0:
        return 0.0
    q = 1.0 - 0.5 * -math.expm1(-2.0 * idx.lam * (idx.T - x1))
    y = x1 - math.log(q / (1.0 - idx.phi)) / idx.lam
    return min(idx.T, max(0.0, y))
