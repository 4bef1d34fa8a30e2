"""Equilibrium of the hidden chasing contest, where only the final winner is
announced and the leader reasons with a belief about the chaser's progress."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from chasing.core import DomainError, NormalizedIndices, x0_interior
from chasing.public import (
    DEFAULT_TOL,
    chaser_stop_high,
    leader_start_contest,
    leader_start_solo,
    xtol,
)
from chasing.roots import BracketError, bisect


class HiddenCase(str, enum.Enum):
    ShirkChaser = "ShirkChaser"
    LowDelta = "LowDelta"
    HighDelta = "HighDelta"


@dataclass(frozen=True)
class HiddenEquilibrium:
    case: HiddenCase
    xN: float
    yN: float
    gamma: float
    ybarN: float
    residual: float = 0.0


@dataclass(frozen=True)
class Belief:
    p: float


def gamma_threshold(phi: float, lambdaT: float) -> float:
    """delta threshold separating the two hidden-contest orderings."""
    if phi >= 0.5:
        raise DomainError("gamma_threshold requires phi < 1/2")
    return phi + ((1.0 - phi) / math.sqrt(1.0 - 2.0 * phi) - 1.0) * math.exp(-lambdaT)


def belief_first_breakthrough(t: float, yN: float, lam: float) -> Belief:
    """Probability the chaser already holds one breakthrough at time t."""
    return Belief(-math.expm1(-lam * min(t, yN)))


def h_c(x: float, idx: NormalizedIndices) -> float:
    lam, T = idx.lam, idx.T
    return math.exp(-lam * x) * (1.0 - 0.5 * -math.expm1(-2.0 * lam * (T - x))) / (1.0 - idx.phi)


def h_l(x: float, idx: NormalizedIndices) -> float:
    lam, T = idx.lam, idx.T
    if x >= T:
        raise DomainError("h_l is singular at x = T")
    return _h_l_numerator(x, idx) / math.expm1(-lam * (T - x)) ** 2


def _h_l_numerator(x: float, idx: NormalizedIndices) -> float:
    # 2 delta - 1 + exp(-2 lam (T - x)) without the cancellation near T
    return 2.0 * idx.delta + math.expm1(-2.0 * idx.lam * (idx.T - x))


def chaser_shirks(idx: NormalizedIndices) -> bool:
    """Whether the chaser prefers not to work at all in the hidden contest."""
    d = idx.delta
    k = (1.0 - d + 0.5 * d * d) / (1.0 - d)
    return idx.phi > 1.0 - k * math.exp(-idx.lambdaT)


def H(y: float, idx: NormalizedIndices) -> float:
    """Leader's win probability from working on [y, T] when the chaser stopped at y."""
    lam, T = idx.lam, idx.T
    q = math.exp(-lam * y)
    return (1.0 - q) * 0.5 * -math.expm1(-2.0 * lam * (T - y)) + q * -math.expm1(-lam * (T - y))


def start_condition(x: float, y: float, idx: NormalizedIndices) -> float:
    """Leader's win probability from working on [x, end] when the chaser stops at y >= x
    and the leader cannot observe the chaser's progress."""
    lam, T = idx.lam, idx.T
    s = y - x
    contest = 0.5 * -math.expm1(-2.0 * lam * (T - x))
    chase = (0.75 * -math.expm1(-2.0 * lam * s)
             - 0.5 * lam * s * math.exp(-2.0 * lam * (T - x))
             + math.exp(-2.0 * lam * s) * -math.expm1(-lam * (T - y)))
    return -math.expm1(-lam * x) * contest + math.exp(-lam * x) * chase


def ybar_hidden(idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> float:
    """Earliest leader start once the chaser is known to have stopped."""
    if not x0_interior(idx):
        raise DomainError("ybar_hidden requires delta < 1 - exp(-lambda*T)")
    return bisect(lambda y: H(y, idx), 0.0, idx.T, xtol(idx, tol), target=idx.delta).root


def _eps(idx: NormalizedIndices) -> float:
    return 1e-12 * idx.T


def solve_hidden_low(idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> HiddenEquilibrium:
    """Equilibrium when delta < Gamma(phi): the chaser stops before the leader starts."""
    if not x0_interior(idx):
        raise DomainError("hidden solver requires an interior solo start")
    gamma = gamma_threshold(idx.phi, idx.lambdaT) if idx.phi < 0.5 else math.nan
    ybar = ybar_hidden(idx, tol)
    x0 = leader_start_solo(idx)
    if chaser_shirks(idx):
        return HiddenEquilibrium(HiddenCase.ShirkChaser, x0, 0.0, gamma, ybar)
    lo = leader_start_contest(idx) + _eps(idx)
    # h_c = h_l with the denominator of h_l cleared; same root, bounded slope near T
    f = lambda x: (h_c(x, idx) * math.expm1(-idx.lam * (idx.T - x)) ** 2
                   - _h_l_numerator(x, idx))
    r = bisect(f, lo, x0, xtol(idx, tol))
    xN = r.root
    yN = -math.log(h_c(xN, idx)) / idx.lam
    if yN > xN + 1e-9 * max(1.0, idx.T):
        raise BracketError(f"recovered stop {yN} exceeds start {xN}")
    return HiddenEquilibrium(HiddenCase.LowDelta, xN, max(0.0, yN), gamma, ybar, r.residual)


def _start_before(y: float, idx: NormalizedIndices, tol: float) -> tuple[float, float]:
    # root of start_condition(x, y) = delta on (x1F, y]; start_condition decreases in x
    lo = leader_start_contest(idx)
    f = lambda x: start_condition(x, y, idx) - idx.delta
    if f(y) >= 0.0:
        return y, abs(f(y))
    if f(lo) <= 0.0:
        # already willing at the lower end; at time 0 that is a corner, not a miss
        return lo, 0.0 if lo <= 0.0 else abs(f(lo))
    r = bisect(f, lo, y, xtol(idx, tol))
    return r.root, r.residual


def solve_hidden_high(idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> HiddenEquilibrium:
    """Equilibrium when delta >= Gamma(phi): the chaser stops after the leader starts."""
    gamma = gamma_threshold(idx.phi, idx.lambdaT)
    yN = chaser_stop_high(idx)
    xN, res = _start_before(yN, idx, tol)
    return HiddenEquilibrium(HiddenCase.HighDelta, xN, yN, gamma, ybar_hidden(idx, tol), res)


def solve_hidden(idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> HiddenEquilibrium:
    if idx.phi >= 0.5:
        return solve_hidden_low(idx, tol)
    if idx.delta < gamma_threshold(idx.phi, idx.lambdaT):
        return solve_hidden_low(idx, tol)
    return solve_hidden_high(idx, tol)


def br_leader_hidden(y: float, idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> float:
    """Leader start against a chaser who stops at y, without progress reports."""
    if y <= 0.0:
        return leader_start_solo(idx)
    y = min(y, idx.T)
    if H(y, idx) > idx.delta:
        p = -math.expm1(-idx.lam * y)
        q = math.exp(-idx.lam * y)
        disc = 1.0 - 2.0 * idx.delta * p
        if disc < 0.0:
            raise DomainError("1 - 2 delta (1 - exp(-lambda y)) < 0")
        den = math.sqrt(disc) - q
        if den <= 0.0:
            return idx.T
        x = idx.T - math.log(p / den) / idx.lam
        return min(idx.T, max(y, x))
    return _start_before(y, idx, tol)[0]


def br_chaser_hidden(x: float, idx: NormalizedIndices) -> float:
    """Chaser stop against a leader starting at x, without progress reports."""
    yH = chaser_stop_high(idx)
    if x <= yH:
        return yH
    y = -math.log(h_c(x, idx)) / idx.lam
    return min(idx.T, max(0.0, y))
