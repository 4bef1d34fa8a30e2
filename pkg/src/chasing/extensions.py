"""Variants of the basic contest: a present-biased single chaser (sophisticated
or naive), symmetric one-breakthrough contests with exponential or
present-future discounting, a prize paid at the deadline, and the
infinite-horizon chasing contest.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

from chasing.core import ContestParams, DomainError, derive_indices
from chasing.roots import bisect

TOL = 1e-12


@dataclass(frozen=True)
class ExtendedParams:
    """Base primitives plus the number of symmetric players, the exponential
    discount rate rho and the present-to-future hazard eta (inf means the
    transition is instantaneous)."""

    base: ContestParams
    n_players: int = 2
    rho: float = 0.0
    eta: float = math.inf

    def __post_init__(self):
        if self.n_players < 1:
            raise ValueError("n_players must be at least 1")
        if self.rho < 0 or math.isnan(self.rho):
            raise ValueError("rho must be a non-negative number")
        if self.eta < 0 or math.isnan(self.eta):
            raise ValueError("eta must be non-negative or inf")


# single present-biased chaser ----------------------------------------------

class ChaserMode(str, enum.Enum):
    shirk_all = "shirk_all"
    x_start_then_y_stop = "x_start_then_y_stop"


@dataclass(frozen=True)
class PBChaserSolution:
    mode: ChaserMode
    x1: float
    y1: float
    y0: float
    x0: float
    time_consistent: bool = False


def _solo_start(params: ContestParams) -> float:
    idx = derive_indices(params)
    if idx.delta >= 1.0:
        return 0.0
    return max(0.0, params.T + math.log1p(-idx.delta) / params.lam)


def benchmark_stop(params: ContestParams) -> float:
    """Stopping time of a time-consistent lone chaser."""
    phi = derive_indices(params).phi
    return params.T + math.log1p(-phi) / params.lam


def pb_chaser_solo(params: ContestParams) -> PBChaserSolution:
    """Sophisticated present-biased chaser working alone for two successes.

    Before her first success she works on [x1, y1); after it she works from
    x0 on. x1 is the root of her start condition
    exp(-lam (x0 - t)) (q - ln q) >= 1 with q = beta (1 - delta) / (beta - phi).
    """
    lam, v, c, beta, T = params.lam, params.v, params.c, params.beta, params.T
    idx = derive_indices(params)
    phi = idx.phi
    y0 = benchmark_stop(params)
    x0 = _solo_start(params)
    if beta >= 1.0:
        return PBChaserSolution(ChaserMode.x_start_then_y_stop, 0.0, y0, y0, 0.0, True)
    if beta * lam * v < 2.0 * c:
        return PBChaserSolution(ChaserMode.shirk_all, T, T, y0, x0)
    y1 = max(0.0, T - math.log(beta / (beta - phi)) / lam)
    q = beta * (1.0 - idx.delta) / (beta - phi)
    x1 = max(0.0, x0 - math.log(q - math.log(q)) / lam)
    return PBChaserSolution(ChaserMode.x_start_then_y_stop, min(x1, y1), y1, y0, x0)


def g1(t: float, y: float, params: ContestParams) -> float:
    """Scaled gain from working at t in the chasing stage when the chaser
    expects to keep working until y and then through the contest stage."""
    lam, beta, T = params.lam, params.beta, params.T
    s = y - t
    num = math.exp(-lam * s) - (1.0 - lam * s) * math.exp(-lam * (T - t))
    return num / (1.0 - beta * -math.expm1(-lam * s))


def g1_slope_sign(t: float, y: float, params: ContestParams) -> float:
    """Numerator of dG1/dt; strictly decreasing in t."""
    lam, beta, T = params.lam, params.beta, params.T
    return ((1.0 - beta) * math.exp(lam * T) - beta * math.exp(lam * t)
            + (1.0 - beta) * (lam * (y - t) - 2.0) * math.exp(lam * y))


@dataclass(frozen=True)
class WorkRegion:
    start: float
    stop: float

    @property
    def empty(self) -> bool:
        return self.stop <= self.start


def naive_chaser_work_region(params: ContestParams) -> WorkRegion:
    """Times at which a naive present-biased chaser works before her first
    success: beta * G1(t | y0) >= phi, an interval because G1 is monotone or
    single-peaked."""
    phi = derive_indices(params).phi
    beta = params.beta
    y0 = benchmark_stop(params)
    if y0 <= 0.0:
        return WorkRegion(0.0, 0.0)
    xt = TOL * max(1.0, params.T)

    def f(t):
        return beta * g1(t, y0, params) - phi

    if g1_slope_sign(0.0, y0, params) <= 0.0:
        peak = 0.0
    elif g1_slope_sign(y0, y0, params) >= 0.0:
        peak = y0
    else:
        peak = bisect(lambda t: g1_slope_sign(t, y0, params), 0.0, y0, xt).root
    if f(peak) < 0.0:
        return WorkRegion(0.0, 0.0)
    start = 0.0 if f(0.0) >= 0.0 else bisect(f, 0.0, peak, xt).root
    stop = y0 if f(y0) >= 0.0 else bisect(f, peak, y0, xt).root
    return WorkRegion(start, stop)


# symmetric one-breakthrough contests ---------------------------------------

class SymmetricMode(str, enum.Enum):
    work_from_0 = "work_from_0"
    shirk_all = "shirk_all"


@dataclass(frozen=True)
class SymmetricVerdict:
    mode: SymmetricMode
    start: float


def symmetric_continuation(t: float, ext: ExtendedParams) -> float:
    """Value of working to the deadline when all n players work, prize paid
    on success and payoffs discounted at rate rho."""
    b = ext.base
    k = ext.n_players * b.lam + ext.rho
    return (b.lam * b.v - b.c) / k * -math.expm1(-k * (b.T - t))


def symmetric_exponential_verdict(ext: ExtendedParams) -> SymmetricVerdict:
    """Start rule in the symmetric contest with immediate payment.

    Without present bias the sign of lam v - c decides between working
    throughout and never working. With present bias the start time is the
    root of beta lam v - c = beta n lam U(t), U the all-work continuation.
    """
    b = ext.base
    lam, v, c, beta, T, n = b.lam, b.v, b.c, b.beta, b.T, ext.n_players
    if beta >= 1.0:
        mode = SymmetricMode.work_from_0 if lam * v >= c else SymmetricMode.shirk_all
        return SymmetricVerdict(mode, 0.0 if mode is SymmetricMode.work_from_0 else T)
    if beta * lam * v < c:
        return SymmetricVerdict(SymmetricMode.shirk_all, T)

    def gain(t):
        return beta * lam * v - c - beta * n * lam * symmetric_continuation(t, ext)

    if gain(0.0) >= 0.0:
        return SymmetricVerdict(SymmetricMode.work_from_0, 0.0)
    start = bisect(gain, 0.0, T, TOL * max(1.0, T)).root
    return SymmetricVerdict(SymmetricMode.work_from_0, start)


def postponed_reward_start(ext: ExtendedParams) -> float:
    """Start time when the prize is paid at the deadline."""
    b = ext.base
    lam, v, c, T, n, rho = b.lam, b.v, b.c, b.T, ext.n_players, ext.rho
    if rho <= 0.0:
        raise DomainError("postponed reward start needs rho > 0")
    k = n * lam + rho
    arg = lam * (k * v - n * c) / (rho * c)
    if arg <= 0.0:
        raise DomainError(f"log argument {arg!r} is not positive")
    return max(0.0, T - math.log(arg) / k)


def postponed_reward_gain(t: float, ext: ExtendedParams) -> float:
    """Flow gain from working at t when everyone works afterwards and the
    prize is paid at the deadline."""
    b = ext.base
    lam, v, c, T, n, rho = b.lam, b.v, b.c, b.T, ext.n_players, ext.rho
    k = n * lam + rho
    e = math.exp(-k * (T - t))
    return lam * e * v - (1.0 - n * lam / k * (1.0 - e)) * c


def pf_continuation(t: float, ext: ExtendedParams) -> float:
    """All-work continuation value under present-future discounting."""
    b = ext.base
    lam, beta, T, n, rho, eta = b.lam, b.beta, b.T, ext.n_players, ext.rho, ext.eta
    k = lam * n + rho
    now = beta * lam / k * -math.expm1(-k * (T - t))
    if math.isinf(eta):
        later = 0.0
    else:
        later = (1.0 - beta) * lam / (k + eta) * -math.expm1(-(k + eta) * (T - t))
    return (now + later) * (b.v - b.c / lam)


class PFMode(str, enum.Enum):
    work_all = "work_all"
    quit_at_0 = "quit_at_0"


def pf_preference_verdict(ext: ExtendedParams) -> PFMode:
    b = ext.base
    return PFMode.work_all if b.lam * b.v >= b.c else PFMode.quit_at_0


# infinite horizon ------------------------------------------------------------

class StationaryClass(str, enum.Enum):
    none = "no_stationary_mpe"
    both_work_always = "both_work_always"
    leader_contest_stage_only = "leader_contest_stage_only"
    leader_shirks_all = "leader_shirks_all"


@dataclass(frozen=True)
class StationaryProfile:
    """Actions (1 = work) by stage: chasing stage first, contest stage second."""

    leader: tuple[int, int]
    chaser: tuple[int, int]

    @property
    def leader_class(self) -> StationaryClass:
        return {(1, 1): StationaryClass.both_work_always,
                (0, 1): StationaryClass.leader_contest_stage_only,
                (0, 0): StationaryClass.leader_shirks_all}.get(self.leader, StationaryClass.none)


@dataclass(frozen=True)
class StationaryOutcome:
    leader: StationaryClass
    chaser_chasing: bool = False
    chaser_contest: bool = False


def infinite_horizon_classify(beta: float, ratio: float) -> StationaryOutcome:
    """Stationary equilibrium of the deadline-free public contest, ratio = lam v / c.

    With beta * ratio > 1 a leader whose later selves shirk wants to work now,
    so shirking in a stage is never self-consistent while the chaser works;
    the only stationary profile is both working throughout, which needs
    ratio >= max(3, 4/beta - 3).
    """
    if beta * ratio < 1.0:
        return StationaryOutcome(StationaryClass.leader_shirks_all, ratio >= 2.0, ratio >= 1.0)
    if ratio >= max(3.0, 4.0 / beta - 3.0):
        return StationaryOutcome(StationaryClass.both_work_always, True, True)
    return StationaryOutcome(StationaryClass.none)


def threshold_rule_classify(beta: float, ratio: float) -> StationaryClass:
    """Three-threshold rule in terms of 3, 2/beta - 1 and 4/beta - 3.

    Kept for comparison; it labels two regions as equilibria that fail the
    one-shot check (see ``stationary_equilibria``).
    """
    lo, hi = sorted((3.0, 2.0 / beta - 1.0))
    if ratio < lo:
        return StationaryClass.leader_shirks_all
    if ratio < hi:
        return StationaryClass.none
    if ratio < max(3.0, 4.0 / beta - 3.0):
        return StationaryClass.leader_contest_stage_only
    return StationaryClass.both_work_always


def stationary_equilibria(beta: float, ratio: float, lam: float = 1.0,
                          c: float = 1.0, tol: float = 1e-12) -> list[StationaryProfile]:
    """Enumerate all 16 stationary pure profiles and keep those where every
    leader self and the chaser are best-responding."""
    v = ratio * c / lam
    found = []
    for la, lb, ca, cb in itertools.product((0, 1), repeat=4):
        vb = lb * (lam * v - c) / (lam * (lb + cb)) if lb + cb else 0.0
        va = (la * (lam * v - c) + ca * lam * vb) / (lam * (la + ca)) if la + ca else 0.0
        ok = True
        for a, cont in ((la, va), (lb, vb)):
            g = -c + beta * lam * (v - cont)
            ok &= not ((a == 1 and g < -tol) or (a == 0 and g > tol))
        # the chaser solves a stationary stopping problem in each stage
        wb_work = (lam * v - c) / (lam * (lb + 1))
        ok &= not ((cb == 1 and wb_work < -tol) or (cb == 0 and wb_work > tol))
        wb = wb_work if cb else 0.0
        wa_work = (lam * wb - c) / (lam * (la + 1))
        ok &= not ((ca == 1 and wa_work < -tol) or (ca == 0 and wa_work > tol))
        if ok:
            found.append(StationaryProfile((la, lb), (ca, cb)))
    return found
