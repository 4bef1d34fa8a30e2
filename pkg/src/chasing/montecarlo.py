"""Exact event simulation of the chasing contest under cutoff strategies.

Each player's breakthrough clock is an exponential amount of *working time*,
so a success arrives once the player's accumulated effort reaches an
Exp(lambda) draw. Replications are vectorized in blocks; block b draws from a
generator seeded by (seed, b), so results do not depend on thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from chasing.core import ContestParams
from chasing.hidden import HiddenEquilibrium
from chasing.public import PublicEquilibrium

BLOCK = 1 << 16
NEVER = math.inf


@dataclass(frozen=True)
class StrategyProfile:
    """Cutoff strategies. Public: the leader works before the chaser's first
    success from ``leader_start_no_breakthrough`` on, and after it from
    max(announcement, ``leader_start_after_breakthrough``). Hidden: the leader
    works from ``leader_start_hidden`` on. The chaser works on [0, chaser_stop)
    before her first success and always after it."""

    regime: str
    chaser_stop: float
    leader_start_no_breakthrough: float = NEVER
    leader_start_after_breakthrough: float = NEVER
    leader_start_hidden: float = NEVER

    def __post_init__(self):
        if self.regime not in ("public", "hidden"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.regime == "public" and (self.leader_start_after_breakthrough
                                        > self.leader_start_no_breakthrough):
            raise ValueError("public profile needs start_after <= start_no")


def public_profile(eq: PublicEquilibrium) -> StrategyProfile:
    return StrategyProfile("public", eq.yF, eq.x0F, eq.x1F)


def hidden_profile(eq: HiddenEquilibrium) -> StrategyProfile:
    return StrategyProfile("hidden", eq.yN, leader_start_hidden=eq.xN)


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    replications: int = 100_000
    threads: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be at least 1")


@dataclass(frozen=True)
class Estimate:
    mean: float
    se: float


@dataclass(frozen=True)
class SimStats:
    leader_win_prob: Estimate
    chaser_win_prob: Estimate
    no_winner_prob: Estimate
    leader_payoff: Estimate
    chaser_payoff: Estimate
    planned_start_mean: Estimate
    realized_start_mean: Estimate
    termination_time_mean: Estimate
    ties: int
    replications: int


def block_draws(seed: int, block: int, size: int, rows: int = 3) -> np.ndarray:
    """Standard exponential draws for one block of replications."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block,)))
    return rng.standard_exponential((rows, size))


def _blocks(replications: int):
    b = 0
    while b * BLOCK < replications:
        yield b, min(BLOCK, replications - b * BLOCK)
        b += 1


def _overlap(a, b, lo, hi):
    # length of [a, b) intersected with [lo, hi)
    return np.maximum(0.0, np.minimum(b, hi) - np.maximum(a, lo))


def _clock(a, b, need):
    # time at which work on [a, b) accumulates ``need``; inf if it never does
    return np.where(need <= np.maximum(0.0, b - a), a + need, np.inf)


@dataclass
class Paths:
    tau1: np.ndarray
    end: np.ndarray
    leader_win: np.ndarray
    chaser_win: np.ndarray
    tie: np.ndarray
    leader_work: tuple
    chaser_work: np.ndarray


def run_paths(lam: float, T: float, t0, draws: np.ndarray, chaser0, chaser1_start,
              leader0=None, leader1_start=None, hidden_leader=None) -> Paths:
    """Simulate from time t0 with the chaser holding no success.

    Args:
        chaser0: (start, stop) of the chaser's work before her first success.
        chaser1_start: earliest time she works after it (she works to the end).
        leader0, leader1_start: public leader's interval before the chaser's
            first success, and earliest start after it (works to the end).
        hidden_leader: (start, stop) for a leader who cannot see progress.

    Returns a Paths record; ``leader_work`` is the leader's pair of work
    intervals clipped to the path's termination time.
    """
    need_l, need_c1, need_c2 = draws[0] / lam, draws[1] / lam, draws[2] / lam
    a0 = np.maximum(chaser0[0], t0)
    tau1 = _clock(a0, np.minimum(chaser0[1], T), need_c1)
    a1 = np.maximum(tau1, chaser1_start)
    tau2 = _clock(a1, T, need_c2)
    if hidden_leader is not None:
        la = np.maximum(hidden_leader[0], t0)
        lb = np.minimum(hidden_leader[1], T)
        la2 = lb2 = np.full_like(tau1, T)
        tauL = _clock(la, lb, need_l)
    else:
        la = np.maximum(leader0[0], t0)
        lb = np.minimum(np.minimum(leader0[1], T), tau1)
        first = np.maximum(0.0, lb - la)
        la2 = np.where(np.isfinite(tau1), np.maximum(tau1, leader1_start), T)
        lb2 = np.full_like(tau1, T)
        tauL = np.where(need_l <= first, la + need_l, _clock(la2, lb2, need_l - first))
    tauL = np.where(tauL <= T, tauL, np.inf)
    tau2 = np.where(tau2 <= T, tau2, np.inf)
    end = np.minimum(np.minimum(tauL, tau2), T)
    tie = (tauL == tau2) & np.isfinite(tauL)
    leader_win = (tauL < tau2) & ~tie
    chaser_win = (tau2 < tauL) & ~tie
    cw = (_overlap(a0, np.minimum(chaser0[1], T), t0, np.minimum(end, tau1))
          + np.where(np.isfinite(tau1), _overlap(a1, T, t0, end), 0.0))
    return Paths(tau1, end, leader_win, chaser_win, tie, ((la, lb), (la2, lb2)), cw)


def leader_work_between(paths: Paths, lo, hi):
    (a, b), (a2, b2) = paths.leader_work
    hi = np.minimum(hi, paths.end)
    return _overlap(a, b, lo, hi) + _overlap(a2, b2, lo, hi)


def _profile_block(params: ContestParams, profile: StrategyProfile, draws):
    T = params.T
    if profile.regime == "public":
        x0F = profile.leader_start_no_breakthrough
        x1F = profile.leader_start_after_breakthrough
        paths = run_paths(params.lam, T, 0.0, draws, (0.0, profile.chaser_stop), 0.0,
                          leader0=(x0F, T), leader1_start=x1F)
        planned = np.minimum(x0F, np.maximum(paths.tau1, x1F))
    else:
        xN = profile.leader_start_hidden
        paths = run_paths(params.lam, T, 0.0, draws, (0.0, profile.chaser_stop), 0.0,
                          hidden_leader=(xN, T))
        planned = np.full_like(paths.end, xN)
    lw = leader_work_between(paths, 0.0, T)
    v, c = params.v, params.c
    lpay = v * (paths.leader_win + 0.5 * paths.tie) - c * lw
    cpay = v * (paths.chaser_win + 0.5 * paths.tie) - c * paths.chaser_work
    none = ~(paths.leader_win | paths.chaser_win | paths.tie)
    return np.stack([paths.leader_win, paths.chaser_win, none, lpay, cpay, planned,
                     np.minimum(planned, paths.end), paths.end, paths.tie]).astype(float)


def _estimate(x: np.ndarray) -> Estimate:
    n = x.size
    se = float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else math.nan
    return Estimate(float(np.mean(x)), se)


def simulate(params: ContestParams, profile: StrategyProfile, config: SimConfig) -> SimStats:
    def work(job):
        b, size = job
        return _profile_block(params, profile, block_draws(config.seed, b, size))

    jobs = list(_blocks(config.replications))
    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            parts = list(pool.map(work, jobs))
    else:
        parts = [work(j) for j in jobs]
    data = np.concatenate(parts, axis=1)
    est = [_estimate(row) for row in data[:8]]
    return SimStats(*est, ties=int(data[8].sum()), replications=config.replications)


def leader_win_probability_public(lam: float, T: float, x1: float, x0F: float, y: float) -> float:
    """Analytic leader win probability under a public cutoff profile.

    Conditions on the chaser's first success time and uses the race and
    chasing-stage win probabilities from the public solver.
    """
    from chasing.core import NormalizedIndices
    from chasing.public import g_payoff

    def race(t):
        return 0.5 * -math.expm1(-2.0 * lam * (T - t))

    u = min(y, x0F)
    p = lam * min(x1, u) * math.exp(-lam * x1) * race(x1)
    if u > x1:
        p += 0.5 * ((math.exp(-lam * x1) - math.exp(-lam * u))
                    - math.exp(-2.0 * lam * T) * (math.exp(lam * u) - math.exp(lam * x1)))
    if y >= x0F:
        tail = g_payoff(y, x0F, NormalizedIndices(0.5, 0.5, lam, T))
    else:
        tail = -math.expm1(-lam * (T - x0F))
    return p + math.exp(-lam * u) * tail


@dataclass(frozen=True)
class DeviationResult:
    max_gain: float
    se: float
    player: str
    state: str
    time: float
    cells: int


def start_moves(t: float, dt: float, s: float, e: float, fresh: bool) -> list[tuple[float, float]]:
    """Work intervals reachable by changing the action on [t, t + dt) when the
    profile works on [s, e), without re-entering after a stop.

    ``fresh`` means the stage has just begun at t, so not working yet is a
    delay rather than an exit.
    """
    if t >= e:
        return []
    if s <= t:
        moves = [(t, t)]
        if fresh:
            moves.append((t + dt, e))
        return moves
    if s < t + dt:
        return [(t, e), (t + dt, e)]
    return [(t, t + dt)]


def stop_moves(t: float, dt: float, y: float) -> list[tuple[float, float]]:
    """Chaser moves from t when she works on [0, y) before her first success."""
    if t >= y:
        return []
    moves = [(t, t)]
    if t == 0.0:
        moves.append((dt, y))
    if y < t + dt:
        moves.append((t, t + dt))
    return moves


def deviation_check(params: ContestParams, profile: StrategyProfile, grid_size: int = 100,
                    replications: int = 100_000, seed: int = 0,
                    window: tuple[float, float] | None = None) -> DeviationResult:
    """Largest estimated gain from changing one player's action on one grid
    cell, with common random numbers across the profile and the deviation.
    ``window`` restricts the cells to those starting inside [lo, hi].

    Only changes compatible with irreversible exit are tried: stopping ends
    work for the rest of the stage, and a start can move by one cell. The
    leader's gain weights everything after the current cell's cost by beta.
    """
    T, lam, v, c, beta = params.T, params.lam, params.v, params.c, params.beta
    dt = T / grid_size
    draws = block_draws(seed, 0, replications, rows=4)
    best = [-math.inf, 0.0, "", "", 0.0]
    cells = 0
    y = profile.chaser_stop
    hidden = profile.regime == "hidden"
    if hidden:
        s0 = s1 = profile.leader_start_hidden
        lead = dict(hidden_leader=(s0, T))
    else:
        s0 = profile.leader_start_no_breakthrough
        s1 = profile.leader_start_after_breakthrough
        lead = dict(leader0=(s0, T), leader1_start=s1)

    def leader_value(paths, t):
        in_cell = leader_work_between(paths, t, t + dt)
        later = leader_work_between(paths, t + dt, T)
        reward = v * (paths.leader_win + 0.5 * paths.tie)
        return -c * in_cell + beta * (reward - c * later)

    def chaser_value(paths):
        return v * (paths.chaser_win + 0.5 * paths.tie) - c * paths.chaser_work

    def record(gain, player, state, t):
        nonlocal cells
        cells += 1
        est = _estimate(gain)
        if est.mean > best[0]:
            best[:] = [est.mean, est.se, player, state, t]

    for j in range(grid_size):
        t = j * dt
        if window is not None and not window[0] <= t <= window[1]:
            continue
        base0 = run_paths(lam, T, t, draws, (0.0, y), 0.0, **lead)
        if hidden:
            # the leader cannot see progress; weight the states by his belief
            prior = -math.expm1(-lam * min(t, y))
            ahead = draws[3] < -math.log1p(-prior) if prior > 0 else np.zeros(replications, bool)
            base1 = _force_progress(lam, T, t, draws, max(t, s0), T)
            for mv in start_moves(t, dt, s0, T, fresh=False):
                dev0 = run_paths(lam, T, t, draws, (0.0, y), 0.0, hidden_leader=mv)
                dev1 = _force_progress(lam, T, t, draws, *mv)
                gain = np.where(ahead, leader_value(dev1, t) - leader_value(base1, t),
                                leader_value(dev0, t) - leader_value(base0, t))
                record(gain, "leader", "hidden", t)
        else:
            for mv in start_moves(t, dt, s0, T, fresh=False):
                dev = run_paths(lam, T, t, draws, (0.0, y), 0.0, leader0=mv, leader1_start=s1)
                record(leader_value(dev, t) - leader_value(base0, t), "leader", "chasing", t)
            base1 = _force_progress(lam, T, t, draws, max(t, s1), T)
            for mv in start_moves(t, dt, max(t, s1), T, fresh=True):
                dev = _force_progress(lam, T, t, draws, *mv)
                record(leader_value(dev, t) - leader_value(base1, t), "leader", "contest", t)
        for mv in stop_moves(t, dt, y):
            dev = run_paths(lam, T, t, draws, mv, 0.0, **lead)
            record(chaser_value(dev) - chaser_value(base0), "chaser", "chasing", t)
        contest_leader = (max(t, s0 if hidden else s1), T)
        base1 = _force_progress(lam, T, t, draws, *contest_leader)
        for cs in (t + dt, T):
            dev = _force_progress(lam, T, t, draws, *contest_leader, chaser_start=cs)
            record(chaser_value(dev) - chaser_value(base1), "chaser", "contest", t)
    return DeviationResult(best[0], best[1], best[2], best[3], best[4], cells)


def _force_progress(lam, T, t, draws, leader_start, leader_stop, chaser_start=None) -> Paths:
    # paths from time t with the chaser already holding her first success
    need_l, need_c2 = draws[0] / lam, draws[2] / lam
    n = draws.shape[1]
    tau1 = np.full(n, t)
    cs = t if chaser_start is None else chaser_start
    tau2 = _clock(np.full(n, cs), T, need_c2)
    la = np.full(n, max(leader_start, t))
    lb = np.full(n, min(leader_stop, T))
    tauL = _clock(la, lb, need_l)
    tauL = np.where(tauL <= T, tauL, np.inf)
    tau2 = np.where(tau2 <= T, tau2, np.inf)
    end = np.minimum(np.minimum(tauL, tau2), T)
    tie = (tauL == tau2) & np.isfinite(tauL)
    empty = np.full(n, T)
    return Paths(tau1, end, (tauL < tau2) & ~tie, (tau2 < tauL) & ~tie, tie,
                 ((la, lb), (empty, empty)), _overlap(np.full(n, cs), T, t, end))
