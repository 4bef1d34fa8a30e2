"""Discrete-time chasing contest solved by backward induction and
best-response iteration.

Time is cut into n steps of length d = T/n. Working in a step costs
C = c d (paid at the start of the step) and succeeds with probability
P = 1 - exp(-lambda d) (reward paid at the end of the step). The present-biased
leader's self at step m weights everything after the current cost by beta.

Strategies are Markov action tables indexed by (step, chaser progress). Each
self compares working with shirking against the same continuation, the one
generated by the later selves' table. Under irreversible exit a table must be
a single work interval: scanning backward, once a work block has ended every
earlier self shirks. Under reversible exit each self chooses freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from chasing.core import ContestParams

MAX_ITER = 1000


class NonContiguousError(RuntimeError):
    """Raised when an action table is not a single work interval."""


@dataclass(frozen=True)
class DiscreteGame:
    params: ContestParams
    n: int
    regime: str = "public"
    exit: str = "irreversible"
    chaser_enabled: bool = True

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.regime not in ("public", "hidden"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.exit not in ("irreversible", "reversible"):
            raise ValueError(f"unknown exit rule {self.exit!r}")

    @property
    def step(self) -> float:
        return self.params.T / self.n

    @property
    def p_step(self) -> float:
        return -math.expm1(-self.params.lam * self.params.T / self.n)

    @property
    def c_step(self) -> float:
        return self.params.c * self.params.T / self.n

    @property
    def reversible(self) -> bool:
        return self.exit == "reversible"


@dataclass
class DiscreteEquilibrium:
    """Action tables have shape (n, 2): column 0 before the chaser's first
    success, column 1 after it. A hidden-regime leader uses one column for both.
    Value arrays have shape (n + 1, 2) and hold long-run (beta-free) values."""

    game: DiscreteGame
    leader_action: np.ndarray
    chaser_action: np.ndarray
    leader_values: np.ndarray
    chaser_values: np.ndarray
    converged: bool
    iterations: int


@dataclass(frozen=True)
class Interval:
    start: float
    stop: float

    @property
    def empty(self) -> bool:
        return self.start >= self.stop


@dataclass(frozen=True)
class DiscreteCutoffs:
    leader: dict = field(default_factory=dict)
    chaser: dict = field(default_factory=dict)
    error_bound: float = 0.0


class _Latch:
    # tracks, per information state, whether a work block has ended (scanning backward)
    def __init__(self, active: bool):
        self.active = active
        self.seen_work = [False, False]
        self.closed = [False, False]

    def decide(self, k: int, want: bool) -> bool:
        if not self.active:
            return want
        if self.closed[k]:
            return False
        if want:
            self.seen_work[k] = True
        elif self.seen_work[k]:
            self.closed[k] = True
        return want


def prior_progress(game: DiscreteGame, chaser_table: np.ndarray) -> np.ndarray:
    """Probability that the chaser holds her first success at the start of each
    step, ignoring termination (the discrete analogue of the leader's prior)."""
    P = game.p_step
    mu = np.empty(game.n + 1)
    q = 1.0
    for m in range(game.n):
        mu[m] = 1.0 - q
        q *= 1.0 - P * chaser_table[m, 0]
    mu[game.n] = 1.0 - q
    return mu


def leader_best_response(game: DiscreteGame, chaser_table: np.ndarray,
                         beta: float | None = None):
    """Sophisticated leader's table against a fixed chaser table.

    Returns (table, values) with values[m, k] the leader's long-run value.
    """
    p = game.params
    beta = p.beta if beta is None else beta
    n, P, C, v = game.n, game.p_step, game.c_step, p.v
    hidden = game.regime == "hidden"
    mu = prior_progress(game, chaser_table) if hidden else None
    latch = _Latch(not game.reversible)
    values = np.zeros((n + 1, 2))
    table = np.zeros((n, 2), dtype=np.int8)
    L0, L1 = 0.0, 0.0
    for m in range(n - 1, -1, -1):
        b0 = P * chaser_table[m, 0]
        b1 = P * chaser_table[m, 1]
        W0 = (b0 * L1 + (1 - b0) * L0, (1 - b1) * L1)
        W1 = (P * v + (1 - P) * W0[0],
              P * (1 - b1) * v + P * b1 * 0.5 * v + (1 - P) * W0[1])
        if hidden:
            w = 1.0 - mu[m], mu[m]
            want = -C + beta * (w[0] * (W1[0] - W0[0]) + w[1] * (W1[1] - W0[1])) >= 0.0
            a = latch.decide(0, want)
            work = (a, a)
        else:
            work = tuple(latch.decide(k, -C + beta * (W1[k] - W0[k]) >= 0.0) for k in (0, 1))
        L0 = -C + W1[0] if work[0] else W0[0]
        L1 = -C + W1[1] if work[1] else W0[1]
        values[m] = L0, L1
        table[m] = work
    return table, values


def chaser_best_response(game: DiscreteGame, leader_table: np.ndarray,
                         beta: float = 1.0):
    """Chaser's table (she needs two successes) against a fixed leader table.

    With beta < 1 the chaser is a sophisticated present-biased agent.
    """
    p = game.params
    n, P, C, v = game.n, game.p_step, game.c_step, p.v
    latch = _Latch(not game.reversible)
    values = np.zeros((n + 1, 2))
    table = np.zeros((n, 2), dtype=np.int8)
    V0, V1 = 0.0, 0.0
    for m in range(n - 1, -1, -1):
        a0 = P * leader_table[m, 0]
        a1 = P * leader_table[m, 1]
        W0 = ((1 - a0) * V0, (1 - a1) * V1)
        W1 = ((1 - a0) * (P * V1 + (1 - P) * V0),
              P * (1 - a1) * v + P * a1 * 0.5 * v + (1 - P) * W0[1])
        work = tuple(latch.decide(k, -C + beta * (W1[k] - W0[k]) >= 0.0) for k in (0, 1))
        V0 = -C + W1[0] if work[0] else W0[0]
        V1 = -C + W1[1] if work[1] else W0[1]
        values[m] = V0, V1
        table[m] = work
    return table, values


def solve_discrete(game: DiscreteGame, max_iter: int = MAX_ITER) -> DiscreteEquilibrium:
    """Best-response iteration from 'both always work' until neither table changes."""
    if game.reversible:
        raise ValueError("solve_discrete requires irreversible exit")
    n = game.n
    leader = np.ones((n, 2), dtype=np.int8)
    if game.chaser_enabled:
        chaser = np.ones((n, 2), dtype=np.int8)
    else:
        chaser = np.zeros((n, 2), dtype=np.int8)
    lv = cv = np.zeros((n + 1, 2))
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        new_leader, lv = leader_best_response(game, chaser)
        if game.chaser_enabled:
            new_chaser, cv = chaser_best_response(game, new_leader)
        else:
            new_chaser = chaser
        if np.array_equal(new_leader, leader) and np.array_equal(new_chaser, chaser):
            converged = True
            break
        leader, chaser = new_leader, new_chaser
    return DiscreteEquilibrium(game, leader, chaser, lv, cv, converged, it)


def work_blocks(column: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of work as half-open step ranges [start, stop)."""
    blocks = []
    start = None
    for m, a in enumerate(column):
        if a and start is None:
            start = m
        elif not a and start is not None:
            blocks.append((start, m))
            start = None
    if start is not None:
        blocks.append((start, len(column)))
    return blocks


def table_interval(column: np.ndarray, d: float, T: float) -> Interval:
    blocks = work_blocks(column)
    if not blocks:
        return Interval(T, T)
    if len(blocks) > 1:
        raise NonContiguousError(f"{len(blocks)} separate work blocks")
    a, b = blocks[0]
    return Interval(a * d, min(T, b * d))


def extract_cutoffs(eq: DiscreteEquilibrium) -> DiscreteCutoffs:
    """Work intervals per information state, with the grid error bound T/n.

    Keys are "chasing" (before the chaser's first success) and "contest".
    """
    g = eq.game
    d, T = g.step, g.params.T
    names = ("chasing", "contest")
    leader = {names[k]: table_interval(eq.leader_action[:, k], d, T) for k in (0, 1)}
    chaser = {names[k]: table_interval(eq.chaser_action[:, k], d, T) for k in (0, 1)}
    return DiscreteCutoffs(leader, chaser, T / g.n)


def solo_value(game: DiscreteGame, m: int) -> float:
    """Leader's value at step m when he and all later selves work alone."""
    P, C = game.p_step, game.c_step
    return (1.0 - (1.0 - P) ** (game.n - m)) * (game.params.v - C / P)


def solo_start_index(game: DiscreteGame) -> int:
    """Earliest step at which the leader works given all later selves work."""
    p = game.params
    P, C = game.p_step, game.c_step
    thresh = p.v - C / (p.beta * P)
    for m in range(game.n):
        if thresh >= solo_value(game, m + 1):
            return m
    return game.n


@dataclass(frozen=True)
class ChatterReport:
    """Leader's chasing-stage table against a chaser who stops at step m* - 1.

    ``pattern`` is shirk at m* - 1, work at m* - 2 and shirk at m* - 3 in the
    computed table. ``sandwich`` is the same statement derived from the
    one-step work conditions, ``W0(m* - 2) <= v - C/(beta P) < W0(m* - 3)``,
    where W0(m) is the continuation value if the self at m shirks.
    ``approx_terms`` holds (U~ - U^, v - C/(beta P), P U^ + (1 - P) U~) at
    m* - 1, the first-order form of the same bounds.
    """

    n: int
    m_star: int
    blocks: list
    alternations: int
    pattern: bool
    sandwich: bool
    sandwich_terms: tuple
    approx_terms: tuple


def chattering_demo(game: DiscreteGame, chaser_stop: int | None = None) -> ChatterReport:
    """Leader's best response to a chaser who stops one step before the
    leader's solo start, with re-entry allowed or not per ``game.exit``."""
    n = game.n
    m_star = solo_start_index(game)
    stop = m_star - 1 if chaser_stop is None else chaser_stop
    chaser = np.zeros((n, 2), dtype=np.int8)
    chaser[:max(stop, 0), 0] = 1
    chaser[:, 1] = 1
    table, values = leader_best_response(game, chaser)
    col = table[:, 0]
    blocks = work_blocks(col)
    alternations = int(np.count_nonzero(np.diff(col.astype(int))))
    P, C = game.p_step, game.c_step
    p = game.params
    thresh = p.v - C / (p.beta * P)
    pattern = sandwich = False
    terms = approx = (math.nan, thresh, math.nan)
    if m_star >= 3:
        pattern = col[m_star - 1] == 0 and col[m_star - 2] == 1 and col[m_star - 3] == 0

        def w0(m):
            b = P * chaser[m, 0]
            return b * values[m + 1, 1] + (1 - b) * values[m + 1, 0]

        lo, hi = w0(m_star - 2), w0(m_star - 3)
        sandwich = lo <= thresh < hi
        terms = (lo, thresh, hi)
        u_t, u_h = values[m_star - 1, 0], values[m_star - 1, 1]
        approx = (u_t - u_h, thresh, P * u_h + (1 - P) * u_t)
    return ChatterReport(n, m_star, blocks, alternations, bool(pattern), bool(sandwich),
                         terms, approx)


@dataclass(frozen=True)
class CutoffError:
    name: str
    continuous: float
    discrete: float

    @property
    def error(self) -> float:
        return abs(self.continuous - self.discrete)


@dataclass(frozen=True)
class CutoffComparison:
    rows: tuple
    bound: float
    converged: bool
    iterations: int

    @property
    def max_error(self) -> float:
        return max(r.error for r in self.rows)

    @property
    def within_bound(self) -> bool:
        return self.converged and self.max_error <= self.bound


def _start(iv: Interval, T: float) -> float:
    return T if iv.empty else iv.start


def _stop(iv: Interval) -> float:
    return 0.0 if iv.empty else iv.stop


def cutoff_errors(params: ContestParams, n: int, regime: str = "public") -> CutoffComparison:
    """Solve the discrete game and compare its cutoffs with the continuous
    solver; the bound is two grid steps."""
    from chasing.core import derive_indices
    from chasing.hidden import solve_hidden
    from chasing.public import solve_public

    idx = derive_indices(params)
    T = params.T
    eq = solve_discrete(DiscreteGame(params, n, regime))
    cut = extract_cutoffs(eq)
    if regime == "public":
        ce = solve_public(idx)
        rows = (CutoffError("x1F", ce.x1F, _start(cut.leader["contest"], T)),
                CutoffError("x0F", ce.x0F, _start(cut.leader["chasing"], T)),
                CutoffError("yF", ce.yF, _stop(cut.chaser["chasing"])))
    else:
        ce = solve_hidden(idx)
        rows = (CutoffError("xN", ce.xN, _start(cut.leader["chasing"], T)),
                CutoffError("yN", ce.yN, _stop(cut.chaser["chasing"])))
    return CutoffComparison(rows, 2.0 * T / n, eq.converged, eq.iterations)
