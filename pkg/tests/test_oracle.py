import math

import numpy as np
import pytest

from chasing.core import ContestParams, derive_indices, indices, params_from_indices
from chasing.oracle import (DiscreteEquilibrium, DiscreteGame, NonContiguousError,
                            chaser_best_response, chattering_demo, extract_cutoffs,
                            solo_start_index, solo_value, solve_discrete, table_interval,
                            work_blocks)
from chasing.public import leader_start_solo
from conftest import CASE_POINTS, HIDDEN_POINT, oracle_errors

SOLO = params_from_indices(indices(0.4, 0.25, 1, 2))


def test_game_quantities():
    g = DiscreteGame(SOLO, 100)
    assert g.step == pytest.approx(0.02)
    assert g.p_step == pytest.approx(1 - math.exp(-0.02))
    assert g.c_step == pytest.approx(SOLO.c * 0.02)
    assert 0 < g.p_step < 1


def test_game_validation():
    with pytest.raises(ValueError):
        DiscreteGame(SOLO, 1)
    with pytest.raises(ValueError):
        DiscreteGame(SOLO, 10, regime="secret")
    with pytest.raises(ValueError):
        solve_discrete(DiscreteGame(SOLO, 10, exit="reversible"))


def test_solo_start():
    n = 10_000
    eq = solve_discrete(DiscreteGame(SOLO, n, chaser_enabled=False))
    assert eq.converged
    start = extract_cutoffs(eq).leader["chasing"].start
    assert abs(start - 1.489174) <= 2 * 2.0 / n


def test_solo_threshold_limit():
    # v - C/(beta P) >= U_{m+1} tends to beta lambda v >= c + beta lambda U
    x0 = leader_start_solo(derive_indices(SOLO))
    errs = []
    for n in (1000, 4000, 16000):
        g = DiscreteGame(SOLO, n, chaser_enabled=False)
        errs.append(abs(solo_start_index(g) * g.step - x0))
    assert errs[-1] <= 2 * 2.0 / 16000
    assert errs[-1] < errs[0]


def test_solo_tail_value_recursion():
    n = 2000
    g = DiscreteGame(SOLO, n, chaser_enabled=False)
    eq = solve_discrete(g)
    start = solo_start_index(g)
    for m in range(start, n + 1, 37):
        assert eq.leader_values[m, 0] == pytest.approx(solo_value(g, m), abs=1e-10 * SOLO.v)
    P, C, v = g.p_step, g.c_step, SOLO.v
    for m in range(start, n):
        assert solo_value(g, m) == pytest.approx(
            P * v - C + (1 - P) * solo_value(g, m + 1), abs=1e-10 * v)


@pytest.mark.parametrize("case", sorted(CASE_POINTS))
def test_public_cutoffs_match(case):
    comp = oracle_errors(*CASE_POINTS[case], 10_000)
    assert comp.converged
    assert comp.within_bound, comp.rows


def test_hidden_cutoffs_match():
    comp = oracle_errors(*HIDDEN_POINT, 10_000, "hidden")
    assert comp.converged
    assert comp.within_bound, comp.rows


def test_time_consistent_chaser_stop():
    # a lone chaser with beta = 1 stops at T - ln(1/(1 - phi))/lambda
    p = ContestParams(1.0, 10.0, 2.0, 1.0, 2.0)
    n = 10_000
    g = DiscreteGame(p, n)
    table, _ = chaser_best_response(g, np.zeros((n, 2), dtype=np.int8), beta=1.0)
    stop = table_interval(table[:, 0], g.step, p.T).stop
    y0 = 2.0 - math.log(1 / (1 - 0.25))
    assert abs(stop - y0) <= 2 * 2.0 / n


def _equilibrium(leader, chaser, n=10):
    g = DiscreteGame(SOLO, n)
    z = np.zeros((n + 1, 2))
    return DiscreteEquilibrium(g, leader, chaser, z, z, True, 1)


def test_extract_full_shirk():
    z = np.zeros((10, 2), dtype=np.int8)
    cut = extract_cutoffs(_equilibrium(z, z))
    assert cut.leader["chasing"].start == 2.0
    assert cut.leader["chasing"].empty
    assert cut.error_bound == pytest.approx(0.2)


def test_extract_full_work():
    one = np.ones((10, 2), dtype=np.int8)
    cut = extract_cutoffs(_equilibrium(one, one))
    assert cut.chaser["contest"].start == 0.0
    assert cut.chaser["contest"].stop == 2.0


def test_extract_rejects_gaps():
    t = np.zeros((10, 2), dtype=np.int8)
    t[2:4, 0] = 1
    t[6:8, 0] = 1
    with pytest.raises(NonContiguousError):
        extract_cutoffs(_equilibrium(t, np.zeros_like(t)))


def test_work_blocks():
    assert work_blocks(np.array([0, 1, 1, 0, 1])) == [(1, 3), (4, 5)]
    assert work_blocks(np.array([0, 0])) == []


CHATTER = params_from_indices(indices(0.4, 0.1, 1, 1))


def test_chattering_sandwich():
    reports = [chattering_demo(DiscreteGame(CHATTER, n, exit="reversible"))
               for n in (256, 512, 1024, 2048)]
    assert any(r.pattern and r.sandwich for r in reports)
    for r in reports:
        assert r.pattern == r.sandwich
    counts = [r.alternations for r in reports]
    assert all(a <= b for a, b in zip(counts, counts[1:]))
    assert counts[-1] > counts[0]


def test_irreversible_single_block():
    for n in (256, 512, 1024, 2048):
        r = chattering_demo(DiscreteGame(CHATTER, n))
        assert len(r.blocks) == 1
        assert r.alternations <= 1


def test_error_halves_as_grid_doubles():
    # the largest cutoff error over the three public-case points should halve
    # (within 20%) with every doubling of n
    ns = (1250, 2500, 5000, 10_000)
    errs = [max(oracle_errors(*pt, n).max_error for pt in CASE_POINTS.values()) for n in ns]
    ratios = [b / a for a, b in zip(errs, errs[1:])]
    assert all(0.4 <= r <= 0.6 for r in ratios), (errs, ratios)
