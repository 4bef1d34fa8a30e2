import math

import numpy as np
import pytest
from hypothesis import given, settings

from chasing.core import DomainError, indices
from chasing.public import (PublicCase, br_chaser_public, br_leader_public,
                            chaser_stop_high, chaser_stop_low, classify, g_payoff,
                            g_turning_point, leader_start_chasing_caseIII,
                            leader_start_contest, leader_start_solo, solve_public)
from conftest import interior_indices

# 40-digit reference values from an independent mpmath transcription
X0_04 = 1.489174376234009
X1F_04 = 1.195281043782950
CASE_I_X0F = 1.776856448685790
CASE_I_YF = 1.611055795492482
CASE_II_YF = 1.653426409720027
CASE_II_X0F = 1.698894907216078
CASE_III_X0F = 1.642654716201047
BR_CHASER_18 = 1.692449855708212
G_T0_UNIT = 0.5808308959542341


def test_solo_start():
    assert leader_start_solo(indices(0.4, 0.25, 1, 2)) == pytest.approx(X0_04, abs=1e-13)


def test_solo_start_corner():
    assert leader_start_solo(indices(0.5, 0.25, 1, 0.5)) == 0.0


def test_solo_start_small_delta():
    assert leader_start_solo(indices(1e-12, 0.25, 1, 2)) == pytest.approx(2.0, abs=1e-11)


def test_contest_start():
    assert leader_start_contest(indices(0.4, 0.25, 1, 2)) == pytest.approx(X1F_04, abs=1e-13)


def test_contest_start_corner():
    assert leader_start_contest(indices(0.6, 0.25, 1, 2)) == 0.0


def test_low_stop():
    idx = indices(0.2, 0.3, 1, 2)
    assert leader_start_contest(idx) == pytest.approx(2 - 0.5 * math.log(1 / 0.6), abs=1e-13)
    assert chaser_stop_low(idx) == pytest.approx(CASE_I_YF, abs=1e-13)


def test_low_stop_precondition():
    with pytest.raises(DomainError):
        chaser_stop_low(indices(0.3, 0.3, 1, 2))


def test_low_stop_costly_chaser():
    assert chaser_stop_low(indices(0.2, 0.999999, 1, 2)) == 0.0


def test_low_stop_continuous_at_boundary():
    idx = indices(0.3 - 1e-10, 0.3, 1, 2)
    assert chaser_stop_low(idx) == pytest.approx(leader_start_contest(idx), abs=1e-9)


def test_high_stop():
    assert chaser_stop_high(indices(0.3, 0.25, 1, 2)) == pytest.approx(CASE_II_YF, abs=1e-13)
    assert chaser_stop_high(indices(0.3, 0.6, 1, 2)) == 0.0


def test_g_at_stop_is_solo_race():
    idx = indices(0.3, 0.25, 1, 2)
    for y in (0.2, 1.0, 1.9):
        assert g_payoff(y, y, idx) == pytest.approx(-math.expm1(-(2 - y)), abs=1e-15)


def test_g_full_horizon_value():
    # 1/4 (3 - 5 e^-2); the simulator cross-check lives with the Monte Carlo tests
    idx = indices(0.3, 0.25, 1, 1)
    assert g_payoff(1.0, 0.0, idx) == pytest.approx(G_T0_UNIT, abs=1e-15)
    assert g_payoff(1.0, 0.0, idx) == pytest.approx(0.25 * (3 - 5 * math.exp(-2)), abs=1e-15)


def test_g_domain():
    idx = indices(0.3, 0.25, 1, 2)
    with pytest.raises(DomainError):
        g_payoff(1.0, 1.5, idx)
    with pytest.raises(DomainError):
        g_payoff(2.5, 1.0, idx)


def test_g_below_one():
    idx = indices(0.3, 0.25, 1.3, 2)
    for y in np.linspace(0.0, 2.0, 21):
        for t in np.linspace(0.0, y, 7):
            if t < 2.0:
                assert g_payoff(y, t, idx) < 1.0


def test_case_classification():
    assert classify(indices(0.2, 0.3, 1, 2)) is PublicCase.CaseI
    assert classify(indices(0.26, 0.25, 1, 2)) is PublicCase.CaseII
    assert classify(indices(0.3, 0.25, 1, 2)) is PublicCase.CaseIII
    # weak inequalities: CaseII owns delta == phi, CaseIII owns the upper edge
    assert classify(indices(0.25, 0.25, 1, 2)) is PublicCase.CaseII
    edge = 1 - math.sqrt(0.6)
    assert classify(indices(edge, 0.2, 1, 2)) is PublicCase.CaseIII


def test_case_I():
    eq = solve_public(indices(0.2, 0.3, 1, 2))
    assert eq.case is PublicCase.CaseI
    assert eq.x0F == pytest.approx(CASE_I_X0F, abs=1e-13)
    assert eq.yF == pytest.approx(CASE_I_YF, abs=1e-13)
    assert eq.yF < eq.x1F


def test_case_II():
    eq = solve_public(indices(0.26, 0.25, 1, 2))
    assert eq.case is PublicCase.CaseII
    assert eq.yF == pytest.approx(CASE_II_YF, abs=1e-13)
    assert eq.x0F == pytest.approx(CASE_II_X0F, abs=1e-13)


def test_case_III():
    eq = solve_public(indices(0.3, 0.25, 1, 2))
    assert eq.case is PublicCase.CaseIII
    assert eq.x0F == pytest.approx(CASE_III_X0F, abs=1e-11)
    assert eq.residual < 1e-12
    assert eq.x1F <= eq.x0F <= eq.x0


def test_case_III_edge_start_equals_solo():
    delta = 1 - math.sqrt(0.6)
    idx = indices(delta, 0.2, 1, 0.5)
    x, res = leader_start_chasing_caseIII(idx)
    assert x == pytest.approx(0.5 - math.log(1 / (1 - delta)), abs=1e-9)


def test_case_III_corner():
    # 3 - (4 sqrt(k) + 2 lam T - k - ln k) e^{-2 lam T} = 1.529 < 4 delta, k = 1/(1 - 2 phi)
    idx = indices(0.4, 0.1, 1, 0.5)
    assert chaser_stop_high(idx) > 0.0
    assert leader_start_chasing_caseIII(idx) == (0.0, 0.0)
    assert solve_public(idx).corner_x0F


def test_br_leader_below_solo_start():
    idx = indices(0.3, 0.25, 1, 2)
    assert br_leader_public(0.0, idx) == leader_start_solo(idx)
    assert br_leader_public(1.0, idx) == leader_start_solo(idx)


def test_br_leader_decreasing_beyond_solo_start():
    idx = indices(0.3, 0.25, 1, 2)
    x0 = leader_start_solo(idx)
    ys = np.linspace(x0 + 1e-3, 2.0 - 1e-3, 60)
    br = [br_leader_public(y, idx) for y in ys]
    assert np.all(np.diff(br) < 0)


def test_br_chaser():
    idx = indices(0.3, 0.25, 1, 2)
    assert br_chaser_public(1.8, idx) == pytest.approx(BR_CHASER_18, abs=1e-13)
    yH = chaser_stop_high(idx)
    assert br_chaser_public(yH, idx) == yH
    assert br_chaser_public(0.0, idx) == yH
    xs = np.linspace(yH + 1e-3, 2.0, 40)
    assert np.all(np.diff([br_chaser_public(x, idx) for x in xs]) > 0)


def test_comparative_statics_in_delta():
    phi, T = 0.3, 2.0
    hi = 0.5 * -math.expm1(-2 * T)
    deltas = np.linspace(0.005, 0.99 * hi, 100)
    eqs = [solve_public(indices(d, phi, 1, T)) for d in deltas]
    x0 = [e.x0 for e in eqs]
    x1 = [e.x1F for e in eqs]
    assert np.all(np.diff(x0) < 0)
    assert np.all(np.diff(x1) < 0)
    low = [e.yF for d, e in zip(deltas, eqs) if d < phi]
    assert np.all(np.diff(low) < 0)
    high = [e.yF for d, e in zip(deltas, eqs) if d >= phi]
    assert max(high) == min(high)


@settings(max_examples=300)
@given(interior_indices())
def test_ordering(idx):
    eq = solve_public(idx)
    assert eq.x1F <= eq.x0F <= eq.x0
    assert eq.x1F <= eq.x0
    if eq.case is PublicCase.CaseI and eq.yF > 0:
        assert eq.yF < eq.x1F


@settings(max_examples=300)
@given(interior_indices())
def test_best_response_fixed_point(idx):
    eq = solve_public(idx)
    assert br_leader_public(eq.yF, idx) == pytest.approx(eq.x0F, abs=1e-9)
    assert br_chaser_public(eq.x1F, idx) == pytest.approx(eq.yF, abs=1e-9)


@settings(max_examples=300)
@given(interior_indices())
def test_g_decreasing_at_interior_root(idx):
    eq = solve_public(idx)
    if eq.case is not PublicCase.CaseIII or not 0.0 < eq.x0F < min(eq.yF, eq.x0):
        return
    h = 1e-6
    left = g_payoff(eq.yF, eq.x0F - h, idx)
    right = g_payoff(eq.yF, eq.x0F + h, idx)
    assert right < left
    assert eq.x0F <= g_turning_point(eq.yF, idx) + 1e-12
