"""Equilibrium properties over random interior points (1000 examples each)."""

import math

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from chasing.core import indices
from chasing.hidden import br_chaser_hidden, br_leader_hidden, gamma_threshold, solve_hidden
from chasing.public import br_chaser_public, br_leader_public, solve_public
from conftest import interior_indices

MANY = settings(max_examples=1000)


@MANY
@given(interior_indices())
def test_hidden_start_bracket(idx):
    pub, hid = solve_public(idx), solve_hidden(idx)
    assert pub.x1F < hid.xN <= pub.x0F


@MANY
@given(interior_indices())
def test_hidden_stop_ordering(idx):
    pub, hid = solve_public(idx), solve_hidden(idx)
    # a public chaser who never works leaves nothing to order
    assume(pub.yF > 0.0)
    assert hid.yN >= pub.yF
    assert (hid.yN == pub.yF) == (idx.delta >= gamma_threshold(idx.phi, idx.lambdaT))


@MANY
@given(interior_indices(), st.floats(0.0, 1.0))
def test_hidden_cutoffs_non_increasing_in_delta(idx, frac):
    hi = 0.995 * 0.5 * -math.expm1(-2.0 * idx.lambdaT)
    d2 = idx.delta + frac * (hi - idx.delta)
    a = solve_hidden(idx)
    b = solve_hidden(indices(d2, idx.phi, idx.lam, idx.T))
    assert b.xN <= a.xN + 1e-9
    assert b.yN <= a.yN + 1e-9


@MANY
@given(interior_indices())
def test_fixed_points(idx):
    pub, hid = solve_public(idx), solve_hidden(idx)
    assert abs(br_leader_public(pub.yF, idx) - pub.x0F) <= 1e-9
    assert abs(br_chaser_public(pub.x1F, idx) - pub.yF) <= 1e-9
    assert abs(br_leader_hidden(hid.yN, idx) - hid.xN) <= 1e-9
    assert abs(br_chaser_hidden(hid.xN, idx) - hid.yN) <= 1e-9


@MANY
@given(interior_indices())
def test_residuals(idx):
    assert solve_public(idx).residual < 1e-12
    assert solve_hidden(idx).residual < 1e-12
