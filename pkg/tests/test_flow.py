from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings, strategies as st

from folner.cooling import cooling_norm, folner_ratio, is_cooling
from folner.exceptions import FolnerError, NoCoolingFunctionError
from folner.flow import build_network, compute_N, feasible_norm, violating_subset
from folner.graph import build_edge_list, build_free_group, build_grid, free_group_ball, subset_context
from folner.lattice import ball, rectangle, truncated

from oracles import close, lattice_animal, lp_min_norm, naive_max_fr

G = build_grid(2)
ONE = subset_context(G, [(0, 0)])
B2 = subset_context(G, ball(2))


def test_feasibility_single_vertex():
    out = feasible_norm(ONE, None, F(1, 4))
    assert out and set(out.cooling.values) == {F(1, 4)}
    assert not feasible_norm(ONE, None, F(1, 5))


def test_feasibility_b2_threshold():
    assert feasible_norm(B2, None, F(3, 4))
    assert not feasible_norm(B2, None, F(3, 4) - F(1, 1000))


def test_trial_norm_must_be_positive():
    with pytest.raises(ValueError):
        feasible_norm(ONE, None, 0)


def test_network_is_integral():
    net = build_network(B2, None, F(7, 10))
    assert net.scale == 10
    assert all(isinstance(d["capacity"], int) for _, _, d in net.digraph.edges(data=True))


def test_violating_subsets():
    assert violating_subset(ONE, None, F(1, 5)) == {(0, 0)}
    T = violating_subset(B2, None, F(7, 10))
    assert folner_ratio(B2, T) > F(7, 10)
    with pytest.raises(FolnerError):
        violating_subset(B2, None, F(3, 4))


def test_compute_N_examples():
    assert compute_N(ONE).N == F(1, 4)
    assert compute_N(subset_context(G, rectangle(2, 3))).N == F(3, 5)
    res = compute_N(subset_context(G, ball(10)))
    assert res.N == F(37, 12)
    assert res.steps[0] == folner_ratio(res.cooling.ctx, ball(10))


def test_compute_N_s0_is_the_union_of_optima():
    res = compute_N(B2)
    assert res.S0 == truncated(2, 1)


def test_compute_N_refuses_closed_component():
    cyc = build_edge_list([(0, 1), (1, 2), (2, 0), ("x", "y")])
    with pytest.raises(NoCoolingFunctionError):
        compute_N(subset_context(cyc, [0, 1, 2, "x"]))


def test_free_group_ball():
    g = build_free_group(2)
    ctx = subset_context(g, free_group_ball(2, 2))
    res = compute_N(ctx)
    best, _ = naive_max_fr(g, ctx.S)
    assert res.N == best


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10**6), st.integers(1, 40))
def test_duality_sandwich(n, seed, num):
    S = lattice_animal(random.Random(seed), n)
    ctx = subset_context(G, S)
    N = compute_N(ctx).N
    trial = F(num, 16)
    out = feasible_norm(ctx, None, trial)
    if out:
        assert trial >= N
        assert is_cooling(out.cooling).ok and cooling_norm(out.cooling) <= trial
    else:
        assert trial < N
        assert folner_ratio(ctx, out.source_side) > trial


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 10**6), st.data())
def test_weighted_heat_against_lp(n, seed, data):
    S = sorted(lattice_animal(random.Random(seed), n))
    h0 = {v: F(data.draw(st.integers(1, 6)), data.draw(st.integers(1, 3))) for v in S}
    ctx = subset_context(G, S)
    res = compute_N(ctx, h0)
    assert close(lp_min_norm(G, S, h0), res.N)
    assert is_cooling(res.cooling, h0).ok and cooling_norm(res.cooling) == res.N
    assert naive_max_fr(G, S, h0)[0] == res.N
    trials = res.steps
    assert all(a < b for a, b in zip(trials, trials[1:]))
