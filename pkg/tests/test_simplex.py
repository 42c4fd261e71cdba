from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings, strategies as st

from folner.cooling import cooling_norm, folner_ratio, heat_losses, is_cooling
from folner.exceptions import DomainError, InvariantError, NoCoolingFunctionError
from folner.graph import OrientedEdge, build_edge_list, build_grid, subset_context
from folner.lattice import ball, rectangle, truncated
from folner.simplex import (
    RootedForest,
    Solution,
    advance,
    check_state,
    init_state,
    rfr,
    run,
    solve_forest,
)

from oracles import animal_pool, close, lattice_animal, lp_max_h, naive_max_fr

G = build_grid(2)


def test_init_state_values():
    assert init_state(subset_context(G, [(0, 0)])).h == 4
    assert init_state(subset_context(G, [(0, 0), (1, 0)])).h == 3
    # the center of B(1) has no boundary edge
    st0 = init_state(subset_context(G, ball(1)))
    assert st0.h == 0
    check_state(st0)


def test_init_state_refuses_closed_component():
    cyc = build_edge_list([(0, 1), (1, 2), (2, 0)])
    with pytest.raises(NoCoolingFunctionError):
        init_state(subset_context(cyc, [0, 1, 2]))


def test_solve_forest_single_vertex():
    ctx = subset_context(G, [(0, 0)])
    h, c = solve_forest(ctx, RootedForest({(0, 0): None}))
    assert h == 4 and sorted(c.values) == [1, 1, 1, 1]


def test_solve_forest_pair_matches_lp():
    # u above the root v: c(u->v) = h - 3 <= 1, and the root bound is h <= 6/2
    ctx = subset_context(G, [(0, 0), (1, 0)])
    forest = RootedForest({(1, 0): (0, 0), (0, 0): None})
    h, c = solve_forest(ctx, forest)
    assert h == 3
    assert c.value((1, 0), (0, 0)) == 0
    assert close(lp_max_h(G, ctx.S, forest.parent), h)


def _random_forest(rng, S):
    """A random spanning forest of the grid subset with random roots."""
    S = sorted(S)
    parent = {}
    unseen = set(S)
    while unseen:
        r = rng.choice(sorted(unseen))
        parent[r] = None
        unseen.discard(r)
        frontier = [r]
        while frontier:
            x = frontier.pop(rng.randrange(len(frontier)))
            for y in G.neighbors(x):
                if y in unseen and rng.random() < 0.8:
                    parent[y] = x
                    unseen.discard(y)
                    frontier.append(y)
    return parent


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(0, 10**6))
def test_solve_forest_against_lp(n, seed):
    rng = random.Random(seed)
    S = lattice_animal(rng, n)
    ctx = subset_context(G, S)
    parent = _random_forest(rng, S)
    tree = {frozenset((v, p)) for v, p in parent.items() if p is not None}
    # saturated edges, directed at random, among the remaining interior edges
    R = []
    for k in ctx.interior:
        e = ctx.edges[k]
        if frozenset((e.i, e.t)) not in tree and rng.random() < 0.3:
            R.append((e.i, e.t) if rng.random() < 0.5 else (e.t, e.i))
    try:
        h, c = solve_forest(ctx, RootedForest(parent), R)
    except InvariantError:
        # random forests may force a value of -1 at the maximal h
        return
    assert close(lp_max_h(G, S, parent, R), h)
    roots = {v for v, p in parent.items() if p is None}
    for v, x in heat_losses(c).items():
        assert x >= h if v in roots else x == h
    assert cooling_norm(c) <= 1


def test_solve_forest_domain_errors():
    ctx = subset_context(G, [(0, 0), (1, 0)])
    f = RootedForest({(1, 0): (0, 0), (0, 0): None})
    with pytest.raises(DomainError):
        solve_forest(ctx, f, [((1, 0), (0, 0))])


def test_single_vertex_terminates_at_once():
    ctx = subset_context(G, [(0, 0)])
    st0 = init_state(ctx)
    assert st0.tight_roots == (0,)
    out = advance(st0)
    assert isinstance(out, Solution) and out.S0 == {(0, 0)} and out.h == 4
    assert run(ctx).N == F(1, 4)


def test_run_b2():
    res = run(subset_context(G, ball(2)))
    assert res.N == F(3, 4)
    assert res.S0 == truncated(2, 1) and len(res.S0) == 9


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 3), (4, 2), (5, 4)])
def test_run_rectangles(m, n):
    R = rectangle(m, n)
    res = run(subset_context(G, R))
    assert res.N == F(m * n, 2 * (m + n))
    assert res.S0 == R


@pytest.mark.parametrize("n", [3, 6, 10])
def test_run_balls(n):
    from folner.lattice import fr_formula, k0

    res = run(subset_context(G, ball(n)))
    assert res.N == fr_formula(n, k0(n))
    assert truncated(n, k0(n)) <= res.S0


def test_rfr_examples():
    ctx = subset_context(G, [(0, 0)])
    assert rfr(ctx, [(0, 0)], [], []) == F(1, 4)
    # with no forest and no saturated edges only dE(S) counts: the 3x3
    # square inside B(2) touches it in its 8 corner edges
    ctx = subset_context(G, ball(2))
    assert rfr(ctx, truncated(2, 1), [], []) == F(9, 8)


def test_terminal_rfr_equals_fr():
    ctx = subset_context(G, ball(3))
    state = init_state(ctx)
    while True:
        out = advance(state)
        if isinstance(out, Solution):
            break
        state = out
    r_pairs = []
    for k, a in out.R.items():
        e = ctx.edges[k]
        i = ctx.vertices[a]
        r_pairs.append(OrientedEdge(i, e.t if e.i == i else e.i))
    # no forest edge leaves the unrooted part, so only R' and dE(S) count
    assert 1 / out.h == rfr(ctx, out.S0, [], r_pairs) == folner_ratio(ctx, out.S0)


def test_trace_records():
    res = run(subset_context(G, ball(2)))
    hs = [s.h for s in res.steps]
    assert all(a < b for a, b in zip(hs, hs[1:]))
    rec = res.steps[0].to_json()
    assert set(rec) == {"n", "h", "tight_roots", "tight_edges", "|R|"}


@pytest.mark.parametrize("S", animal_pool(40, 12, seed=7), ids=lambda s: f"n{len(s)}")
def test_engine_matches_naive_enumeration(S):
    ctx = subset_context(G, S)
    res = run(ctx)
    best, winners = naive_max_fr(G, S)
    assert res.N == best
    assert all(T <= res.S0 for T in winners)
    assert is_cooling(res.cooling).ok
