from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings, strategies as st

from folner.cooling import cooling_norm, folner_ratio, is_cooling
from folner.exceptions import DomainError, EmptySubsetError, NotPeelingError
from folner.flow import compute_N
from folner.graph import build_grid, subset_context
from folner.lattice import ball, layer_peeling_test, rectangle, truncated
from folner.peeling import (
    b_counts,
    components_have_boundary,
    extend_cooling,
    is_peeling,
    peel_search,
    split,
    split_vertex,
)

from oracles import lattice_animal

G = build_grid(2)
B2 = subset_context(G, ball(2))
CORNERS = [(2, 0), (-2, 0), (0, 2), (0, -2)]


def test_split_of_b2_corners():
    sg = split(B2, CORNERS)
    # each corner has a single neighbor inside the 3x3 square
    assert sg.P_prime == frozenset(CORNERS) | {split_vertex((2, 0), (1, 0)), split_vertex((-2, 0), (-1, 0)),
                                               split_vertex((0, 2), (0, 1)), split_vertex((0, -2), (0, -1))}
    assert len(sg.graph.edges) == 16
    assert len(sg.origin) == 16  # every edge at a corner is split


def test_split_edge_bijection():
    for P in ([(0, 0)], CORNERS, list(truncated(2, 1))):
        sg = split(B2, P)
        e_p = {frozenset((e.i, e.t)) for e in B2.edges if e.i in sg.P or e.t in sg.P}
        assert len(sg.graph.edges) == len(e_p)
        assert {frozenset(sg.original_edge(u, v)) for u, v in sg.graph.edges} == e_p


def test_split_without_edges_into_T():
    S = [(0, 0), (5, 5)]
    ctx = subset_context(G, S)
    assert split(ctx, [(5, 5)]).P_prime == {(5, 5)}


def test_split_errors():
    with pytest.raises(EmptySubsetError):
        split(B2, [])
    with pytest.raises(DomainError):
        split(B2, [(9, 9)])


def test_b_counts():
    sg = split(B2, CORNERS)
    assert b_counts(sg, []) == (0, 0)
    fresh = sorted(sg.P_prime - sg.P)
    assert b_counts(sg, fresh[:2]) == (2, 2)


def row_setting(m, T):
    P = [(x, 0) for x in range(1, m + 1)]
    return subset_context(G, list(T) + P), P


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_row_ratio_is_half_m(m):
    T = [(x, y) for x in range(0, m + 2) for y in (-1, -2)]
    ctx, P = row_setting(m, T)
    sg = split(ctx, P)
    B, Bp = b_counts(sg, sg.P_prime)
    assert F(len(sg.P), Bp - B) == F(m, 2)


def _lower_set(rng, m):
    """A random subset of the lower half-plane containing [1, m] x {-1}."""
    cells = {(x, -1) for x in range(1, m + 1)}
    for _ in range(rng.randint(0, 12)):
        x, y = rng.choice(sorted(cells))
        dx, dy = rng.choice([(1, 0), (-1, 0), (0, -1)])
        cells.add((x + dx, y + dy))
    return cells


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_row_peeling_criterion(m, seed):
    T = _lower_set(random.Random(seed), m)
    ctx, P = row_setting(m, T)
    fr_T = folner_ratio(subset_context(G, T), T)
    assert is_peeling(ctx, P) == layer_peeling_test(m, fr_T)


def test_b2_corners_are_a_peeling_and_extend():
    assert is_peeling(B2, CORNERS)
    T = truncated(2, 1)
    c_T = compute_N(subset_context(G, T)).cooling
    c = extend_cooling(B2, CORNERS, c_T)
    assert is_cooling(c).ok and cooling_norm(c) == F(3, 4)
    for e in subset_context(G, T).edges:
        assert c.value(e.i, e.t) == c_T.value(e.i, e.t)


def test_extend_refuses_non_peeling():
    R = subset_context(G, rectangle(3, 2))
    P = [(0, 1), (1, 1), (2, 1)]
    T = [v for v in R.S if v not in P]
    assert not is_peeling(R, P)
    with pytest.raises(NotPeelingError):
        extend_cooling(R, P, compute_N(subset_context(G, T)).cooling)


def test_extend_with_no_split_vertices():
    ctx = subset_context(G, [(0, 0), (5, 5)])
    c_T = compute_N(subset_context(G, [(0, 0)])).cooling
    c = extend_cooling(ctx, [(5, 5)], c_T)
    assert cooling_norm(c) == F(1, 4) and is_cooling(c).ok


def test_extend_thin_set():
    # P hugs the boundary and carries little heat
    T = rectangle(4, 4)
    S = set(T) | {(x, 4) for x in range(1, 3)}
    ctx = subset_context(G, S)
    P = sorted(S - T)
    assert is_peeling(ctx, P)
    c = extend_cooling(ctx, P, compute_N(subset_context(G, T)).cooling)
    assert cooling_norm(c) == 1 and is_cooling(c).ok


@pytest.mark.parametrize("n", [3, 5, 8])
def test_layer_peels_of_octagons(n):
    from folner.lattice import k0

    for k in range(k0(n)):
        ctx = subset_context(G, truncated(n, k))
        P = truncated(n, k) - truncated(n, k + 1)
        assert is_peeling(ctx, P)
        assert components_have_boundary(split(ctx, P))
        assert peel_search(ctx) == P


def test_peel_search_finds_nothing_in_rectangles():
    for m, n in [(2, 2), (3, 4), (5, 3)]:
        ctx = subset_context(G, rectangle(m, n))
        assert peel_search(ctx, "layers") is None
        assert peel_search(ctx, "greedy") is None


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 10**6))
def test_greedy_results_are_peelings_and_preserve_N(n, seed):
    S = lattice_animal(random.Random(seed), n)
    ctx = subset_context(G, S)
    P = peel_search(ctx, "greedy")
    if P is None:
        return
    assert is_peeling(ctx, P)
    assert components_have_boundary(split(ctx, P))
    T = S - P
    assert compute_N(ctx).N == compute_N(subset_context(G, T)).N


def test_split_json_is_deterministic():
    a = split(B2, CORNERS).to_json()
    b = split(subset_context(G, sorted(ball(2), reverse=True)), CORNERS[::-1]).to_json()
    assert a == b and len(a["split"]) == 16
    assert sum(r["from_T"] for r in a["split"]) == 4
