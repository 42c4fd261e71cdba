"""Split graphs, the peeling predicate and extension of cooling functions.

For ``P`` inside ``S`` with ``T = S \\ P``, the split graph keeps the edges
meeting ``P`` but gives every edge leaving ``P`` its own fresh terminal
vertex.  ``P'`` is ``P`` plus the fresh vertices standing for points of ``T``.
``P`` is a peeling when no subset of ``P'`` has Følner ratio above ``FR(T)``
once the fresh vertices are given heat ``FR(T)``; a single max-flow decides
that.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from .cooling import CoolingFunction, cooling_norm, folner_ratio, heat_map, is_cooling
from .exceptions import DomainError, EmptySubsetError, FolnerError, InvariantError, NotPeelingError
from .flow import Feasibility, feasible_norm
from .formats import vertex_to_json
from .graph import (
    EdgeListGraph,
    GridGraph,
    SubsetContext,
    edge_key,
    sort_vertices,
    subset_components,
    subset_context,
)
from .rational import as_fraction

__all__ = [
    "SplitGraph",
    "split",
    "split_vertex",
    "b_counts",
    "is_peeling",
    "extend_cooling",
    "peel_search",
    "components_have_boundary",
]

SPLIT_TAG = "split"


def split_vertex(inside, outside) -> tuple:
    """Name of the fresh vertex terminating the edge ``inside -> outside``."""
    return (SPLIT_TAG, inside, outside)


@dataclass(frozen=True)
class SplitGraph:
    """The graph built from E(P) by splitting its boundary edges apart.

    ``origin`` maps each fresh vertex to the edge ``(p, q)`` of ``E(S)`` it
    terminates; ``P_prime`` holds ``P`` and the fresh vertices whose ``q``
    lies in ``T``.
    """

    graph: EdgeListGraph
    P: frozenset
    T: frozenset
    P_prime: frozenset
    origin: dict

    def context(self) -> SubsetContext:
        return subset_context(self.graph, self.P_prime)

    @property
    def split_vertices(self) -> list:
        return sort_vertices(self.origin)

    def extended_heat(self, N, h0=None) -> dict:
        """``h0`` on ``P`` and the constant ``N`` on ``P' \\ P``."""
        N = as_fraction(N)
        out = heat_map(sort_vertices(self.P), h0)
        for x in self.P_prime - self.P:
            out[x] = N
        return out

    def original_edge(self, u, v) -> tuple:
        """Edge of E(S) corresponding to the split-graph edge ``{u, v}``."""
        if u in self.origin:
            return self.origin[u]
        if v in self.origin:
            return self.origin[v]
        return (u, v)

    def to_json(self) -> dict:
        desc = self.graph.descriptor()
        desc["edges"] = [[vertex_to_json(u), vertex_to_json(v)] for u, v in self.graph.edges]
        desc["P"] = [vertex_to_json(v) for v in sort_vertices(self.P)]
        desc["P_prime"] = [vertex_to_json(v) for v in sort_vertices(self.P_prime)]
        desc["split"] = [
            {
                "vertex": vertex_to_json(x),
                "edge": [vertex_to_json(y) for y in self.origin[x]],
                "from_T": self.origin[x][1] in self.T,
            }
            for x in self.split_vertices
        ]
        return desc


def _parts(ctx: SubsetContext, P: Iterable) -> tuple[frozenset, frozenset]:
    P = frozenset(P)
    if not P:
        raise EmptySubsetError("P must be nonempty")
    stray = P - ctx.S
    if stray:
        raise DomainError(f"P is not inside S: {sort_vertices(stray)[:3]!r}")
    return P, ctx.S - P


def split(ctx: SubsetContext, P: Iterable) -> SplitGraph:
    P, T = _parts(ctx, P)
    g = ctx.graph
    edges = []
    origin = {}
    for p in sort_vertices(P):
        for q in g.neighbors(p):
            if q in P:
                if edge_key(p, q)[0] == p:
                    edges.append((p, q))
                continue
            x = split_vertex(p, q)
            if g.has_vertex(x):
                raise DomainError(f"split vertex name {x!r} collides with a graph vertex")
            origin[x] = (p, q)
            edges.append((p, x))
    graph = EdgeListGraph(edges)
    for p in P:
        graph.add_isolated(p)
    P_prime = P | {x for x, (_, q) in origin.items() if q in T}
    return SplitGraph(graph, P, T, frozenset(P_prime), origin)


def b_counts(sg: SplitGraph, P0: Iterable) -> tuple[int, int]:
    """``(B, B')``: fresh vertices in ``P0`` and split-graph edges leaving ``P0``."""
    P0 = frozenset(P0)
    if not P0 <= sg.P_prime:
        raise DomainError("P0 must lie inside P'")
    B = len(P0 - sg.P)
    Bp = sum(1 for u, v in sg.graph.edges if (u in P0) != (v in P0))
    return B, Bp


def _fr_T(ctx: SubsetContext, T: frozenset, h0) -> Fraction:
    if not T:
        raise FolnerError("T = S \\ P is empty")
    return folner_ratio(subset_context(ctx.graph, T), T, h0)


def _solve_split(sg: SplitGraph, N, h0) -> Feasibility:
    return feasible_norm(sg.context(), sg.extended_heat(N, h0), N)


def is_peeling(ctx: SubsetContext, P: Iterable, h0=None) -> bool:
    """Decide whether ``P`` is a peeling for ``S`` rel ``h0``.

    Equivalent to every subset of ``P'`` having Følner ratio at most
    ``FR(T)`` under the extended heat, which is exactly the feasibility of
    norm ``FR(T)`` on ``P'``.
    """
    sg = split(ctx, P)
    N = _fr_T(ctx, sg.T, h0)
    return _solve_split(sg, N, h0).feasible


def components_have_boundary(sg: SplitGraph) -> bool:
    """Every component of ``P'`` in the split graph has an edge leaving it."""
    pctx = sg.context()
    return all(pctx.boundary_of(comp) for comp in subset_components(pctx, sg.P_prime))


def extend_cooling(ctx: SubsetContext, P: Iterable, c_T: CoolingFunction, h0=None) -> CoolingFunction:
    """Extend a cooling function on ``T = S \\ P`` to ``S`` at the same norm.

    ``∂E(T)`` is first treated as carrying the full norm ``N`` into ``P``;
    ``P'`` is solved at norm ``N`` with heat ``N`` on the fresh vertices,
    the solution is carried back to ``E(P)``, and finally ``∂E(T)`` gets
    its original values, which can only help ``P``.
    """
    P, T = _parts(ctx, P)
    if c_T.ctx.S != T:
        raise DomainError("c_T must be defined on E(S \\ P)")
    N = cooling_norm(c_T)
    if N <= 0:
        raise DomainError("c_T has zero norm and cannot cool T")
    sg = split(ctx, P)
    out = _solve_split(sg, N, h0)
    if not out.feasible:
        raise NotPeelingError(f"P is not a peeling at norm {N}: some subset of P' has Følner ratio above it")
    cp = out.cooling

    vals = []
    for e in ctx.edges:
        u, v = e.i, e.t
        if u in T or v in T:
            vals.append(c_T.value(u, v))
            continue
        if v in P:
            vals.append(cp.value(u, v))
        else:
            # u in P, v outside S
            vals.append(cp.value(u, split_vertex(u, v)))
    for x, (p, q) in sg.origin.items():
        if q in T and cp.value(x, p) != N:
            raise InvariantError(f"fresh vertex {x!r} does not ship exactly N")
    c = CoolingFunction(ctx, vals)
    if not is_cooling(c, h0).ok or cooling_norm(c) != N:
        raise InvariantError("extended function is not a cooling function of unchanged norm")
    return c


def _grid_layers(ctx: SubsetContext) -> list[frozenset]:
    pts = {v: (v,) if isinstance(v, int) else v for v in ctx.S}
    d = ctx.graph.d
    singles = []
    for i in range(d):
        coords = [x[i] for x in pts.values()]
        for target in (max(coords), min(coords)):
            singles.append(frozenset(v for v, x in pts.items() if x[i] == target))
    out = [frozenset().union(*singles)]
    for layer in singles:
        if layer not in out:
            out.append(layer)
    return out


def _greedy_sets(ctx: SubsetContext, h0) -> list[frozenset]:
    hm = heat_map(ctx.vertices, h0)
    inside = set(ctx.S)
    m = len(ctx.vertices)
    heat = sum(hm.values(), Fraction(0))
    bcount = len(ctx.boundary)
    removed = []
    out = []
    while len(inside) > 1:
        best = None
        for v in ctx.vertices:
            if v not in inside:
                continue
            j = ctx.index[v]
            deg_in = sum(1 for _, y in ctx.incident[j] if y >= 0 and ctx.vertices[y] in inside)
            deg = len(ctx.incident[j])
            b = bcount - (deg - deg_in) + deg_in
            if b <= 0:
                continue
            fr = (heat - hm[v]) / b
            if best is None or fr > best[0]:
                best = (fr, v, b)
        if best is None:
            break
        _, v, bcount = best
        inside.discard(v)
        heat -= hm[v]
        removed.append(v)
        out.append(frozenset(removed))
        if len(out) >= m:
            break
    return out


def peel_search(ctx: SubsetContext, strategy: str = "auto", h0=None):
    """Look for a peeling of ``S``; returns one validated by :func:`is_peeling` or ``None``.

    ``"layers"`` tries the extreme coordinate layers of a grid subset, all
    at once and then one by one.  ``"greedy"`` removes, one vertex at a
    time, whichever vertex leaves the largest Følner ratio, and tries each
    removed set.  Not finding a peeling proves nothing.
    """
    if strategy == "auto":
        strategy = "layers" if isinstance(ctx.graph, GridGraph) else "greedy"
    if strategy == "layers":
        if not isinstance(ctx.graph, GridGraph):
            raise DomainError("the layers strategy needs a grid graph")
        candidates = _grid_layers(ctx)
    elif strategy == "greedy":
        candidates = _greedy_sets(ctx, h0)
    else:
        raise ValueError(f"unknown peel strategy {strategy!r}")
    for P in candidates:
        if not P or P == ctx.S:
            continue
        try:
            if is_peeling(ctx, P, h0):
                return P
        except FolnerError:
            continue
    return None
