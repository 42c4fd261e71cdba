"""Max-flow feasibility oracle and a Dinkelbach iteration for the cooling norm.

A norm ``n`` is achievable by a cooling function rel ``h0`` iff the network

* source -> s with capacity ``h0(s)`` for every s in S,
* both directions of every interior edge with capacity ``n``,
* i(e) -> sink with capacity ``n`` for every boundary edge e,

carries a flow of value ``H(S)``.  The net flow along each edge is then a
cooling function of norm at most ``n``; otherwise the source side of a
minimum cut is a subset whose Følner ratio exceeds ``n``.

Capacities are cleared of denominators so the max-flow runs on integers.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import networkx as nx
from networkx.algorithms.flow import shortest_augmenting_path

from .cooling import CoolingFunction, boundaryless_components, folner_ratio, heat_map
from .exceptions import FolnerError, InvariantError, NoCoolingFunctionError, StepLimitError
from .graph import SubsetContext, vertex_key
from .rational import as_fraction
from .result import FolnerResult

__all__ = ["FlowNetwork", "Feasibility", "build_network", "feasible_norm", "violating_subset", "compute_N"]


@dataclass
class FlowNetwork:
    """Integer network for one (context, h0, n) triple.

    Nodes ``0..m-1`` are the vertices of S in vertex order; ``m`` is the
    source and ``m + 1`` the sink.  ``scale`` is the common denominator that
    was cleared.
    """

    digraph: nx.DiGraph
    source: int
    sink: int
    scale: int
    n: Fraction
    heat: dict


def build_network(ctx: SubsetContext, h0, n) -> FlowNetwork:
    n = as_fraction(n)
    if n <= 0:
        raise ValueError(f"trial norm must be positive, got {n}")
    hm = heat_map(ctx.vertices, h0)
    D = lcm(n.denominator, *(x.denominator for x in hm.values()))
    cap_n = int(n * D)
    m = len(ctx.vertices)
    src, snk = m, m + 1
    G = nx.DiGraph()
    G.add_nodes_from(range(m + 2))
    for j, v in enumerate(ctx.vertices):
        G.add_edge(src, j, capacity=int(hm[v] * D))
    out_deg = [0] * m
    for k in range(len(ctx.edges)):
        a, b = ctx.tail[k], ctx.head[k]
        if b < 0:
            out_deg[a] += 1
        else:
            G.add_edge(a, b, capacity=cap_n)
            G.add_edge(b, a, capacity=cap_n)
    for j in range(m):
        if out_deg[j]:
            G.add_edge(j, snk, capacity=cap_n * out_deg[j])
    return FlowNetwork(G, src, snk, D, n, hm)


@dataclass
class Feasibility:
    """Outcome of one max-flow run.

    ``cooling`` is the flow-induced cooling function when feasible.
    ``source_side`` is the S-part of the minimum cut nearest the source (a
    violating subset when infeasible); ``tight_side`` is the S-part of the
    minimum cut nearest the sink, which at the optimal norm is the union of
    all Følner-optimal subsets.
    """

    feasible: bool
    n: Fraction
    flow_value: Fraction
    cooling: CoolingFunction | None
    source_side: frozenset
    tight_side: frozenset

    def __bool__(self):
        return self.feasible


def _run(ctx: SubsetContext, h0, n) -> Feasibility:
    net = build_network(ctx, h0, n)
    R = shortest_augmenting_path(net.digraph, net.source, net.sink)
    m = len(ctx.vertices)
    value = R.graph["flow_value"]
    total = sum(net.heat.values(), Fraction(0)) * net.scale
    feasible = value == total

    def residual(u, v):
        a = R[u][v]
        return a["capacity"] - a["flow"]

    seen = {net.source}
    queue = deque([net.source])
    while queue:
        u = queue.popleft()
        for v in R.successors(u):
            if v not in seen and residual(u, v) > 0:
                seen.add(v)
                queue.append(v)
    source_side = frozenset(ctx.vertices[j] for j in seen if j < m)

    reach = {net.sink}
    queue = deque([net.sink])
    while queue:
        v = queue.popleft()
        for u in R.predecessors(v):
            if u not in reach and residual(u, v) > 0:
                reach.add(u)
                queue.append(u)
    tight_side = frozenset(ctx.vertices[j] for j in range(m) if j not in reach)

    cooling = None
    if feasible:
        D = net.scale
        cap_n = int(net.n * D)
        remaining = [R[j][net.sink]["flow"] if R.has_edge(j, net.sink) else 0 for j in range(m)]
        vals = [Fraction(0)] * len(ctx.edges)
        for k in range(len(ctx.edges)):
            a, b = ctx.tail[k], ctx.head[k]
            if b >= 0:
                vals[k] = Fraction(R[a][b]["flow"], D)
            else:
                x = min(cap_n, remaining[a])
                remaining[a] -= x
                vals[k] = Fraction(x, D)
        cooling = CoolingFunction(ctx, vals)
    return Feasibility(feasible, net.n, Fraction(value, net.scale), cooling, source_side, tight_side)


def feasible_norm(ctx: SubsetContext, h0, n) -> Feasibility:
    """Decide whether some cooling function rel ``h0`` has norm at most ``n``."""
    return _run(ctx, h0, n)


def violating_subset(ctx: SubsetContext, h0, n) -> frozenset:
    """A subset with ``H(S0) > n |dE(S0)|``, read off a minimum cut."""
    out = _run(ctx, h0, n)
    if out.feasible:
        raise FolnerError(f"norm {out.n} is feasible; no violating subset exists")
    return out.source_side


def compute_N(ctx: SubsetContext, h0=None) -> FolnerResult:
    """Minimum cooling norm by Dinkelbach iteration over the flow oracle.

    Starts at ``FR(S)``; every infeasible trial norm is replaced by the
    Følner ratio of its violating subset, which is strictly larger.  The
    first feasible trial is the optimum.  The returned ``S0`` is the
    sink-nearest tight cut, i.e. the union of all optimal subsets.
    """
    bad = boundaryless_components(ctx)
    if bad:
        raise NoCoolingFunctionError(
            f"component {sorted(bad[0], key=vertex_key)!r} has no boundary edges", component=bad[0]
        )
    limit = len(ctx.vertices) * len(ctx.edges)
    n = folner_ratio(ctx, ctx.S, h0)
    trials = [n]
    while True:
        out = _run(ctx, h0, n)
        if out.feasible:
            break
        nxt = folner_ratio(ctx, out.source_side, h0)
        if nxt <= n:
            raise InvariantError(f"Dinkelbach step did not increase the norm ({n} -> {nxt})")
        n = nxt
        trials.append(n)
        if len(trials) > limit:
            raise StepLimitError(f"Dinkelbach iteration exceeded {limit} trial norms")
    S0 = out.tight_side
    if not S0 or folner_ratio(ctx, S0, h0) != n:
        raise InvariantError("no tight cut at the optimal norm")
    return FolnerResult(N=n, S0=S0, cooling=out.cooling, engine="flow", steps=trials)
