"""Cooling functions, heat loss, Følner ratios and the A functional.

All quantities are exact :class:`~fractions.Fraction` values.  A cooling
function stores one value per edge of ``E(S)``, read in the orientation fixed
by its :class:`~folner.graph.SubsetContext`: a positive value means heat
pumped from the initial toward the terminal vertex.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import DomainError, EmptySubsetError, NoCoolingFunctionError, UndefinedRatioError
from .graph import OrientedEdge, SubsetContext, components, edge_key, subset_components, vertex_key
from .rational import as_fraction, format_rational, parse_rational

__all__ = [
    "heat_map",
    "CoolingFunction",
    "CoolingReport",
    "heat_loss",
    "heat_losses",
    "cooling_norm",
    "is_cooling",
    "folner_ratio",
    "admits_cooling",
    "boundaryless_components",
    "heat_flow_cooling",
    "a_functional",
    "vertex_point",
    "scale",
]


def heat_map(vertices: Iterable, h0=None) -> dict:
    """Normalise an initial heat assignment over ``vertices``.

    ``h0`` may be ``None`` (identically 1), a single positive rational, or a
    mapping that covers every vertex.
    """
    vertices = list(vertices)
    if h0 is None:
        return {v: Fraction(1) for v in vertices}
    if isinstance(h0, Mapping):
        out = {}
        for v in vertices:
            if v not in h0:
                raise DomainError(f"heat assignment is missing vertex {v!r}")
            out[v] = as_fraction(h0[v])
    else:
        x = as_fraction(h0)
        out = {v: x for v in vertices}
    for v, x in out.items():
        if x <= 0:
            raise ValueError(f"heat assignment must be positive, got {x} at {v!r}")
    return out


class CoolingFunction:
    """Edge weighting ``c: E(S) -> Q`` bound to a context."""

    __slots__ = ("ctx", "values")

    def __init__(self, ctx: SubsetContext, values):
        if isinstance(values, Mapping):
            vals = [Fraction(0)] * len(ctx.edges)
            for key, x in values.items():
                if isinstance(key, OrientedEdge):
                    k = ctx.edge_of(key.i, key.t)
                    sign = 1 if ctx.edges[k].i == key.i else -1
                else:
                    k = ctx.edge_of(*key)
                    sign = 1 if ctx.edges[k].i == key[0] else -1
                vals[k] = sign * as_fraction(x)
            values = vals
        values = tuple(as_fraction(x) for x in values)
        if len(values) != len(ctx.edges):
            raise DomainError(f"expected {len(ctx.edges)} edge values, got {len(values)}")
        self.ctx = ctx
        self.values = values

    @classmethod
    def zero(cls, ctx: SubsetContext) -> "CoolingFunction":
        return cls(ctx, [Fraction(0)] * len(ctx.edges))

    def value(self, u, v) -> Fraction:
        """Heat pumped from ``u`` to ``v`` along the edge {u, v}."""
        k = self.ctx.edge_of(u, v)
        x = self.values[k]
        return x if self.ctx.edges[k].i == u else -x

    def items(self):
        return zip(self.ctx.edges, self.values)

    def __eq__(self, other):
        if not isinstance(other, CoolingFunction):
            return NotImplemented
        return self.ctx.edges == other.ctx.edges and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"CoolingFunction(norm={cooling_norm(self)}, |E(S)|={len(self.values)})"

    def to_json(self) -> list[dict]:
        from .formats import vertex_to_json

        return [
            {
                "edge": [vertex_to_json(x) for x in e.key],
                "oriented": [vertex_to_json(e.i), vertex_to_json(e.t)],
                "value": format_rational(x),
            }
            for e, x in self.items()
        ]

    @classmethod
    def from_json(cls, ctx: SubsetContext, data: list[dict]) -> "CoolingFunction":
        """Inverse of :meth:`to_json`; the record set must equal ``E(S)``."""
        from .formats import vertex_from_json

        vals: list = [None] * len(ctx.edges)
        for rec in data:
            i, t = (vertex_from_json(x) for x in rec["oriented"])
            if "edge" in rec:
                u, v = (vertex_from_json(x) for x in rec["edge"])
                if edge_key(u, v) != edge_key(i, t):
                    raise DomainError(f"record edge {rec['edge']} disagrees with its orientation")
            k = ctx.edge_of(i, t)
            if vals[k] is not None:
                raise DomainError(f"edge {ctx.edges[k].key!r} listed twice")
            x = parse_rational(rec["value"])
            vals[k] = x if ctx.edges[k].i == i else -x
        missing = [ctx.edges[k].key for k, x in enumerate(vals) if x is None]
        if missing:
            raise DomainError(f"cooling function is missing edges {missing}")
        return cls(ctx, vals)


def _check_same_ctx(c: CoolingFunction, ctx: SubsetContext):
    if c.ctx is not ctx and c.ctx.edges != ctx.edges:
        raise DomainError("cooling function belongs to a different context")


def heat_loss(c: CoolingFunction, s) -> Fraction:
    """Net heat pumped out of ``s``: outgoing minus incoming values."""
    ctx = c.ctx
    j = ctx.index.get(s)
    if j is None:
        raise DomainError(f"{s!r} is not in S")
    total = Fraction(0)
    for k, _ in ctx.incident[j]:
        total += c.values[k] if ctx.tail[k] == j else -c.values[k]
    return total


def heat_losses(c: CoolingFunction) -> dict:
    ctx = c.ctx
    loss = [Fraction(0)] * len(ctx.vertices)
    for k, x in enumerate(c.values):
        loss[ctx.tail[k]] += x
        b = ctx.head[k]
        if b >= 0:
            loss[b] -= x
    return dict(zip(ctx.vertices, loss))


def cooling_norm(c: CoolingFunction) -> Fraction:
    return max((abs(x) for x in c.values), default=Fraction(0))


@dataclass
class CoolingReport:
    ok: bool
    losses: dict
    violations: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def is_cooling(c: CoolingFunction, h0=None) -> CoolingReport:
    """Check ``heat_loss(c, s) >= h0(s)`` everywhere.

    ``violations`` maps each failing vertex to its (negative) slack.
    """
    need = heat_map(c.ctx.vertices, h0)
    losses = heat_losses(c)
    bad = {v: losses[v] - need[v] for v in c.ctx.vertices if losses[v] < need[v]}
    return CoolingReport(ok=not bad, losses=losses, violations=bad)


def _total_heat(subset, h0) -> Fraction:
    if h0 is None:
        return Fraction(len(subset))
    hm = heat_map(subset, h0)
    return sum(hm.values(), Fraction(0))


def folner_ratio(ctx: SubsetContext, S0: Iterable, h0=None) -> Fraction:
    """``H(S0) / |dE(S0)|`` with the boundary taken in the ambient graph."""
    S0 = frozenset(S0)
    if not S0:
        return Fraction(0)
    for comp in subset_components(ctx, S0):
        if not ctx.boundary_of(comp):
            raise UndefinedRatioError(
                f"component {sorted(comp, key=vertex_key)!r} of the subset has no boundary edges"
            )
    return _total_heat(S0, h0) / len(ctx.boundary_of(S0))


def boundaryless_components(ctx: SubsetContext) -> list[frozenset]:
    return [comp for comp in components(ctx) if not ctx.boundary_of(comp)]


def admits_cooling(ctx: SubsetContext) -> bool:
    """True iff every connected component of S has a boundary edge."""
    return not boundaryless_components(ctx)


def heat_flow_cooling(ctx: SubsetContext, h0=None) -> CoolingFunction:
    """Sum of one heat-flow path per vertex, each along a shortest escape route.

    Vertex ``x`` ships ``h0(x)`` units along a shortest edge path to the
    complement of S.  Exits are chosen as the first boundary edge in edge
    order; inner vertices step to their first neighbor (vertex order) one
    layer closer to the boundary.  Heat loss is exactly ``h0`` everywhere.
    """
    bad = boundaryless_components(ctx)
    if bad:
        comp = sorted(bad[0], key=vertex_key)
        raise NoCoolingFunctionError(f"component {comp!r} has no boundary edges", component=bad[0])
    hm = heat_map(ctx.vertices, h0)
    m = len(ctx.vertices)
    depth = [-1] * m
    step_edge = [-1] * m  # edge to follow out of each vertex
    nxt = [-1] * m
    frontier = deque()
    for j in range(m):
        for k, b in ctx.incident[j]:
            if b < 0:
                depth[j] = 0
                step_edge[j] = k
                frontier.append(j)
                break
    while frontier:
        # layers are processed in full so ties go to the smallest vertex
        layer = sorted(frontier)
        frontier = deque()
        claimed = {}
        for x in layer:
            for k, y in ctx.incident[x]:
                if y >= 0 and depth[y] < 0 and y not in claimed:
                    claimed[y] = (x, k)
        for y in sorted(claimed):
            x, k = claimed[y]
            depth[y] = depth[x] + 1
            step_edge[y] = k
            nxt[y] = x
            frontier.append(y)

    # accumulate heat down the escape forest, deepest vertices first
    carried = [hm[v] for v in ctx.vertices]
    vals = [Fraction(0)] * len(ctx.edges)
    for y in sorted(range(m), key=lambda j: -depth[j]):
        k = step_edge[y]
        vals[k] += carried[y] if ctx.tail[k] == y else -carried[y]
        if nxt[y] >= 0:
            carried[nxt[y]] += carried[y]
    return CoolingFunction(ctx, vals)


def _modification(ctx: SubsetContext, f: Mapping, h0) -> list[Fraction]:
    hm = heat_map(ctx.vertices, h0)
    total = Fraction(0)
    out = [Fraction(0)] * len(ctx.vertices)
    for v, x in f.items():
        j = ctx.index.get(v)
        if j is None:
            raise DomainError(f"{v!r} is not in S")
        x = as_fraction(x)
        if x < 0:
            raise ValueError(f"simplex point has negative weight {x} at {v!r}")
        total += x
        out[j] = x / hm[v]
    if total != 1:
        raise ValueError(f"simplex point weights sum to {total}, not 1")
    return out


def a_functional(ctx: SubsetContext, f: Mapping, h0=None) -> Fraction:
    """``A(f) = sum over E(S) of |f~(i(e)) - f~(t(e))|`` with ``f~ = f/h0`` on S, 0 off S."""
    ft = _modification(ctx, f, h0)
    total = Fraction(0)
    for k in range(len(ctx.edges)):
        a = ft[ctx.tail[k]]
        b = ctx.head[k]
        total += abs(a - (ft[b] if b >= 0 else 0))
    return total


def vertex_point(S0: Iterable, h0=None) -> dict:
    """The simplex point whose modification is ``1/H(S0)`` on S0 and 0 elsewhere."""
    S0 = list(S0)
    if not S0:
        raise EmptySubsetError("vertex_point needs a nonempty subset")
    hm = heat_map(S0, h0)
    H = sum(hm.values(), Fraction(0))
    return {v: hm[v] / H for v in S0}


def scale(c: CoolingFunction, lam) -> CoolingFunction:
    lam = as_fraction(lam)
    if lam <= 0:
        raise ValueError(f"scale factor must be positive, got {lam}")
    return CoolingFunction(c.ctx, [lam * x for x in c.values])
