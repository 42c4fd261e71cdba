"""Greedy forest simplex: maximise ``h`` over norm-1 cooling functions rel ``h``.

The state after step n is a rooted spanning forest ``F`` of S (edges
directed toward roots), a set ``R`` of saturated interior edges with a
direction, a level ``h`` and a cooling function ``c`` with

1. ``c = 1`` on ``R`` and on the boundary of S (pointing outward),
2. ``c = 0`` on interior edges outside ``F`` and ``R``,
3. heat loss exactly ``h`` at every non-root,
4. heat loss at least ``h`` at every root,

``|c| = 1``, ``c`` never equal to -1, and ``h`` maximal for ``(F, R)``.
Each step demotes tight roots and cuts tight tree edges into ``R``, then
regrows the rooted part of the forest.  When a component stays unrooted
its vertex set is Følner-optimal with ratio ``1/h``.

Given ``(F, R)`` the forest values are forced: if ``A`` is the vertex set
above a tree edge ``e`` and ``b`` the net fixed outflow of ``A`` (boundary
and ``R`` edges), then ``c(e) = |A| h - b``.  Hence ``h`` is the least of
``(1 + b)/|A|`` over tree edges and ``b/|T|`` over whole trees ``T``.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .cooling import CoolingFunction, boundaryless_components, cooling_norm, folner_ratio, heat_losses, is_cooling, scale
from .exceptions import DomainError, InvariantError, NoCoolingFunctionError, StepLimitError, UndefinedRatioError
from .formats import vertex_to_json
from .graph import OrientedEdge, SubsetContext, edge_key, sort_vertices, vertex_key
from .rational import format_rational
from .result import FolnerResult

__all__ = [
    "RootedForest",
    "SimplexState",
    "Solution",
    "StepRecord",
    "init_state",
    "solve_forest",
    "advance",
    "run",
    "rfr",
    "check_state",
]


@dataclass(frozen=True)
class RootedForest:
    """Parent map on S; roots map to ``None``."""

    parent: Mapping

    @property
    def roots(self) -> frozenset:
        return frozenset(v for v, p in self.parent.items() if p is None)

    @property
    def edges(self) -> list[OrientedEdge]:
        """Tree edges, each directed from child to parent."""
        return [OrientedEdge(v, p) for v, p in self.parent.items() if p is not None]

    def trees(self) -> dict:
        """Root -> vertex set of its tree."""
        out: dict = {}
        for v in self.parent:
            r = v
            while self.parent[r] is not None:
                r = self.parent[r]
            out.setdefault(r, set()).add(v)
        return {r: frozenset(vs) for r, vs in out.items()}


@dataclass(frozen=True)
class StepRecord:
    n: int
    h: Fraction
    tight_roots: tuple
    tight_edges: tuple  # oriented child -> parent
    r_size: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "h": format_rational(self.h),
            "tight_roots": [vertex_to_json(v) for v in self.tight_roots],
            "tight_edges": [[vertex_to_json(e.i), vertex_to_json(e.t)] for e in self.tight_edges],
            "|R|": self.r_size,
        }


class SimplexState:
    """Snapshot of ``(F, R, h, c)`` plus the per-vertex subtree data behind it.

    Vertices and edges are held by their context indices; the properties
    ``forest``, ``r_edges`` and ``c`` give the vertex-level view.  The level
    is stored as a reduced pair ``h = p/q`` so the bookkeeping stays in
    integers; edge values are only materialised on request.
    """

    __slots__ = ("ctx", "tree", "roots", "R", "p", "q", "parent", "parent_edge",
                 "pre", "pos", "size", "fixed", "tight_roots", "tight_edges")

    def __init__(self, ctx, tree, roots, R, p, q, parent, parent_edge, pre, pos, size, fixed,
                 tight_roots, tight_edges):
        self.ctx = ctx
        self.tree = tree
        self.roots = roots
        self.R = R  # edge index -> index of its initial vertex
        self.p = p
        self.q = q
        self.parent = parent
        self.parent_edge = parent_edge
        self.pre = pre  # DFS preorder; every subtree is a contiguous slice
        self.pos = pos
        self.size = size
        self.fixed = fixed  # net fixed outflow of the subtree, per vertex
        self.tight_roots = tight_roots
        self.tight_edges = tight_edges

    @property
    def h(self) -> Fraction:
        return Fraction(self.p, self.q)

    def scaled_values(self) -> list[int]:
        """Edge values times ``q``, in context orientation."""
        ctx = self.ctx
        p, q = self.p, self.q
        vals = [0] * len(ctx.edges)
        for k in ctx.boundary:
            vals[k] = q
        for k, a in self.R.items():
            vals[k] = q if ctx.tail[k] == a else -q
        for j, k in enumerate(self.parent_edge):
            if k >= 0:
                x = self.size[j] * p - self.fixed[j] * q
                vals[k] = x if ctx.tail[k] == j else -x
        return vals

    @property
    def values(self) -> tuple:
        q = self.q
        return tuple(Fraction(x, q) for x in self.scaled_values())

    @property
    def c(self) -> CoolingFunction:
        return CoolingFunction(self.ctx, self.values)

    @property
    def forest(self) -> RootedForest:
        V = self.ctx.vertices
        return RootedForest({V[j]: (None if p < 0 else V[p]) for j, p in enumerate(self.parent)})

    @property
    def r_edges(self) -> frozenset:
        ctx = self.ctx
        out = set()
        for k, a in self.R.items():
            e = ctx.edges[k]
            out.add(e if ctx.index[e.i] == a else e.reversed())
        return frozenset(out)

    def subtree(self, j: int) -> list[int]:
        """Indices of the vertices at or above ``j``."""
        i = self.pos[j]
        return self.pre[i:i + self.size[j]]

    def __repr__(self):
        return f"SimplexState(h={self.h}, |F|={len(self.tree)}, |R|={len(self.R)}, roots={len(self.roots)})"


@dataclass
class Solution:
    S0: frozenset
    h: Fraction
    c: CoolingFunction
    state: SimplexState
    R: dict = field(default_factory=dict)  # R'_n at termination, edge index -> initial index


def _fixed_outflow(ctx: SubsetContext, R: Mapping) -> list[int]:
    out = [0] * len(ctx.vertices)
    for k in ctx.boundary:
        out[ctx.tail[k]] += 1
    for k, a in R.items():
        b = ctx.head[k] if ctx.tail[k] == a else ctx.tail[k]
        out[a] += 1
        out[b] -= 1
    return out


def _solve(ctx: SubsetContext, tree: frozenset, roots: frozenset, R: Mapping) -> SimplexState:
    m = len(ctx.vertices)
    for k in tree:
        if ctx.head[k] < 0:
            raise DomainError("boundary edges cannot be tree edges")
    incident = ctx.incident
    parent = [-1] * m
    parent_edge = [-1] * m
    seen = [False] * m
    pre = []
    for r in sorted(roots):
        if seen[r]:
            raise InvariantError("two roots in one tree")
        seen[r] = True
        stack = [r]
        while stack:
            x = stack.pop()
            pre.append(x)
            px = parent_edge[x]
            for k, y in reversed(incident[x]):
                if k == px or k not in tree:
                    continue
                if seen[y]:
                    raise InvariantError("forest contains a cycle or shares a tree between roots")
                seen[y] = True
                parent[y] = x
                parent_edge[y] = k
                stack.append(y)
    if len(pre) != m:
        raise InvariantError("forest leaves some vertex in an unrooted component")
    pos = [0] * m
    for i, x in enumerate(pre):
        pos[x] = i

    fixed = _fixed_outflow(ctx, R)
    size = [1] * m
    for x in reversed(pre):
        y = parent[x]
        if y >= 0:
            size[y] += size[x]
            fixed[y] += fixed[x]

    # h = min of (fixed + 1)/size over tree edges and fixed/size over roots
    p = q = None
    for j in range(m):
        num = fixed[j] + 1 if parent[j] >= 0 else fixed[j]
        den = size[j]
        if p is None or num * q < p * den:
            p, q = num, den
    h = Fraction(p, q)
    p, q = h.numerator, h.denominator

    tight_edges = []
    for j in range(m):
        if parent[j] >= 0:
            x = size[j] * p - fixed[j] * q
            if x <= -q:
                k = parent_edge[j]
                raise InvariantError(
                    f"tree edge {ctx.edges[k].key!r} takes value {Fraction(x, q)} <= -1 at the maximal h"
                )
            if x == q:
                tight_edges.append(j)
    tight_roots = [r for r in sorted(roots) if fixed[r] * q == size[r] * p]
    return SimplexState(ctx, frozenset(tree), frozenset(roots), dict(R), p, q, tuple(parent),
                        tuple(parent_edge), tuple(pre), tuple(pos), tuple(size), tuple(fixed),
                        tuple(tight_roots), tuple(tight_edges))


def _require_cooling(ctx: SubsetContext):
    bad = boundaryless_components(ctx)
    if bad:
        raise NoCoolingFunctionError(
            f"component {sorted(bad[0], key=vertex_key)!r} has no boundary edges", component=bad[0]
        )


def init_state(ctx: SubsetContext) -> SimplexState:
    """Step 0: edgeless forest, every vertex a root, ``R`` empty.

    ``h`` is the least boundary degree over S, which is 0 when some vertex
    has no boundary edge.
    """
    _require_cooling(ctx)
    return _solve(ctx, frozenset(), frozenset(range(len(ctx.vertices))), {})


def _forest_indices(ctx: SubsetContext, forest: RootedForest):
    if set(forest.parent) != set(ctx.S):
        raise DomainError("forest must span exactly S")
    tree = set()
    roots = set()
    for v, p in forest.parent.items():
        if p is None:
            roots.add(ctx.index[v])
        else:
            k = ctx.edge_of(v, p)
            if ctx.is_boundary[k]:
                raise DomainError(f"tree edge {(v, p)!r} leaves S")
            tree.add(k)
    return frozenset(tree), frozenset(roots)


def _r_indices(ctx: SubsetContext, R: Iterable) -> dict:
    out = {}
    for e in R:
        i, t = (e.i, e.t) if isinstance(e, OrientedEdge) else e
        k = ctx.edge_of(i, t)
        if ctx.is_boundary[k]:
            raise DomainError(f"R edge {(i, t)!r} is a boundary edge")
        out[k] = ctx.index[i]
    return out


def solve_forest(ctx: SubsetContext, forest: RootedForest, R: Iterable = ()) -> tuple[Fraction, CoolingFunction]:
    """Maximal ``h`` admitting a norm-1 cooling function for ``(S, F, R, h)``, and that function."""
    tree, roots = _forest_indices(ctx, forest)
    Rk = _r_indices(ctx, R)
    if tree & set(Rk):
        raise DomainError("R must be disjoint from the forest")
    st = _solve(ctx, tree, roots, Rk)
    return st.h, st.c


def advance(state: SimplexState):
    """One step: returns the next :class:`SimplexState` or a :class:`Solution`."""
    ctx = state.ctx
    m = len(ctx.vertices)
    roots = set(state.roots) - set(state.tight_roots)
    tree = set(state.tree)
    R = dict(state.R)
    for j in state.tight_edges:
        k = state.parent_edge[j]
        tree.discard(k)
        R[k] = j  # keeps its forest direction, child toward parent

    # cutting the tight edges leaves the subtrees above each cut; preorder
    # reaches the lowest vertex of a piece before the rest of it
    cut = set(state.tight_edges)
    comp = [-1] * m
    members = []
    for x in state.pre:
        if state.parent[x] < 0 or x in cut:
            comp[x] = len(members)
            members.append([x])
        else:
            comp[x] = comp[state.parent[x]]
            members[comp[x]].append(x)

    rooted = [False] * m
    for r in roots:
        for x in members[comp[r]]:
            rooted[x] = True
    queue = deque(j for j in range(m) if rooted[j])
    while queue:
        x = queue.popleft()
        for k, y in ctx.incident[x]:
            if y < 0 or rooted[y]:
                continue
            a = R.get(k)
            if a is not None and a != x:
                continue  # saturated edge pointing into the rooted part
            tree.add(k)
            if a is not None:
                del R[k]
            for z in members[comp[y]]:
                rooted[z] = True
                queue.append(z)

    if not all(rooted):
        S0 = frozenset(ctx.vertices[j] for j in range(m) if not rooted[j])
        return Solution(S0=S0, h=state.h, c=state.c, state=state, R=R)
    nxt = _solve(ctx, frozenset(tree), frozenset(roots), R)
    if nxt.h <= state.h:
        raise InvariantError(f"h failed to increase ({state.h} -> {nxt.h})")
    return nxt


def rfr(ctx: SubsetContext, S0: Iterable, forest_edges: Iterable, R: Iterable) -> Fraction:
    """Følner ratio of ``S0`` relative to a forest and a set of directed saturated edges.

    ``|S0|`` over the number of boundary-of-S and forest edges with exactly
    one endpoint in ``S0``, plus ``R`` edges leaving ``S0``, minus ``R`` edges
    entering it.
    """
    S0 = frozenset(S0)
    den = _relative_boundary(ctx, S0, forest_edges, R)
    if den == 0:
        raise UndefinedRatioError("relative boundary count is zero")
    return Fraction(len(S0), den)


def _relative_boundary(ctx: SubsetContext, S0: frozenset, forest_edges: Iterable, R: Iterable) -> int:
    forest = {edge_key(*e) if not isinstance(e, OrientedEdge) else e.key for e in forest_edges}
    den = 0
    for k in ctx.boundary:
        if ctx.edges[k].i in S0:
            den += 1
    for u, v in forest:
        if (u in S0) != (v in S0):
            den += 1
    for e in R:
        i, t = (e.i, e.t) if isinstance(e, OrientedEdge) else e
        den += (i in S0) - (t in S0)
    return den


def check_state(state: SimplexState) -> None:
    """Raise :class:`InvariantError` unless conditions 1-4 hold exactly with ``|c| = 1``.

    Works on the values scaled by the denominator of ``h``, so each check
    is an integer comparison.
    """
    ctx = state.ctx
    p, q = state.p, state.q
    vals = state.scaled_values()
    toward_root = {k: j for j, k in enumerate(state.parent_edge) if k >= 0}
    if set(toward_root) != set(state.tree):
        raise InvariantError("parent edges disagree with the forest")
    for k, x in enumerate(vals):
        if k in state.R:
            if k in toward_root:
                raise InvariantError(f"edge {ctx.edges[k].key!r} is in both F and R")
            want = q if ctx.tail[k] == state.R[k] else -q
            if x != want:
                raise InvariantError(f"R edge {ctx.edges[k].key!r} has value {Fraction(x, q)}")
        elif ctx.is_boundary[k]:
            if x != q:
                raise InvariantError(f"boundary edge {ctx.edges[k].key!r} has value {Fraction(x, q)}")
        elif k in toward_root:
            if ctx.tail[k] != toward_root[k]:
                x = -x
            if x <= -q or x > q:
                raise InvariantError(f"tree edge {ctx.edges[k].key!r} has value {Fraction(x, q)}")
        elif x != 0:
            raise InvariantError(f"free edge {ctx.edges[k].key!r} has value {Fraction(x, q)}")
    if max(abs(x) for x in vals) != q:
        raise InvariantError("norm differs from 1")
    loss = [0] * len(ctx.vertices)
    for k, x in enumerate(vals):
        loss[ctx.tail[k]] += x
        b = ctx.head[k]
        if b >= 0:
            loss[b] -= x
    for j, v in enumerate(ctx.vertices):
        if j in state.roots:
            if loss[j] < p:
                raise InvariantError(f"root {v!r} loses {Fraction(loss[j], q)} < h = {state.h}")
        elif loss[j] != p:
            raise InvariantError(f"vertex {v!r} loses {Fraction(loss[j], q)} != h = {state.h}")


def _check_tight_ratios(state: SimplexState) -> None:
    """Every tight root or edge cuts off a set ``A`` with ``h = 1/RFR(A)``."""
    ctx = state.ctx
    tree, R = state.tree, state.R
    for j in list(state.tight_roots) + list(state.tight_edges):
        above = state.subtree(j)
        inside = set(above)
        den = 0
        for x in above:
            for k, y in ctx.incident[x]:
                if y < 0:
                    den += 1
                elif y not in inside:
                    if k in tree:
                        den += 1
                    elif k in R:
                        den += 1 if R[k] == x else -1
        # h = 1/RFR(above), multiplied out so that h = 0 is covered
        if len(above) * state.p != den * state.q:
            raise InvariantError(f"h != 1/RFR at tight element above {ctx.vertices[j]!r}")


def run(ctx: SubsetContext, validate: bool = True) -> FolnerResult:
    """Iterate :func:`advance` to completion; heat assignment is identically 1.

    With ``validate`` every state is checked against its invariants and
    every tight element against ``h = 1/RFR``.
    """
    state = init_state(ctx)
    limit = len(ctx.vertices) * len(ctx.edges)
    steps = []
    n = 0
    while True:
        if validate:
            check_state(state)
            _check_tight_ratios(state)
        steps.append(StepRecord(
            n=n,
            h=state.h,
            tight_roots=tuple(ctx.vertices[j] for j in state.tight_roots),
            tight_edges=tuple(
                OrientedEdge(ctx.vertices[j], ctx.vertices[state.parent[j]]) for j in state.tight_edges
            ),
            r_size=len(state.R),
        ))
        out = advance(state)
        n += 1
        if isinstance(out, Solution):
            break
        if n > limit:
            raise StepLimitError(f"simplex exceeded {limit} steps")
        state = out

    h = out.h
    if h <= 0:
        raise InvariantError("terminated with h = 0")
    N = 1 / h
    c_opt = scale(out.c, N)
    if folner_ratio(ctx, out.S0) != N:
        raise InvariantError(f"FR(S0) = {folner_ratio(ctx, out.S0)} differs from N = {N}")
    if not is_cooling(c_opt).ok or cooling_norm(c_opt) != N:
        raise InvariantError("rescaled cooling function is not optimal")
    return FolnerResult(N=N, S0=out.S0, cooling=c_opt, engine="simplex", steps=steps)
