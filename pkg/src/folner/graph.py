"""Locally finite graphs, finite vertex subsets and their edge sets.

A graph is a neighbor oracle over hashable vertex identifiers.  Three kinds
are built in: the integer lattice Z^d with its unit-step generators, an
explicit (finite) edge list, and the Cayley graph of a free group on reduced
words.  Everything the engines compute only touches ``E(S)`` for a finite
``S``, which :class:`SubsetContext` materialises once with a fixed,
reproducible orientation.
"""
from __future__ import annotations

from collections.abc import Hashable, Iterable
from dataclasses import dataclass

from .exceptions import (
    DomainError,
    EmptySubsetError,
    InvalidDimensionError,
    InvalidGraphError,
)

__all__ = [
    "vertex_key",
    "edge_key",
    "sort_vertices",
    "Graph",
    "GridGraph",
    "EdgeListGraph",
    "FreeGroupGraph",
    "OrientedEdge",
    "SubsetContext",
    "build_grid",
    "build_edge_list",
    "build_free_group",
    "free_group_ball",
    "subset_context",
    "components",
    "subset_components",
]


def vertex_key(v):
    """Total-order key over vertex identifiers of mixed type.

    Integers sort before strings, strings before tuples; tuples compare
    lexicographically by the keys of their entries.
    """
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vertex_key(x) for x in v))
    return (3, repr(v))


def sort_vertices(vertices: Iterable) -> list:
    return sorted(vertices, key=vertex_key)


def edge_key(u, v) -> tuple:
    """Canonical id of the undirected edge {u, v}: endpoints in vertex order."""
    return (u, v) if vertex_key(u) <= vertex_key(v) else (v, u)


class Graph:
    """Neighbor oracle.  Subclasses must be symmetric and locally finite."""

    kind = "abstract"

    def neighbors(self, v) -> tuple:
        raise NotImplementedError

    def has_vertex(self, v) -> bool:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(self.descriptor()))


class GridGraph(Graph):
    """Cayley graph of Z^d with the standard generators.

    Vertices are plain integers when ``d == 1`` and d-tuples otherwise.
    """

    kind = "grid"

    def __init__(self, d: int):
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise InvalidDimensionError(f"grid dimension must be a positive integer, got {d!r}")
        self.d = d

    def has_vertex(self, v) -> bool:
        if self.d == 1:
            return isinstance(v, int) and not isinstance(v, bool)
        return (
            isinstance(v, tuple)
            and len(v) == self.d
            and all(isinstance(x, int) and not isinstance(x, bool) for x in v)
        )

    def generators(self) -> list[tuple]:
        """Positive unit steps, one per axis."""
        if self.d == 1:
            return [1]
        return [tuple(1 if j == i else 0 for j in range(self.d)) for i in range(self.d)]

    def step(self, v, g, sign: int = 1):
        if self.d == 1:
            return v + sign * g
        return tuple(a + sign * b for a, b in zip(v, g))

    def neighbors(self, v) -> tuple:
        if not self.has_vertex(v):
            raise DomainError(f"{v!r} is not a vertex of Z^{self.d}")
        out = []
        for g in self.generators():
            out.append(self.step(v, g, 1))
            out.append(self.step(v, g, -1))
        return tuple(out)

    def descriptor(self) -> dict:
        return {"kind": "grid", "d": self.d}

    def __repr__(self):
        return f"GridGraph(d={self.d})"


class EdgeListGraph(Graph):
    kind = "edgelist"

    def __init__(self, edges: Iterable):
        adj: dict = {}
        seen = set()
        for pair in edges:
            u, v = pair
            if u == v:
                raise InvalidGraphError(f"self-loop at {u!r}")
            key = edge_key(u, v)
            if key in seen:
                continue
            seen.add(key)
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        self._adj = {u: tuple(sort_vertices(nb)) for u, nb in adj.items()}
        self._edges = tuple(sorted(seen, key=lambda e: (vertex_key(e[0]), vertex_key(e[1]))))

    @property
    def edges(self) -> tuple:
        return self._edges

    @property
    def vertices(self) -> list:
        return sort_vertices(self._adj)

    def has_vertex(self, v) -> bool:
        try:
            return v in self._adj
        except TypeError:
            return False

    def add_isolated(self, v):
        self._adj.setdefault(v, ())

    def neighbors(self, v) -> tuple:
        if not self.has_vertex(v):
            raise DomainError(f"{v!r} is not a vertex of this graph")
        return self._adj[v]

    def descriptor(self) -> dict:
        return {"kind": "edgelist", "edges": [list(e) for e in self._edges]}

    def __repr__(self):
        return f"EdgeListGraph({len(self._adj)} vertices, {len(self._edges)} edges)"


class FreeGroupGraph(Graph):
    """Cayley graph of the free group of the given rank.

    A vertex is a freely reduced word, stored as a tuple of nonzero integers
    where ``i`` is the i-th generator and ``-i`` its inverse.  The identity is
    the empty tuple.
    """

    kind = "free"

    def __init__(self, rank: int):
        if not isinstance(rank, int) or rank < 1:
            raise InvalidDimensionError(f"free group rank must be positive, got {rank!r}")
        self.rank = rank

    def letters(self) -> list[int]:
        out = []
        for i in range(1, self.rank + 1):
            out += [i, -i]
        return out

    def has_vertex(self, v) -> bool:
        if not isinstance(v, tuple):
            return False
        for j, x in enumerate(v):
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                return False
            if j and v[j - 1] == -x:
                return False
        return True

    def multiply(self, w: tuple, letter: int) -> tuple:
        if w and w[-1] == -letter:
            return w[:-1]
        return w + (letter,)

    def neighbors(self, v) -> tuple:
        if not self.has_vertex(v):
            raise DomainError(f"{v!r} is not a reduced word of rank {self.rank}")
        return tuple(self.multiply(v, a) for a in self.letters())

    def descriptor(self) -> dict:
        return {"kind": "free", "rank": self.rank}

    def __repr__(self):
        return f"FreeGroupGraph(rank={self.rank})"


def build_grid(d: int) -> GridGraph:
    return GridGraph(d)


def build_edge_list(edges: Iterable) -> EdgeListGraph:
    return EdgeListGraph(edges)


def build_free_group(rank: int) -> FreeGroupGraph:
    return FreeGroupGraph(rank)


def free_group_ball(rank: int, radius: int) -> list[tuple]:
    """All reduced words of length at most ``radius``."""
    g = FreeGroupGraph(rank)
    layer = [()]
    ball = [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for a in g.letters():
                if not w or w[-1] != -a:
                    nxt.append(w + (a,))
        ball += nxt
        layer = nxt
    return sort_vertices(ball)


@dataclass(frozen=True)
class OrientedEdge:
    i: Hashable
    t: Hashable

    @property
    def key(self) -> tuple:
        return edge_key(self.i, self.t)

    @property
    def endpoints(self) -> frozenset:
        return frozenset((self.i, self.t))

    def reversed(self) -> "OrientedEdge":
        return OrientedEdge(self.t, self.i)


class SubsetContext:
    """A finite subset ``S`` together with ``E(S)`` and its orientation.

    Boundary edges point out of ``S``; an interior edge points from its
    lower-ordered endpoint to the higher one.  Edges are listed in canonical
    key order, so two contexts built from the same data are identical.

    Besides the public view (``edges``, ``boundary``) the context carries an
    integer-indexed adjacency used by the engines: vertices are numbered in
    vertex order and ``incident[j]`` lists ``(edge_index, neighbor_index)``
    pairs with neighbor index ``-1`` for a vertex outside ``S``.
    """

    def __init__(self, graph: Graph, S: Iterable):
        S = frozenset(S)
        if not S:
            raise EmptySubsetError("the subset S must be nonempty")
        for v in S:
            if not graph.has_vertex(v):
                raise DomainError(f"{v!r} is not a vertex of {graph!r}")
        self.graph = graph
        self.S = S
        self.vertices = tuple(sort_vertices(S))
        self.index = {v: j for j, v in enumerate(self.vertices)}

        keys = set()
        for v in self.vertices:
            for w in graph.neighbors(v):
                keys.add(edge_key(v, w))
        ordered = sorted(keys, key=lambda e: (vertex_key(e[0]), vertex_key(e[1])))

        edges = []
        boundary = []
        for u, v in ordered:
            if u in S and v in S:
                edges.append(OrientedEdge(u, v))
                boundary.append(False)
            elif u in S:
                edges.append(OrientedEdge(u, v))
                boundary.append(True)
            else:
                edges.append(OrientedEdge(v, u))
                boundary.append(True)
        self.edges = tuple(edges)
        self.is_boundary = tuple(boundary)
        self.edge_index = {e.key: k for k, e in enumerate(self.edges)}
        self.boundary = frozenset(k for k, b in enumerate(boundary) if b)

        incident = [[] for _ in self.vertices]
        # endpoint indices in ctx orientation; -1 marks a vertex outside S
        self.tail = []
        self.head = []
        for k, e in enumerate(self.edges):
            a = self.index[e.i]
            b = self.index.get(e.t, -1)
            self.tail.append(a)
            self.head.append(b)
            incident[a].append((k, b))
            if b >= 0:
                incident[b].append((k, a))
        self.tail = tuple(self.tail)
        self.head = tuple(self.head)
        self.incident = tuple(tuple(sorted(x)) for x in incident)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"SubsetContext(|S|={len(self.S)}, |E(S)|={len(self.edges)}, |dE(S)|={len(self.boundary)})"

    @property
    def interior(self) -> tuple:
        return tuple(k for k, b in enumerate(self.is_boundary) if not b)

    def boundary_degree(self, v) -> int:
        j = self.index[v]
        return sum(1 for _, b in self.incident[j] if b < 0)

    def degree(self, v) -> int:
        return len(self.incident[self.index[v]])

    def edge_of(self, u, v) -> int:
        """Index of the edge {u, v} in E(S)."""
        try:
            return self.edge_index[edge_key(u, v)]
        except KeyError:
            raise DomainError(f"{{{u!r}, {v!r}}} is not an edge of E(S)") from None

    def boundary_of(self, subset: Iterable) -> list[int]:
        """Indices of edges of E(S) with exactly one endpoint in ``subset``.

        ``subset`` must lie inside S; the result is then exactly the edge
        boundary of ``subset`` in the ambient graph.
        """
        idx = self._indices(subset)
        inside = set(idx)
        out = set()
        for j in idx:
            for k, b in self.incident[j]:
                if b < 0 or b not in inside:
                    out.add(k)
        return sorted(out)

    def _indices(self, subset: Iterable) -> list[int]:
        out = []
        for v in subset:
            j = self.index.get(v)
            if j is None:
                raise DomainError(f"{v!r} is not in S")
            out.append(j)
        return sorted(set(out))


def subset_context(g: Graph, S: Iterable) -> SubsetContext:
    return SubsetContext(g, S)


def _partition(ctx: SubsetContext, idx: list[int]) -> list[frozenset]:
    inside = set(idx)
    seen = set()
    parts = []
    for j in idx:
        if j in seen:
            continue
        comp = [j]
        seen.add(j)
        stack = [j]
        while stack:
            x = stack.pop()
            for _, y in ctx.incident[x]:
                if y >= 0 and y in inside and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        parts.append(frozenset(ctx.vertices[x] for x in comp))
    return parts


def components(ctx: SubsetContext) -> list[frozenset]:
    """Connected components of S through interior edges, in vertex order."""
    return _partition(ctx, list(range(len(ctx.vertices))))


def subset_components(ctx: SubsetContext, subset: Iterable) -> list[frozenset]:
    """Connected components of a subset of S through its own interior edges."""
    return _partition(ctx, ctx._indices(subset))
