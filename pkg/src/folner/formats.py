"""File formats: vertex tokens, subset and edge-list files, graph descriptors.

Vertex token grammar (one token per subset-file line, two per edge-list
line):

* ``-?[0-9]+``            an integer vertex, e.g. a point of Z
* ``x,y[,...]``           a tuple of integers, optionally in parentheses;
                          ``3,`` is the 1-tuple and ``()`` the empty tuple
* anything else            a string vertex

Blank lines and lines starting with ``#`` are ignored.  In JSON, vertices are
integers, strings, or (nested) arrays standing for tuples.
"""
from __future__ import annotations

import json
import re
from pathlib import Path

from .exceptions import InvalidGraphError
from .graph import EdgeListGraph, FreeGroupGraph, Graph, GridGraph, sort_vertices

__all__ = [
    "parse_vertex_token",
    "format_vertex_token",
    "vertex_to_json",
    "vertex_from_json",
    "read_subset",
    "write_subset",
    "read_edge_list",
    "graph_from_descriptor",
    "load_graph",
    "to_dot",
]

_INT = re.compile(r"^[+-]?\d+$")


def parse_vertex_token(tok: str):
    tok = tok.strip()
    if _INT.match(tok):
        return int(tok)
    body = tok
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1].strip()
        if not body:
            return ()
    if "," in body:
        parts = [p.strip() for p in body.split(",")]
        if parts and parts[-1] == "":
            parts = parts[:-1]
        if parts and all(_INT.match(p) for p in parts):
            return tuple(int(p) for p in parts)
    return tok


def format_vertex_token(v) -> str:
    if isinstance(v, int):
        return str(v)
    if isinstance(v, tuple) and all(isinstance(x, int) for x in v):
        if not v:
            return "()"
        if len(v) == 1:
            return f"{v[0]},"
        return ",".join(str(x) for x in v)
    return str(v)


def vertex_to_json(v):
    if isinstance(v, tuple):
        return [vertex_to_json(x) for x in v]
    return v


def vertex_from_json(x):
    if isinstance(x, list):
        return tuple(vertex_from_json(y) for y in x)
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return x
    raise ValueError(f"unsupported vertex literal {x!r}")


def _lines(text: str):
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line


def read_subset(path) -> list:
    """Read a subset file: one vertex token per line."""
    return [parse_vertex_token(line) for line in _lines(Path(path).read_text())]


def write_subset(path, vertices) -> None:
    text = "".join(format_vertex_token(v) + "\n" for v in sort_vertices(vertices))
    Path(path).write_text(text)


def read_edge_list(path) -> EdgeListGraph:
    edges = []
    for line in _lines(Path(path).read_text()):
        toks = line.split()
        if len(toks) != 2:
            raise InvalidGraphError(f"edge-list line needs two vertex tokens: {line!r}")
        edges.append((parse_vertex_token(toks[0]), parse_vertex_token(toks[1])))
    return EdgeListGraph(edges)


def graph_from_descriptor(desc: dict) -> Graph:
    kind = desc.get("kind")
    if kind == "grid":
        return GridGraph(desc.get("d", 2))
    if kind == "edgelist":
        return EdgeListGraph((vertex_from_json(u), vertex_from_json(v)) for u, v in desc.get("edges", []))
    if kind == "free":
        return FreeGroupGraph(desc.get("rank", 2))
    raise InvalidGraphError(f"unknown graph kind {kind!r}")


_SHORTHAND = re.compile(r"^(grid|free)(\d+)$")


def load_graph(spec: str) -> Graph:
    """Resolve a graph argument.

    Accepts a shorthand (``grid2``, ``free3``), inline JSON descriptor, a
    path to a JSON descriptor, or a path to an edge-list file.
    """
    m = _SHORTHAND.match(spec.strip())
    if m:
        n = int(m.group(2))
        return GridGraph(n) if m.group(1) == "grid" else FreeGroupGraph(n)
    if spec.lstrip().startswith("{"):
        return graph_from_descriptor(json.loads(spec))
    path = Path(spec)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return graph_from_descriptor(json.loads(text))
    return read_edge_list(path)


def _dot_id(v) -> str:
    return json.dumps(format_vertex_token(v))


def to_dot(cooling, highlight=()) -> str:
    """DOT rendering of E(S): highlighted vertices filled, edges labelled by value."""
    from .rational import format_rational

    ctx = cooling.ctx
    highlight = frozenset(highlight)
    out = ["digraph cooling {", "  node [shape=circle];"]
    for v in ctx.vertices:
        style = ' style=filled fillcolor="lightblue"' if v in highlight else ""
        out.append(f"  {_dot_id(v)} [label={_dot_id(v)}{style}];")
    outside = sort_vertices({e.t for e in ctx.edges if e.t not in ctx.S})
    for v in outside:
        out.append(f"  {_dot_id(v)} [label={_dot_id(v)} style=dashed];")
    for e, x in cooling.items():
        out.append(f'  {_dot_id(e.i)} -> {_dot_id(e.t)} [label="{format_rational(x)}"];')
    out.append("}")
    return "\n".join(out) + "\n"
