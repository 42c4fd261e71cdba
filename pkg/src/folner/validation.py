"""Input checks shared by the estimator and the CLI."""
from __future__ import annotations

from collections.abc import Iterable

from .exceptions import EmptySubsetError
from .formats import load_graph
from .graph import Graph


def _hashable(v):
    if isinstance(v, list):
        return tuple(_hashable(x) for x in v)
    if hasattr(v, "tolist"):  # numpy rows and scalars
        return _hashable(v.tolist())
    return v


def check_vertices(X: Iterable) -> list:
    """Vertices as hashable objects; list rows (e.g. a 2-column array) become tuples."""
    if X is None:
        raise EmptySubsetError("no vertices given")
    out = [_hashable(v) for v in X]
    if not out:
        raise EmptySubsetError("no vertices given")
    return out


def check_graph(graph) -> Graph:
    if isinstance(graph, Graph):
        return graph
    if isinstance(graph, str):
        return load_graph(graph)
    raise TypeError(f"graph must be a Graph or a graph spec string, got {type(graph).__name__}")


def check_engine(engine: str, allowed) -> str:
    if engine not in allowed:
        raise ValueError(f"engine must be one of {tuple(allowed)}, got {engine!r}")
    return engine
