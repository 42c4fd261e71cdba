"""One entry point over the simplex and flow engines."""
from __future__ import annotations

from .cooling import heat_map
from .exceptions import DomainError, EngineDisagreementError
from .flow import compute_N
from .graph import SubsetContext
from .result import FolnerResult
from .simplex import run

ENGINES = ("simplex", "flow", "both")


def _unit_heat(ctx: SubsetContext, h0) -> bool:
    return h0 is None or all(x == 1 for x in heat_map(ctx.vertices, h0).values())


def optimize(ctx: SubsetContext, engine: str = "simplex", h0=None, validate: bool = True):
    """Minimum cooling norm of ``S`` by the chosen engine.

    Returns a :class:`FolnerResult`; for ``engine="both"`` a pair
    ``(simplex_result, flow_result)`` whose norms were checked to agree.
    The simplex engine only handles ``h0`` identically 1.
    """
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")
    if engine in ("simplex", "both") and not _unit_heat(ctx, h0):
        raise DomainError("the simplex engine needs h0 identically 1; use the flow engine")
    if engine == "simplex":
        return run(ctx, validate=validate)
    if engine == "flow":
        return compute_N(ctx, h0)
    a = run(ctx, validate=validate)
    b = compute_N(ctx, h0)
    if a.N != b.N:
        raise EngineDisagreementError(f"simplex gives N = {a.N}, flow gives N = {b.N}", results=(a, b))
    return a, b


__all__ = ["ENGINES", "optimize", "FolnerResult"]
