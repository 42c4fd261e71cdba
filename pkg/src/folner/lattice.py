"""Closed forms and constructions on Z^2: diamonds, octagons, difference diagrams.

``B(n)`` is the diamond ``|x| + |y| <= n`` and ``B(n, k)`` what is left of it
after cutting ``k`` layers off each of its four corners.  Everything here is
exact integer or rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .cooling import CoolingFunction, heat_losses
from .exceptions import DomainError, InconsistentDiagramError, InvariantError
from .graph import GridGraph, SubsetContext, build_grid, subset_context
from .rational import as_fraction

__all__ = [
    "ball",
    "truncated",
    "rectangle",
    "fr_formula",
    "k0",
    "fr_profile",
    "is_unimodal",
    "trichotomy_check",
    "OctagonSides",
    "octagon_ratio",
    "DifferenceDiagram",
    "diff_diagram",
    "boundary_values",
    "reconstruct",
    "rectangle_optimal",
    "layer_peeling_test",
]


def _check_nk(n: int, k: int):
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    if not 0 <= k <= ceil(n / 2):
        raise DomainError(f"k must lie in [0, {ceil(n / 2)}] for n = {n}, got {k}")


def ball(n: int) -> frozenset:
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    return frozenset((x, y) for x in range(-n, n + 1) for y in range(-n, n + 1) if abs(x) + abs(y) <= n)


def truncated(n: int, k: int) -> frozenset:
    _check_nk(n, k)
    r = n - k
    return frozenset(
        (x, y) for x in range(-r, r + 1) for y in range(-r, r + 1) if abs(x) + abs(y) <= n
    )


def rectangle(m: int, n: int) -> frozenset:
    """``m`` columns by ``n`` rows with its lower left corner at the origin."""
    if m < 1 or n < 1:
        raise DomainError(f"rectangle sides must be positive, got {m}x{n}")
    return frozenset((x, y) for x in range(m) for y in range(n))


def fr_formula(n: int, k: int) -> Fraction:
    _check_nk(n, k)
    return Fraction(2 * n * n + 2 * n + 1 - 4 * k * k, 8 * n + 4 - 8 * k)


def _p(n: int, k: int) -> int:
    return 4 * k * k - 8 * n * k + 2 * n * n - 2 * n - 1


def k0(n: int) -> int:
    """Depth at which ``FR(B(n, k))`` peaks: the least ``k >= 0`` with ``p(k) < 0``."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    k = 0
    while _p(n, k) >= 0:
        k += 1
    return k


def fr_profile(n: int) -> list[Fraction]:
    return [fr_formula(n, k) for k in range(ceil(n / 2) + 1)]


def is_unimodal(n: int) -> bool:
    """Strictly up on ``[0, k0]`` and strictly down on ``[k0, ceil(n/2)]``."""
    prof = fr_profile(n)
    top = k0(n)
    up = all(prof[k] < prof[k + 1] for k in range(top))
    down = all(prof[k] > prof[k + 1] for k in range(top, len(prof) - 1))
    return up and down


def _rel(a: Fraction, b: Fraction) -> str:
    return "<" if a < b else ">" if a > b else "="


def trichotomy_check(n: int, k: int) -> str:
    """Common relation of ``FR(k+1) ? FR(k)``, ``FR(k+1) ? (2k+1)/2`` and ``FR(k) ? (2k+1)/2``.

    Raises :class:`InvariantError` if the three disagree.
    """
    if not 0 <= k < ceil(n / 2):
        raise DomainError(f"k must lie in [0, {ceil(n / 2)}) for n = {n}, got {k}")
    a, b = fr_formula(n, k + 1), fr_formula(n, k)
    q = Fraction(2 * k + 1, 2)
    rels = (_rel(a, b), _rel(a, q), _rel(b, q))
    if len(set(rels)) != 1:
        raise InvariantError(f"trichotomy fails at n={n}, k={k}: {rels}")
    return rels[0]


@dataclass(frozen=True)
class OctagonSides:
    """Side lengths of ``B(n, k0)``.

    The diagonal side is ``sqrt(2) * leg``, so it is kept through its square
    ``ell_sq = 2 * leg**2``; ``axis = 2 * k0`` is the length of a horizontal
    side.  ``degenerate`` flags a square or a diamond.
    """

    n: int
    k0: int
    ell_sq: int
    axis: int
    degenerate: bool

    def within(self, tol) -> bool:
        """Whether ``1 - tol <= ell / axis <= 1 + tol``, decided on squares."""
        tol = as_fraction(tol)
        if self.axis == 0:
            return False
        lo, hi = (1 - tol) ** 2, (1 + tol) ** 2
        r = Fraction(self.ell_sq, self.axis * self.axis)
        return lo <= r <= hi

    def approx(self) -> float:
        return (self.ell_sq ** 0.5) / self.axis if self.axis else float("inf")


def octagon_ratio(n: int) -> OctagonSides:
    if n < 2:
        raise DomainError(f"octagon_ratio needs n >= 2, got {n}")
    k = k0(n)
    leg = n - 2 * k
    return OctagonSides(n, k, 2 * leg * leg, 2 * k, degenerate=(k == 0 or leg == 0))


@dataclass(frozen=True)
class DifferenceDiagram:
    """``D(s, g) = f(s -> s+g) - f(s-g -> s)`` for ``s`` in S and each generator ``g``."""

    values: dict
    generators: tuple

    def __getitem__(self, key):
        return self.values[key]

    def vertex_sum(self, s) -> Fraction:
        return sum((self.values[(s, g)] for g in self.generators), Fraction(0))


def _grid(ctx: SubsetContext) -> GridGraph:
    if not isinstance(ctx.graph, GridGraph):
        raise DomainError("difference diagrams are only defined here for grid graphs")
    return ctx.graph


def diff_diagram(ctx: SubsetContext, c: CoolingFunction, generators=None) -> DifferenceDiagram:
    g = _grid(ctx)
    gens = tuple(generators) if generators is not None else tuple(g.generators())
    vals = {}
    for s in ctx.vertices:
        for a in gens:
            vals[(s, a)] = c.value(s, g.step(s, a, 1)) - c.value(g.step(s, a, -1), s)
    D = DifferenceDiagram(vals, gens)
    if generators is None:
        losses = heat_losses(c)
        for s in ctx.vertices:
            if D.vertex_sum(s) != losses[s]:
                raise InvariantError(f"diagram at {s!r} does not sum to the heat loss")
    return D


def boundary_values(c: CoolingFunction) -> dict:
    """Values on ``∂E(S)``, keyed by ``(inside, outside)``."""
    ctx = c.ctx
    return {(ctx.edges[k].i, ctx.edges[k].t): c.values[k] for k in sorted(ctx.boundary)}


def reconstruct(ctx: SubsetContext, D: DifferenceDiagram, boundary: dict) -> CoolingFunction:
    """Rebuild ``f`` from its difference diagram and its values on ``∂E(S)``.

    Each generator orbit through S is entered across a boundary edge, then
    ``f(s -> s+g) = f(s-g -> s) + D(s, g)`` is applied step by step until
    it leaves S, where the result must equal the given exit value.
    """
    g = _grid(ctx)
    S = ctx.S
    vals: dict = {}
    for a in D.generators:
        for s in ctx.vertices:
            if g.step(s, a, -1) in S:
                continue  # not the start of a run
            entry = (s, g.step(s, a, -1))
            if entry not in boundary:
                raise DomainError(f"missing boundary value on {entry!r}")
            f = -as_fraction(boundary[entry])
            x = s
            while True:
                f += D[(x, a)]
                y = g.step(x, a, 1)
                if y not in S:
                    want = boundary.get((x, y))
                    if want is None:
                        raise DomainError(f"missing boundary value on {(x, y)!r}")
                    if f != as_fraction(want):
                        raise InconsistentDiagramError(
                            f"orbit of {a!r} from {s!r} exits with {f}, boundary value is {want}"
                        )
                    break
                vals[(x, y)] = f
                x = y
    for key, x in boundary.items():
        vals[key] = as_fraction(x)
    if len(vals) != len(ctx.edges):
        raise DomainError("generators do not cover every edge of E(S)")
    return CoolingFunction(ctx, vals)


def rectangle_optimal(m: int, n: int) -> CoolingFunction:
    """Optimal cooling function on the ``m x n`` rectangle, norm ``mn / (2(m+n))``.

    In units of ``1/(2(m+n))`` the diagram is ``2n`` along rows and ``2m``
    along columns, and every boundary edge carries ``mn``.
    """
    ctx = subset_context(build_grid(2), rectangle(m, n))
    unit = Fraction(1, 2 * (m + n))
    ea, eb = (1, 0), (0, 1)
    vals = {}
    for s in ctx.vertices:
        vals[(s, ea)] = 2 * n * unit
        vals[(s, eb)] = 2 * m * unit
    D = DifferenceDiagram(vals, (ea, eb))
    edge = m * n * unit
    bvals = {(e.i, e.t): edge for k, e in enumerate(ctx.edges) if ctx.is_boundary[k]}
    return reconstruct(ctx, D, bvals)


def layer_peeling_test(m: int, fr_T) -> bool:
    """A full row of ``m`` on top of ``T`` is a peeling iff ``m/2 <= FR(T)``."""
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    return Fraction(m, 2) <= as_fraction(fr_T)
