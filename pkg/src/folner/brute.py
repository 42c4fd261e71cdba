"""Exhaustive ground truth: maximise the Følner ratio over every subset of S.

Subsets are visited in Gray-code order so each step toggles one vertex and
updates the boundary count and total heat in O(degree).  Subsets having a
component without boundary edges are skipped.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cooling import heat_map
from .exceptions import ResourceGuardError
from .graph import FreeGroupGraph, GridGraph, SubsetContext

__all__ = ["BruteResult", "DEFAULT_CAP", "enumerate_max_fr", "verify_maximal_containment"]

DEFAULT_CAP = 24


@dataclass(frozen=True)
class BruteResult:
    N: Fraction
    optimal: tuple  # every maximiser, as frozensets, in visiting order
    union: frozenset
    visited: int


def _guard(ctx: SubsetContext, cap: int):
    if len(ctx.vertices) > cap:
        raise ResourceGuardError(f"|S| = {len(ctx.vertices)} exceeds the enumeration cap {cap}")


def enumerate_max_fr(ctx: SubsetContext, h0=None, cap: int = DEFAULT_CAP) -> BruteResult:
    _guard(ctx, cap)
    m = len(ctx.vertices)
    hm = heat_map(ctx.vertices, h0)
    den = lcm(*(x.denominator for x in hm.values()))
    weight = [int(hm[v] * den) for v in ctx.vertices]
    nbrs = [[b for _, b in ctx.incident[j]] for j in range(m)]
    # components of a subset of an infinite connected graph always have boundary
    always_valid = isinstance(ctx.graph, (GridGraph, FreeGroupGraph))

    def valid(mask: int) -> bool:
        if always_valid:
            return True
        seen = 0
        for j in range(m):
            bit = 1 << j
            if not mask & bit or seen & bit:
                continue
            seen |= bit
            stack = [j]
            open_ = False
            while stack:
                x = stack.pop()
                for y in nbrs[x]:
                    if y < 0 or not mask >> y & 1:
                        open_ = True
                    elif not seen >> y & 1:
                        seen |= 1 << y
                        stack.append(y)
            if not open_:
                return False
        return True

    inset = [False] * m
    mask = 0
    heat = 0
    bcount = 0
    best_h, best_b = 0, 1
    optimal = []
    for i in range(1, 1 << m):
        j = (i & -i).bit_length() - 1
        if inset[j]:
            inset[j] = False
            mask ^= 1 << j
            heat -= weight[j]
            for y in nbrs[j]:
                bcount += 1 if y >= 0 and inset[y] else -1
        else:
            for y in nbrs[j]:
                bcount += -1 if y >= 0 and inset[y] else 1
            inset[j] = True
            mask ^= 1 << j
            heat += weight[j]
        if bcount == 0:
            continue
        lhs = heat * best_b
        rhs = best_h * bcount
        if lhs < rhs:
            continue
        if not valid(mask):
            continue
        if lhs > rhs:
            best_h, best_b = heat, bcount
            optimal = [mask]
        else:
            optimal.append(mask)

    verts = ctx.vertices
    sets = tuple(frozenset(verts[j] for j in range(m) if mk >> j & 1) for mk in optimal)
    union_mask = 0
    for mk in optimal:
        union_mask |= mk
    union = frozenset(verts[j] for j in range(m) if union_mask >> j & 1)
    return BruteResult(
        N=Fraction(best_h, best_b * den),
        optimal=sets,
        union=union,
        visited=(1 << m) - 1,
    )


def verify_maximal_containment(ctx: SubsetContext, S0, h0=None, cap: int = DEFAULT_CAP) -> bool:
    """True iff every Følner-optimal subset of S lies inside ``S0``."""
    S0 = frozenset(S0)
    res = enumerate_max_fr(ctx, h0, cap)
    return all(T <= S0 for T in res.optimal)
