"""Cooling norms, Følner ratios and Følner-optimal subsets of finite graph subsets.

Three engines compute the minimum cooling norm ``N = max FR(S0)`` exactly:
a modified simplex method (:mod:`folner.simplex`), a max-flow Dinkelbach
iteration (:mod:`folner.flow`) and exhaustive enumeration
(:mod:`folner.brute`).  :mod:`folner.peeling` and :mod:`folner.lattice`
cover peelings, split graphs and the Z^2 diamond/octagon constructions.
"""
from .brute import BruteResult, enumerate_max_fr, verify_maximal_containment
from .cooling import (
    CoolingFunction,
    a_functional,
    admits_cooling,
    cooling_norm,
    folner_ratio,
    heat_flow_cooling,
    heat_loss,
    heat_losses,
    is_cooling,
    scale,
    vertex_point,
)
from .engines import optimize
from .estimator import FolnerOptimizer
from .exceptions import *  # noqa: F401,F403
from .flow import compute_N, feasible_norm, violating_subset
from .graph import (
    EdgeListGraph,
    FreeGroupGraph,
    GridGraph,
    OrientedEdge,
    SubsetContext,
    build_edge_list,
    build_free_group,
    build_grid,
    free_group_ball,
    subset_context,
)
from .result import FolnerResult
from .simplex import advance, init_state, rfr, run, solve_forest

__version__ = "0.1.0"
