"""scikit-learn style wrapper: ``fit`` a subset, ``predict`` membership in S0."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .engines import ENGINES, optimize
from .graph import subset_context
from .validation import check_engine, check_graph, check_vertices


class FolnerOptimizer(BaseEstimator):
    """Find the minimum cooling norm and a maximal Følner-optimal subset of ``X``.

    ``X`` is the vertex set S, one vertex per row (for Z^2 an ``(m, 2)``
    integer array works).  After ``fit``:

    * ``norm_`` -- the minimum cooling norm N, a Fraction
    * ``optimal_subset_`` -- the set S0
    * ``cooling_`` -- a cooling function of norm N
    * ``result_`` -- the full result (a pair of them when ``engine="both"``)
    """

    def __init__(self, graph="grid2", engine="simplex", h0=None, validate=True):
        self.graph = graph
        self.engine = engine
        self.h0 = h0
        self.validate = validate

    def fit(self, X, y=None):
        g = check_graph(self.graph)
        check_engine(self.engine, ENGINES)
        ctx = subset_context(g, check_vertices(X))
        res = optimize(ctx, self.engine, self.h0, validate=self.validate)
        main = res[0] if self.engine == "both" else res
        self.context_ = ctx
        self.result_ = res
        self.norm_ = main.N
        self.optimal_subset_ = main.S0
        self.cooling_ = main.cooling
        return self

    def predict(self, X):
        """Boolean array: which rows of ``X`` lie in ``S0``."""
        check_is_fitted(self, "optimal_subset_")
        return np.array([v in self.optimal_subset_ for v in check_vertices(X)], dtype=bool)

    def score(self, X=None, y=None):
        """The minimum cooling norm as a float (larger is a worse-cooled set)."""
        check_is_fitted(self, "norm_")
        return float(self.norm_)
