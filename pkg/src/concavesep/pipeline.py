"""Solve-then-round estimator for balanced separators."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .graphs import DEFAULT_ENUMERATION_LIMIT
from .psd import PSD_TOL
from .relaxation import ProgramInstance
from .rounding import hyperplane_round
from .solver import optimize_over_vertices
from .validation import check_balance, check_exponent, check_graph, check_positive_int


class BalancedSeparator(BaseEstimator):
    """Vertex search followed by hyperplane rounding.

    Rounding starts from ``window_best`` (the best candidate whose
    bipartition has a side size inside the balance window) and falls back
    to the overall best candidate when the window is empty.

    Attributes set by ``fit``: ``result_`` (SolveResult), ``cut_``
    (CutResult), ``rounded_from_`` and ``labels_``.
    """

    def __init__(self, c=0.3, p=1.0, trials=100, random_state=0,
                 limit=DEFAULT_ENUMERATION_LIMIT, tol=PSD_TOL):
        self.c = c
        self.p = p
        self.trials = trials
        self.random_state = random_state
        self.limit = limit
        self.tol = tol

    def fit(self, X, y=None):
        g = check_graph(X)
        inst = ProgramInstance(g, check_balance(self.c), check_exponent(self.p))
        check_positive_int(self.trials, "trials")
        self.result_ = optimize_over_vertices(inst, self.limit)
        start = self.result_.window_best or self.result_.best
        self.rounded_from_ = "window_best" if self.result_.window_best is not None else "best"
        self.cut_ = hyperplane_round(start.point, g, inst.c, self.trials, int(self.random_state), self.tol)
        side = set(self.cut_.side)
        self.labels_ = np.array([int(v in side) for v in range(g.n)])
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_
