"""Scikit-learn style front door for the consensus solver.

MaxConsensus treats each network node as one sample: fit(X) takes the n
private scalars, runs privacy-preserving max consensus over the configured
(or generated) topology, and exposes the per-node results as fitted
attributes. get_params/set_params/clone compose with the usual sklearn
tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_random_state

from .engine import InitSpec, run
from .exceptions import InvalidParameter
from .graph import Graph, augment, generate_rgg
from .problem import assemble, solve_exact


class MaxConsensus(BaseEstimator):
    """Privacy-preserving distributed maximum consensus.

    Parameters:
        c: penalty parameter (> 0), controls convergence rate.
        theta: dual averaging constant in (0, 1]; 1/2 is ADMM-equivalent.
        mu_z: mean magnitude of the dummy-edge dual initialization.
        sigma_z: std of all dual initializations (the privacy knob).
        regular_mean: mean of regular-edge dual initialization.
        t_max: number of synchronous rounds.
        graph: explicit topology; None generates a connected RGG over the
            fitted nodes.
        rgg_radius: radius for the generated RGG; None uses the
            connectivity-threshold default.
        random_state: seeds both graph generation and dual initialization.

    Attributes (after fit):
        graph_: topology used.
        trace_: full iteration history.
        x_: per-node final estimates of the network maximum.
        consensus_value_: mean of x_ (the network's agreed value).
        max_error_: worst |x_i - true max| across nodes.
        n_iter_: rounds run.
    """

    def __init__(
        self,
        c: float = 1.0,
        theta: float = 0.5,
        mu_z: float = 1000.0,
        sigma_z: float = 1.0,
        regular_mean: float = 0.0,
        t_max: int = 5000,
        graph: Graph | None = None,
        rgg_radius: float | None = None,
        random_state=None,
    ):
        self.c = c
        self.theta = theta
        self.mu_z = mu_z
        self.sigma_z = sigma_z
        self.regular_mean = regular_mean
        self.t_max = t_max
        self.graph = graph
        self.rgg_radius = rgg_radius
        self.random_state = random_state

    @staticmethod
    def _check_X(X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 2 and X.shape[1] == 1:
            X = X[:, 0]
        if X.ndim != 1:
            raise InvalidParameter("X must be a 1d array of per-node values")
        if X.size < 1:
            raise InvalidParameter("X must contain at least one node value")
        if not np.isfinite(X).all():
            raise InvalidParameter("X must be finite")
        return X

    def fit(self, X, y=None):
        """Run consensus over the node values X (shape (n,) or (n, 1))."""
        s = self._check_X(X)
        rs = check_random_state(self.random_state)
        graph_seed = int(rs.randint(0, 2**31 - 1))
        init_seed = int(rs.randint(0, 2**31 - 1))
        if self.graph is not None:
            if self.graph.n != s.size:
                raise InvalidParameter(
                    f"graph has {self.graph.n} nodes but X has {s.size} values"
                )
            g = self.graph
        else:
            g = generate_rgg(s.size, self.rgg_radius, seed=graph_seed)
        p = assemble(augment(g), s, self.c, self.theta)
        init = InitSpec(
            mu_z=self.mu_z,
            sigma_z=self.sigma_z,
            regular_mean=self.regular_mean,
            seed=init_seed,
        )
        trace = run(p, init, int(self.t_max))
        self.graph_ = g
        self.trace_ = trace
        self.x_ = trace.x[-1].copy()
        self.consensus_value_ = float(self.x_.mean())
        self.max_error_ = float(np.abs(self.x_ - solve_exact(s)).max())
        self.n_iter_ = int(self.t_max)
        return self

    def fit_predict(self, X, y=None) -> np.ndarray:
        """Fit and return the per-node consensus estimates."""
        return self.fit(X, y).x_
