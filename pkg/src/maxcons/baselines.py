"""Representative noise-based baselines for the privacy-accuracy trade-off.

Both follow the one-line recipes of the methods they stand in for: one-shot
perturbation before max-flooding, and per-iteration noise on the broadcast
primal inside the same consensus engine. They exist to exhibit the trade-off
shape, not to replicate third-party code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import InitSpec, run
from .exceptions import InvalidParameter
from .graph import Graph
from .problem import ProblemInstance

METHODS = ("noisy-broadcast", "dp-admm")


@dataclass(frozen=True)
class BaselineConfig:
    method: str
    sigma: float
    t_max: int
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidParameter(f"method must be one of {METHODS}, got {self.method!r}")
        if self.sigma < 0:
            raise InvalidParameter(f"sigma must be >= 0, got {self.sigma!r}")


def noisy_broadcast_max(g: Graph, s, cfg: BaselineConfig) -> np.ndarray:
    """One-shot perturbation then iterative max-flooding.

    Each node broadcasts p_i = s_i + N(0, sigma^2) once and floods
    x_i <- max(x_i, max_j x_j); after diameter-many rounds every node holds
    max_i p_i. Returns the (t_max+1, n) trajectory.
    """
    s = np.asarray(s, dtype=float).reshape(-1)
    rng = np.random.default_rng(cfg.seed)
    x = s + cfg.sigma * rng.standard_normal(g.n)
    out = np.empty((cfg.t_max + 1, g.n))
    out[0] = x
    neighbor_lists = [np.array(g.neighbors(i), dtype=np.intp) for i in range(g.n)]
    for t in range(cfg.t_max):
        nxt = x.copy()
        for i in range(g.n):
            if neighbor_lists[i].size:
                nxt[i] = max(x[i], x[neighbor_lists[i]].max())
        x = nxt
        out[t + 1] = x
    return out


def dp_admm_max(p: ProblemInstance, cfg: BaselineConfig) -> np.ndarray:
    """Consensus engine with zero-initialized duals and noisy primal broadcasts.

    Every broadcast is x_i + N(0, sigma^2), freshly drawn per iteration, and
    receivers use the noisy value in their regular-edge dual updates; each
    node's own x-update and dummy updates use its true x. Returns the
    (t_max+1, n) trajectory of true node estimates. sigma = 0 reduces to the
    plain engine with zero initialization.
    """
    base = p.graph.base
    n = base.n
    rng = np.random.default_rng(cfg.seed)
    owner = base.directed_owner
    nbr = base.directed_neighbor
    rev = base.reverse_index
    a = p.a_directed
    deg = base.degrees
    th = p.theta
    c = p.c
    z = np.zeros(len(base.directed_edges))
    z_to = np.zeros(n)
    z_from = np.zeros(n)
    out = np.empty((cfg.t_max + 1, n))
    out[0] = 0.0
    for t in range(cfg.t_max):
        contrib = np.bincount(owner, weights=a * z, minlength=n)
        x_new = (-1.0 - contrib + (z_to + 0.5 * c * p.s)) / (c * (deg + 1.0))
        x_noisy = x_new + cfg.sigma * rng.standard_normal(n)
        z = (1.0 - th) * z + th * (z[rev] + 2.0 * c * a[rev] * x_noisy[nbr])
        y_to = z_to - 2.0 * c * x_new + c * p.s
        y_from = z_from + c * p.s
        exchange = (y_to + y_from) > 0.0
        z_to = np.where(exchange, (1.0 - th) * z_to + th * y_from, (1.0 - th) * z_to - th * y_to)
        z_from = np.where(
            exchange, (1.0 - th) * z_from + th * y_to, (1.0 - th) * z_from - th * y_from
        )
        out[t + 1] = x_new
    return out


def run_baseline(method: str, p: ProblemInstance, cfg: BaselineConfig) -> np.ndarray:
    if method == "noisy-broadcast":
        return noisy_broadcast_max(p.graph.base, p.s, cfg)
    if method == "dp-admm":
        return dp_admm_max(p, cfg)
    raise InvalidParameter(f"unknown baseline {method!r}")


def proposed_trajectory(p: ProblemInstance, init: InitSpec, t_max: int) -> np.ndarray:
    """The subspace-perturbation method's trajectory, for side-by-side plots."""
    return run(p, init, t_max).x
