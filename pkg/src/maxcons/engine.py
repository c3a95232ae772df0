"""Synchronous inequality-constrained PDMM iteration on the augmented graph.

One round, from the iteration-t state, does:

  1. every regular node i solves its local quadratic:
         x_i = (-1 - sum_j A_ij z_{i|j} + z_{i|i'} + c/2 s_i) / (c (d_i + 1))
  2. every directed regular edge is averaged toward the neighbor's dual:
         z_{j|i} <- (1-theta) z_{j|i} + theta (z_{i|j} + 2 c A_ij x_i)
  3. every dummy pair computes
         y_{i|i'} = z_{i|i'} - 2 c x_i + c s_i,   y_{i'|i} = z_{i'|i} + c s_i
     and exchanges duals when y_{i|i'} + y_{i'|i} > 0, otherwise reflects:
         exchange:  z_{i|i'} <- (1-theta) z_{i|i'} + theta y_{i'|i}   (and symmetrically)
         reflect:   z_{i|i'} <- (1-theta) z_{i|i'} - theta y_{i|i'}

x in step 1 uses only iteration-t duals, and steps 2-3 use iteration-t duals
with the fresh x, so all node updates within a round are order-independent.
A tie (y sum exactly 0) reflects. Dummy nodes carry no primal variable
(their A coefficient toward the regular node is zero).

In code, z_to_dummy[i] is the paper-side z_{i|i'} held at node i and
z_from_dummy[i] is z_{i'|i} held at the dummy.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from ._util import write_csv
from .exceptions import InvalidParameter, NonFinite
from .problem import ProblemInstance


@dataclass(frozen=True)
class InitSpec:
    """Auxiliary-variable initialization: the subspace-perturbation knob.

    Dummy-edge duals start at N(mu_z, sigma_z^2) toward the dummy and
    N(-mu_z, sigma_z^2) back, so their sum is near zero while each leg is
    large; regular-edge duals start at N(regular_mean, sigma_z^2).
    """

    mu_z: float
    sigma_z: float
    regular_mean: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.sigma_z) and self.sigma_z >= 0):
            raise InvalidParameter(f"sigma_z must be >= 0, got {self.sigma_z!r}")


@dataclass(frozen=True)
class EngineState:
    """Variables at one iteration.

    y_* and exchange describe the transition leaving this state (computed with
    the next x) and are None for the final snapshot of a trace.
    """

    t: int
    x: np.ndarray
    z_regular: np.ndarray
    z_to_dummy: np.ndarray
    z_from_dummy: np.ndarray
    y_to_dummy: np.ndarray | None = None
    y_from_dummy: np.ndarray | None = None
    exchange: np.ndarray | None = None


class DummyUpdate(NamedTuple):
    z_to_dummy: np.ndarray
    z_from_dummy: np.ndarray
    y_to_dummy: np.ndarray
    y_from_dummy: np.ndarray
    y_sum: np.ndarray
    exchange: np.ndarray


@dataclass(frozen=True, eq=False)
class Trace:
    """Full history of a run: states t = 0..t_max plus per-transition dummy data.

    Row t of x/z_* is the iteration-t value; row t of y_*/exchange belongs to
    the transition t -> t+1 (the paper indexes these y's by t). All arrays are
    read-only.
    """

    instance: ProblemInstance
    init: InitSpec | None
    x: np.ndarray
    z_regular: np.ndarray
    z_to_dummy: np.ndarray
    z_from_dummy: np.ndarray
    y_to_dummy: np.ndarray
    y_from_dummy: np.ndarray
    y_sum: np.ndarray
    exchange: np.ndarray

    @property
    def t_max(self) -> int:
        return self.x.shape[0] - 1

    @property
    def n(self) -> int:
        return self.instance.n

    def state(self, t: int) -> EngineState:
        last = t == self.t_max
        return EngineState(
            t=t,
            x=self.x[t],
            z_regular=self.z_regular[t],
            z_to_dummy=self.z_to_dummy[t],
            z_from_dummy=self.z_from_dummy[t],
            y_to_dummy=None if last else self.y_to_dummy[t],
            y_from_dummy=None if last else self.y_from_dummy[t],
            exchange=None if last else self.exchange[t],
        )

    @property
    def states(self):
        return tuple(self.state(t) for t in range(self.t_max + 1))


def initialize(p: ProblemInstance, init: InitSpec) -> EngineState:
    """Draw z^(0) from the seeded generator in canonical order.

    Draw order (fixed so traces are replayable): for each node i ascending,
    first z_{i|j} for regular neighbors j ascending, then the node's dummy
    pair z_{i|i'} followed by z_{i'|i}. x^(0) = 0; it enters no update.
    """
    base = p.graph.base
    rng = np.random.default_rng(init.seed)
    n, n_dir = base.n, len(base.directed_edges)
    deg = base.degrees.astype(np.intp)
    # slot layout per node i: deg(i) regular draws, then z_{i|i'}, z_{i'|i};
    # one vectorized draw consumes the stream exactly like sequential scalars
    starts = np.concatenate([[0], np.cumsum(deg + 2)[:-1]]).astype(np.intp)
    to_slots = starts + deg
    from_slots = to_slots + 1
    loc = np.full(n_dir + 2 * n, init.regular_mean)
    loc[to_slots] = init.mu_z
    loc[from_slots] = -init.mu_z
    draws = rng.normal(loc, init.sigma_z)
    regular_mask = np.ones(n_dir + 2 * n, dtype=bool)
    regular_mask[to_slots] = False
    regular_mask[from_slots] = False
    z_regular = draws[regular_mask]
    z_to = draws[to_slots]
    z_from = draws[from_slots]
    return EngineState(
        t=0,
        x=np.zeros(base.n),
        z_regular=z_regular,
        z_to_dummy=z_to,
        z_from_dummy=z_from,
    )


def x_update(p: ProblemInstance, state: EngineState) -> np.ndarray:
    """Per-node primal update from iteration-t duals."""
    base = p.graph.base
    contrib = np.bincount(
        base.directed_owner, weights=p.a_directed * state.z_regular, minlength=base.n
    )
    return (-1.0 - contrib + (state.z_to_dummy + 0.5 * p.c * p.s)) / (
        p.c * (base.degrees + 1.0)
    )


def z_neighbor_update(p: ProblemInstance, state: EngineState, x_new: np.ndarray) -> np.ndarray:
    """Regular-edge dual update; theta-averaged, theta=1/2 matches ADMM."""
    base = p.graph.base
    rev = base.reverse_index
    nbr = base.directed_neighbor
    th = p.theta
    return (1.0 - th) * state.z_regular + th * (
        state.z_regular[rev] + 2.0 * p.c * p.a_directed[rev] * x_new[nbr]
    )


def dummy_update(p: ProblemInstance, state: EngineState, x_new: np.ndarray) -> DummyUpdate:
    """Dummy-edge dual update with the two-branch inequality rule.

    Strict y_sum > 0 exchanges; a tie reflects.
    """
    th = p.theta
    y_to = state.z_to_dummy - 2.0 * p.c * x_new + p.c * p.s
    y_from = state.z_from_dummy + p.c * p.s
    y_sum = y_to + y_from
    exchange = y_sum > 0.0
    z_to = np.where(
        exchange,
        (1.0 - th) * state.z_to_dummy + th * y_from,
        (1.0 - th) * state.z_to_dummy - th * y_to,
    )
    z_from = np.where(
        exchange,
        (1.0 - th) * state.z_from_dummy + th * y_to,
        (1.0 - th) * state.z_from_dummy - th * y_from,
    )
    return DummyUpdate(z_to, z_from, y_to, y_from, y_sum, exchange)


def run_from(
    p: ProblemInstance, state0: EngineState, t_max: int, *, init: InitSpec | None = None
) -> Trace:
    """Iterate t_max synchronous rounds from an explicit initial state."""
    if t_max < 1:
        raise InvalidParameter(f"t_max must be >= 1, got {t_max!r}")
    base = p.graph.base
    n, n_dir = base.n, len(base.directed_edges)
    X = np.empty((t_max + 1, n))
    ZR = np.empty((t_max + 1, n_dir))
    ZT = np.empty((t_max + 1, n))
    ZF = np.empty((t_max + 1, n))
    YT = np.empty((t_max, n))
    YF = np.empty((t_max, n))
    YS = np.empty((t_max, n))
    EX = np.empty((t_max, n), dtype=bool)
    X[0] = state0.x
    ZR[0] = state0.z_regular
    ZT[0] = state0.z_to_dummy
    ZF[0] = state0.z_from_dummy
    state = state0
    for t in range(t_max):
        # overflow/invalid warnings are redundant with the explicit check below
        with np.errstate(all="ignore"):
            x_new = x_update(p, state)
            z_reg = z_neighbor_update(p, state, x_new)
            du = dummy_update(p, state, x_new)
        if not (
            np.isfinite(x_new).all()
            and np.isfinite(z_reg).all()
            and np.isfinite(du.z_to_dummy).all()
            and np.isfinite(du.z_from_dummy).all()
        ):
            raise NonFinite(f"non-finite value at iteration {t + 1}")
        X[t + 1] = x_new
        ZR[t + 1] = z_reg
        ZT[t + 1] = du.z_to_dummy
        ZF[t + 1] = du.z_from_dummy
        YT[t] = du.y_to_dummy
        YF[t] = du.y_from_dummy
        YS[t] = du.y_sum
        EX[t] = du.exchange
        state = EngineState(
            t=t + 1,
            x=x_new,
            z_regular=z_reg,
            z_to_dummy=du.z_to_dummy,
            z_from_dummy=du.z_from_dummy,
        )
    for arr in (X, ZR, ZT, ZF, YT, YF, YS, EX):
        arr.setflags(write=False)
    return Trace(
        instance=p,
        init=init,
        x=X,
        z_regular=ZR,
        z_to_dummy=ZT,
        z_from_dummy=ZF,
        y_to_dummy=YT,
        y_from_dummy=YF,
        y_sum=YS,
        exchange=EX,
    )


def run(p: ProblemInstance, init: InitSpec, t_max: int) -> Trace:
    """Initialize from the spec and iterate; identical inputs give bit-identical traces."""
    return run_from(p, initialize(p, init), t_max, init=init)


def write_trace_csvs(trace: Trace, nodes_path: str | Path, edges_path: str | Path) -> None:
    """Per-node CSV (t,node,x,z_to_dummy,z_from_dummy,y_sum,branch) and per-edge
    CSV (t,i,j,z_i_given_j); node ids are 1-based, branch is 1 for exchange."""
    t_max, n = trace.t_max, trace.n
    node_rows = []
    for t in range(t_max + 1):
        for i in range(n):
            if t < t_max:
                ysum, branch = trace.y_sum[t, i], int(trace.exchange[t, i])
            else:
                ysum, branch = None, None
            node_rows.append(
                (
                    t,
                    i + 1,
                    trace.x[t, i],
                    trace.z_to_dummy[t, i],
                    trace.z_from_dummy[t, i],
                    ysum,
                    branch,
                )
            )
    write_csv(
        nodes_path,
        ["t", "node", "x", "z_to_dummy", "z_from_dummy", "y_sum", "branch"],
        node_rows,
    )
    directed = trace.instance.graph.base.directed_edges
    edge_rows = [
        (t, i + 1, j + 1, trace.z_regular[t, k])
        for t in range(t_max + 1)
        for k, (i, j) in enumerate(directed)
    ]
    write_csv(edges_path, ["t", "i", "j", "z_i_given_j"], edge_rows)
