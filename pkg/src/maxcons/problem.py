"""Max-consensus LP instance on the augmented graph.

The LP minimizes sum(x_i) subject to x_i = x_j on every regular edge and
x_i >= s_i at every node. On the augmented graph the constraints read
A_ij x_i + A_ji x_j <= b_ij with, for a regular edge (i, j), A_ij = +1 and
A_ji = -1 when i < j and b_ij = 0, and for the dummy edge of node i,
A_{ii'} = -1, A_{i'i} = 0, b_{ii'} = -s_i (so the dummy row is x_i >= s_i).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._util import fmt
from .exceptions import DimensionMismatch, EmptyInput, InvalidParameter
from .graph import AugmentedGraph, Graph, augment


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """Immutable instance: topology, private data, and all constraint coefficients.

    Attributes:
        graph: augmented topology.
        s: per-regular-node private scalar, shape (n,).
        c: positive penalty parameter controlling the convergence rate.
        theta: averaging constant in (0, 1]; 1/2 is the ADMM-equivalent default.
        a_directed: A coefficient per canonical directed regular edge (+1/-1).
        b_regular: offset per undirected regular edge (all zero).
        a_node_to_dummy: A_{ii'} per node (all -1).
        a_dummy_to_node: A_{i'i} per node (all 0).
        b_dummy: b_{ii'} per node (equals -s).
    """

    graph: AugmentedGraph
    s: np.ndarray
    c: float
    theta: float
    a_directed: np.ndarray
    b_regular: np.ndarray
    a_node_to_dummy: np.ndarray
    a_dummy_to_node: np.ndarray
    b_dummy: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.base.n


def assemble(g: AugmentedGraph | Graph, s, c: float, theta: float = 0.5) -> ProblemInstance:
    """Build a ProblemInstance, fixing every constraint coefficient.

    Args:
        g: augmented graph (a plain Graph is augmented on the fly).
        s: private scalars, length n.
        c: penalty parameter, > 0.
        theta: averaging constant in (0, 1].

    Raises:
        DimensionMismatch: len(s) != n.
        InvalidParameter: c or theta out of range, or non-finite s.
    """
    if isinstance(g, Graph):
        g = augment(g)
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.shape[0] != g.base.n:
        raise DimensionMismatch(f"len(s)={s.shape[0]} but graph has n={g.base.n}")
    if not np.isfinite(s).all():
        raise InvalidParameter("s must be finite")
    if not (np.isfinite(c) and c > 0):
        raise InvalidParameter(f"c must be positive, got {c!r}")
    if not (np.isfinite(theta) and 0 < theta <= 1):
        raise InvalidParameter(f"theta must be in (0, 1], got {theta!r}")
    base = g.base
    owner = base.directed_owner
    nbr = base.directed_neighbor
    a_directed = np.where(owner < nbr, 1.0, -1.0)
    arrays = dict(
        s=s.copy(),
        a_directed=a_directed,
        b_regular=np.zeros(base.m),
        a_node_to_dummy=np.full(base.n, -1.0),
        a_dummy_to_node=np.zeros(base.n),
        b_dummy=-s,
    )
    for arr in arrays.values():
        arr.setflags(write=False)
    return ProblemInstance(graph=g, c=float(c), theta=float(theta), **arrays)


def solve_exact(s) -> float:
    """Ground-truth LP optimum: the maximum private value (all x_i equal it)."""
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.size == 0:
        raise EmptyInput("s is empty")
    return float(s.max())


def dump_instance(p: ProblemInstance, path: str | Path) -> None:
    """Text dump: n, c, theta, s vector, then per-edge A/b rows (1-based nodes)."""
    base = p.graph.base
    lines = [
        f"n={base.n}",
        f"c={fmt(p.c)}",
        f"theta={fmt(p.theta)}",
        "s=" + " ".join(fmt(v) for v in p.s),
    ]
    for e, (i, j) in enumerate(base.edges):
        k = base.directed_index(i, j)
        k_rev = base.directed_index(j, i)
        lines.append(
            f"edge {i + 1} {j + 1} {fmt(p.a_directed[k])} {fmt(p.a_directed[k_rev])} {fmt(p.b_regular[e])}"
        )
    for i in range(base.n):
        lines.append(
            f"dummy {i + 1} {fmt(p.a_node_to_dummy[i])} {fmt(p.a_dummy_to_node[i])} {fmt(p.b_dummy[i])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def load_instance(path: str | Path) -> ProblemInstance:
    """Rebuild an instance from dump_instance output (exact replay)."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    header = {}
    edges = []
    s = None
    for ln in lines:
        if ln.startswith("s="):
            s = np.array([float(v) for v in ln[2:].split()])
        elif ln.startswith("edge "):
            parts = ln.split()
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        elif ln.startswith("dummy "):
            continue
        elif "=" in ln:
            key, val = ln.split("=", 1)
            header[key] = val
    if s is None or "n" not in header:
        raise InvalidParameter(f"{path}: missing n or s")
    g = Graph(int(header["n"]), tuple(edges))
    return assemble(augment(g), s, float(header["c"]), float(header["theta"]))
