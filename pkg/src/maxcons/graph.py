"""Network topologies: validation, dummy-node augmentation, and random geometric graphs.

Nodes are indexed 0..n-1 internally; all file formats and CSV outputs use
1-based indices. The dummy companion of node i lives at index n + i in the
augmented graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import ConnectivityFailure, InvalidParameter

MAX_RGG_ATTEMPTS = 1000


def default_rgg_radius(n: int) -> float:
    """Connectivity-threshold radius sqrt(2*ln(n)/n) for uniform points in the unit square."""
    if n <= 1:
        return math.sqrt(2.0)
    return math.sqrt(2.0 * math.log(n) / n)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph, immutable after construction.

    Attributes:
        n: node count.
        edges: sorted tuple of (i, j) pairs with i < j.
        coordinates: optional (n, 2) positions in the unit square (RGG provenance).
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    coordinates: np.ndarray | None = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidParameter(f"node count must be a positive integer, got {self.n!r}")
        norm = []
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise InvalidParameter(f"self-loop at node {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidParameter(f"edge {e} out of range for n={self.n}")
            norm.append((min(i, j), max(i, j)))
        if len(set(norm)) != len(norm):
            raise InvalidParameter("duplicate edges")
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        object.__setattr__(self, "n", int(self.n))
        if self.coordinates is not None:
            coords = np.asarray(self.coordinates, dtype=float)
            if coords.shape != (self.n, 2):
                raise InvalidParameter(f"coordinates must have shape ({self.n}, 2)")
            coords = coords.copy()
            coords.setflags(write=False)
            object.__setattr__(self, "coordinates", coords)
        adj = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        directed = tuple((i, j) for i in range(self.n) for j in self._adj[i])
        object.__setattr__(self, "_directed", directed)
        index = {e: k for k, e in enumerate(directed)}
        rev = np.array([index[(j, i)] for (i, j) in directed], dtype=np.intp)
        owner = np.array([i for i, _ in directed], dtype=np.intp)
        nbr = np.array([j for _, j in directed], dtype=np.intp)
        deg = np.array([len(a) for a in self._adj], dtype=float)
        for arr in (rev, owner, nbr, deg):
            arr.setflags(write=False)
        object.__setattr__(self, "_rev", rev)
        object.__setattr__(self, "_owner", owner)
        object.__setattr__(self, "_nbr", nbr)
        object.__setattr__(self, "_deg", deg)
        object.__setattr__(self, "_index", index)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    @property
    def degrees(self) -> np.ndarray:
        """Per-node degree as a float array (x-update divisor uses degree + 1)."""
        return self._deg

    @property
    def directed_edges(self) -> tuple[tuple[int, int], ...]:
        """Canonical directed-edge order: ascending owner i, then ascending neighbor j.

        Entry k represents the auxiliary variable z_{i|j} held at node i about
        neighbor j. This order also fixes the RNG draw order at initialization.
        """
        return self._directed

    @property
    def directed_owner(self) -> np.ndarray:
        return self._owner

    @property
    def directed_neighbor(self) -> np.ndarray:
        return self._nbr

    @property
    def reverse_index(self) -> np.ndarray:
        """Position of (j, i) for each directed edge (i, j)."""
        return self._rev

    def directed_index(self, i: int, j: int) -> int:
        return self._index[(i, j)]

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    def diameter(self) -> int:
        """Longest shortest path; requires connectivity."""
        worst = 0
        for src in range(self.n):
            dist = {src: 0}
            frontier = [src]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in self._adj[u]:
                        if v not in dist:
                            dist[v] = dist[u] + 1
                            nxt.append(v)
                frontier = nxt
            if len(dist) != self.n:
                raise InvalidParameter("diameter undefined for disconnected graph")
            worst = max(worst, max(dist.values()))
        return worst

    def relabeled(self, perm) -> "Graph":
        """Graph with node i renamed to perm[i]."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise InvalidParameter("perm must be a permutation of 0..n-1")
        edges = [(perm[i], perm[j]) for i, j in self.edges]
        coords = None
        if self.coordinates is not None:
            coords = np.empty_like(self.coordinates)
            for i in range(self.n):
                coords[perm[i]] = self.coordinates[i]
        return Graph(self.n, tuple(edges), coords)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n or self.edges != other.edges:
            return False
        if (self.coordinates is None) != (other.coordinates is None):
            return False
        return self.coordinates is None or np.array_equal(self.coordinates, other.coordinates)

    def __hash__(self):
        return hash((self.n, self.edges))


@dataclass(frozen=True, eq=False)
class AugmentedGraph:
    """Base graph plus one dummy node per regular node, attached by a single edge.

    The dummy companion of regular node i is n + i and has degree exactly 1.
    Regular degrees are those of the base graph; the consensus x-update divides
    by degree(i) + 1 to account for the dummy edge.
    """

    base: Graph

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def n_total(self) -> int:
        return 2 * self.base.n

    def dummy_of(self, i: int) -> int:
        return self.base.n + i

    def is_dummy(self, v: int) -> bool:
        return v >= self.base.n

    @property
    def edges_augmented(self) -> tuple[tuple[int, int], ...]:
        dummies = tuple((i, self.base.n + i) for i in range(self.base.n))
        return self.base.edges + dummies

    def degree_regular(self, i: int) -> int:
        return self.base.degree(i)

    def degree_augmented(self, i: int) -> int:
        return self.base.degree(i) + 1

    def __eq__(self, other):
        if not isinstance(other, AugmentedGraph):
            return NotImplemented
        return self.base == other.base

    def __hash__(self):
        return hash(("augmented", self.base.n, self.base.edges))


def augment(g: Graph) -> AugmentedGraph:
    """Attach one dummy node to every regular node."""
    return AugmentedGraph(base=g)


def generate_rgg(n: int, radius: float | None = None, seed: int = 0) -> Graph:
    """Connected random geometric graph in the unit square.

    Positions are i.i.d. uniform from a seeded generator; nodes are joined when
    their Euclidean distance is at most `radius`. Disconnected draws are
    resampled from the same stream, up to MAX_RGG_ATTEMPTS.

    Args:
        n: node count (>= 1).
        radius: connection radius in (0, sqrt(2)]; defaults to the
            sqrt(2*ln(n)/n) connectivity threshold.
        seed: RNG seed; fixed seed gives a bit-reproducible graph.

    Raises:
        InvalidParameter: out-of-range n or radius.
        ConnectivityFailure: no connected draw within the retry budget.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    if radius is None:
        radius = default_rgg_radius(n)
    if not (0.0 < radius <= math.sqrt(2.0) + 1e-12):
        raise InvalidParameter(f"radius must be in (0, sqrt(2)], got {radius!r}")
    rng = np.random.default_rng(seed)
    r2 = float(radius) ** 2
    for _ in range(MAX_RGG_ATTEMPTS):
        pos = rng.random((n, 2))
        diff = pos[:, None, :] - pos[None, :, :]
        within = (diff**2).sum(axis=2) <= r2
        edges = tuple(
            (i, j) for i in range(n) for j in range(i + 1, n) if within[i, j]
        )
        g = Graph(n, edges, coordinates=pos)
        if g.is_connected():
            return g
    raise ConnectivityFailure(
        f"no connected RGG with n={n}, radius={radius} after {MAX_RGG_ATTEMPTS} attempts"
    )


def write_topology(g: Graph, path: str | Path) -> None:
    """Edge-list text format: header 'n=<count>', then one 'i j' pair per line (1-based)."""
    lines = [f"n={g.n}"]
    lines.extend(f"{i + 1} {j + 1}" for i, j in g.edges)
    Path(path).write_text("\n".join(lines) + "\n")


def read_topology(path: str | Path) -> Graph:
    """Parse the edge-list format written by write_topology."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise InvalidParameter(f"{path}: expected header line 'n=<count>'")
    n = int(lines[0][2:])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise InvalidParameter(f"{path}: bad edge line {ln!r}")
        edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    return Graph(n, tuple(edges))
