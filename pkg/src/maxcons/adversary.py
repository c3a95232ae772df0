"""Adversary view, reconstruction oracle, and inference attack.

The combined passive + eavesdropping adversary sees every broadcast x, the
regular-edge z^(0) transmitted at initialization, and the corrupt nodes'
private data plus their full dual histories on all incident edges (including
their own dummy edges). Honest nodes' dummy-edge variables are node-internal
and never transmitted, so they are absent from every observation set; that
asymmetry is what the reconstruction below runs up against.

Reconstruction executes the proof chain backing the privacy claim:
corrupt dual trajectories are re-simulated from their initial values and the
observed broadcasts; each honest node's dummy-dual increments are recovered
from the broadcasts alone and checked against the reflect-branch closed form
(a mismatch means the exchange branch fired and reconstruction is impossible);
the first broadcast then pins down the single per-node unknown
L_i = z_{i|i'}^(0) + c/2 s_i; finally every observed broadcast is regenerated
from that reduced set as a soundness check.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._util import write_csv
from .engine import Trace
from .exceptions import (
    ConditionViolated,
    InvalidCoalition,
    InvalidParameter,
    Underdetermined,
)
from .graph import AugmentedGraph


@dataclass(frozen=True)
class AdversaryConfig:
    """Coalition of corrupt nodes, optionally backed by a channel eavesdropper.

    encrypted_init removes the regular-edge z^(0) broadcasts from the
    eavesdropper's view (ablation; channels are unencrypted by default).
    """

    corrupt: frozenset[int]
    eavesdropping: bool = True
    encrypted_init: bool = False


@dataclass(frozen=True, eq=False)
class ObservationSet:
    """Exactly the adversary's knowledge; unobserved entries are NaN + mask=False.

    x holds the broadcasts x^(1)..x^(t_max) (x^(0) is never transmitted).
    Histories are indexed like engine traces: row t is the iteration-t value.
    """

    n: int
    t_max: int
    corrupt_nodes: tuple[int, ...]
    eavesdropping: bool
    x: np.ndarray
    x_observed: np.ndarray
    z_regular_init: np.ndarray
    z_regular_init_observed: np.ndarray
    z_regular_hist: np.ndarray
    z_regular_hist_observed: np.ndarray
    z_to_dummy_hist: np.ndarray
    z_from_dummy_hist: np.ndarray
    dummy_observed: np.ndarray
    s_corrupt: np.ndarray

    def count(self) -> int:
        """Number of distinct observed scalars (x, z, and s entries)."""
        total = int(self.x_observed.sum()) * self.t_max
        hist = self.z_regular_hist_observed
        init_only = self.z_regular_init_observed & ~hist
        total += int(init_only.sum()) + int(hist.sum()) * (self.t_max + 1)
        total += 2 * int(self.dummy_observed.sum()) * (self.t_max + 1)
        total += len(self.corrupt_nodes)
        return total


def collect(trace: Trace, cfg: AdversaryConfig) -> ObservationSet:
    """Materialize the observation set for a coalition from a completed trace.

    Raises:
        InvalidCoalition: corrupt set covers all nodes or names unknown ones.
    """
    base = trace.instance.graph.base
    n, t_max = base.n, trace.t_max
    corrupt = sorted(int(i) for i in cfg.corrupt)
    if any(i < 0 or i >= n for i in corrupt):
        raise InvalidCoalition(f"corrupt nodes out of range for n={n}")
    if len(corrupt) >= n:
        raise InvalidCoalition("no honest node left")
    corrupt_mask = np.zeros(n, dtype=bool)
    corrupt_mask[corrupt] = True

    x_observed = np.zeros(n, dtype=bool)
    if cfg.eavesdropping:
        x_observed[:] = True
    else:
        x_observed[corrupt] = True
        for j in corrupt:
            x_observed[list(base.neighbors(j))] = True
        if not corrupt:
            x_observed[:] = False
    x = np.where(x_observed[None, :], trace.x[1:], np.nan)

    n_dir = len(base.directed_edges)
    edge_touches_corrupt = np.zeros(n_dir, dtype=bool)
    for k, (i, j) in enumerate(base.directed_edges):
        edge_touches_corrupt[k] = corrupt_mask[i] or corrupt_mask[j]
    init_observed = edge_touches_corrupt.copy()
    if cfg.eavesdropping and not cfg.encrypted_init:
        init_observed[:] = True
    z_init = np.where(init_observed, trace.z_regular[0], np.nan)
    z_hist = np.where(edge_touches_corrupt[None, :], trace.z_regular, np.nan)

    z_to = np.where(corrupt_mask[None, :], trace.z_to_dummy, np.nan)
    z_from = np.where(corrupt_mask[None, :], trace.z_from_dummy, np.nan)
    s_corrupt = np.where(corrupt_mask, trace.instance.s, np.nan)

    for arr in (x, x_observed, z_init, init_observed, z_hist, edge_touches_corrupt,
                z_to, z_from, corrupt_mask, s_corrupt):
        arr.setflags(write=False)
    return ObservationSet(
        n=n,
        t_max=t_max,
        corrupt_nodes=tuple(corrupt),
        eavesdropping=cfg.eavesdropping,
        x=x,
        x_observed=x_observed,
        z_regular_init=z_init,
        z_regular_init_observed=init_observed,
        z_regular_hist=z_hist,
        z_regular_hist_observed=edge_touches_corrupt,
        z_to_dummy_hist=z_to,
        z_from_dummy_hist=z_from,
        dummy_observed=corrupt_mask,
        s_corrupt=s_corrupt,
    )


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Everything the adversary can pin down when reconstruction succeeds.

    leakage[i] = z_{i|i'}^(0) + c/2 s_i for every node (exact for corrupt
    nodes, recovered for honest ones). dummy_diffs[t-1] holds the recovered
    z_{j|j'}^(t+1) - z_{j|j'}^(t) for t = 1..t_max-2. x_regenerated re-derives
    the broadcasts x^(1)..x^(t_max) from the reduced set; max_regen_error is
    its worst deviation from the observed broadcasts. Audit fields compare
    against simulator ground truth and are None outside audit mode.
    """

    honest_nodes: tuple[int, ...]
    leakage: np.ndarray
    dummy_diffs: np.ndarray
    x_regenerated: np.ndarray
    max_regen_error: float
    leakage_true: np.ndarray | None = None
    leakage_abs_error: np.ndarray | None = None


def reconstruct(
    obs: ObservationSet,
    graph: AugmentedGraph,
    c: float,
    theta: float = 0.5,
    *,
    audit_trace: Trace | None = None,
    branch_tol: float = 1e-9,
) -> ReconstructionResult:
    """Run the reconstruction chain against an observation set.

    Raises:
        ConditionViolated: an honest node's recovered dummy increments are
            inconsistent with the reflect closed form (exchange fired).
        Underdetermined: a needed broadcast or z^(0) entry is unobserved.
        InvalidParameter: theta != 1/2 (the trace identities assume it).
    """
    if theta != 0.5:
        raise InvalidParameter("reconstruction supports theta = 1/2 only")
    base = graph.base
    n, t_max = obs.n, obs.t_max
    if base.n != n:
        raise InvalidParameter("graph does not match observation set")
    if t_max < 3:
        raise InvalidParameter("need t_max >= 3 to exercise the recursion")
    if not obs.x_observed.all():
        raise Underdetermined("reconstruction needs every node's broadcasts")
    z0_known = obs.z_regular_init_observed | obs.z_regular_hist_observed
    if not z0_known.all():
        raise Underdetermined("reconstruction needs z^(0) on every regular edge")
    z0 = np.where(obs.z_regular_init_observed, obs.z_regular_init, obs.z_regular_hist[0])

    owner = base.directed_owner
    nbr = base.directed_neighbor
    rev = base.reverse_index
    a = np.where(owner < nbr, 1.0, -1.0)
    deg = base.degrees
    corrupt_mask = obs.dummy_observed
    honest = tuple(int(i) for i in np.flatnonzero(~corrupt_mask))
    x_obs = obs.x  # rows: x^(1)..x^(t_max)

    # single unknown per node from the first broadcast:
    #   L_j = c (d_j + 1) x_j^(1) + 1 + sum_k A_jk z_{j|k}^(0)
    contrib0 = np.bincount(owner, weights=a * z0, minlength=n)
    leakage = c * (deg + 1.0) * x_obs[0] + 1.0 + contrib0
    # corrupt nodes are self-known; use their exact values
    leakage = np.where(
        corrupt_mask, obs.z_to_dummy_hist[0] + 0.5 * c * obs.s_corrupt, leakage
    )

    # recover dummy-dual increments from broadcasts alone (valid for t >= 1),
    # then demand they match the reflect closed form c (x^(t+1) - x^(t))
    diffs = np.empty((t_max - 2, n))
    for t in range(1, t_max - 1):
        # x_obs[t-1] is x^(t)
        xk_new = x_obs[t]
        xk_old = x_obs[t - 1]
        neigh_term = np.bincount(
            owner, weights=xk_new[nbr] - 0.5 * xk_old[nbr] - 0.5 * xk_old[owner], minlength=n
        )
        diffs[t - 1] = c * (deg + 1.0) * (x_obs[t + 1] - x_obs[t]) - c * neigh_term
    for i in honest:
        expected = c * (x_obs[1 : t_max - 1, i] - x_obs[0 : t_max - 2, i])
        bad = np.abs(diffs[:, i] - expected) > branch_tol
        if bad.any():
            t_bad = int(np.flatnonzero(bad)[0]) + 1
            raise ConditionViolated(
                f"honest node {i}: dummy increments inconsistent with the reflect "
                f"branch near iteration {t_bad} (exchange fired)",
                node=i,
                iteration=t_bad,
            )

    # regenerate all broadcasts from the reduced set {corrupt data, z^(0), L}
    x_regen = np.empty((t_max, n))
    z = z0.copy()
    z_to = obs.z_to_dummy_hist[0].copy()
    z_from = obs.z_from_dummy_hist[0].copy()
    s_c = obs.s_corrupt
    contrib = np.bincount(owner, weights=a * z, minlength=n)
    x_cur = (-1.0 - contrib + leakage) / (c * (deg + 1.0))
    x_regen[0] = x_cur
    for t in range(1, t_max):
        z = (1.0 - theta) * z + theta * (z[rev] + 2.0 * c * a[rev] * x_cur[nbr])
        y_to = z_to - 2.0 * c * x_cur + c * s_c
        y_from = z_from + c * s_c
        exchange = (y_to + y_from) > 0.0
        z_to = np.where(
            exchange, (1.0 - theta) * z_to + theta * y_from, (1.0 - theta) * z_to - theta * y_to
        )
        z_from = np.where(
            exchange, (1.0 - theta) * z_from + theta * y_to, (1.0 - theta) * z_from - theta * y_from
        )
        # honest dummy term collapses to c x^(t) while the reflect branch holds
        dummy_term = np.where(corrupt_mask, z_to + 0.5 * c * s_c, c * x_cur)
        contrib = np.bincount(owner, weights=a * z, minlength=n)
        x_cur = (-1.0 - contrib + dummy_term) / (c * (deg + 1.0))
        x_regen[t] = x_cur
    max_err = float(np.abs(x_regen - x_obs).max())

    leakage_true = None
    leakage_err = None
    if audit_trace is not None:
        leakage_true = audit_trace.z_to_dummy[0] + 0.5 * c * audit_trace.instance.s
        leakage_err = np.abs(leakage - leakage_true)
    for arr in (leakage, diffs, x_regen):
        arr.setflags(write=False)
    return ReconstructionResult(
        honest_nodes=honest,
        leakage=leakage,
        dummy_diffs=diffs,
        x_regenerated=x_regen,
        max_regen_error=max_err,
        leakage_true=leakage_true,
        leakage_abs_error=leakage_err,
    )


def attack_mmse(L, prior: tuple[float, float], init: tuple[float, float], c: float):
    """Linear MMSE estimate of s from the leakage L = z^(0) + c/2 s.

    Worst case: the adversary knows both Gaussian distributions. Returns
    (s_hat, expected_mse) with

        s_hat = m_s + (c/2) sigma_s^2 / ((c/2)^2 sigma_s^2 + sigma_z^2)
                      * (L - mu_z - (c/2) m_s)
        mse   = sigma_s^2 sigma_z^2 / ((c/2)^2 sigma_s^2 + sigma_z^2)

    sigma_z = 0 inverts exactly (total breach); sigma_z -> inf returns the
    prior mean and mse -> sigma_s^2 (nothing learned beyond the prior).
    """
    prior_mean, sigma_s = prior
    mu_z, sigma_z = init
    if sigma_s <= 0:
        raise InvalidParameter("sigma_s must be > 0")
    if sigma_z < 0:
        raise InvalidParameter("sigma_z must be >= 0")
    if c <= 0:
        raise InvalidParameter("c must be > 0")
    half_c = 0.5 * c
    denom = half_c**2 * sigma_s**2 + sigma_z**2
    gain = half_c * sigma_s**2 / denom
    s_hat = prior_mean + gain * (np.asarray(L, dtype=float) - mu_z - half_c * prior_mean)
    mse = sigma_s**2 * sigma_z**2 / denom
    if np.isscalar(L):
        s_hat = float(s_hat)
    return s_hat, float(mse)


def write_attack_csv(rows, path: str | Path) -> None:
    """Per-node attack report; unavailable cells (violating nodes) are empty."""
    header = [
        "node",
        "honest",
        "condition_held",
        "L_recovered",
        "L_true",
        "abs_err",
        "s_hat",
        "attack_se",
    ]
    write_csv(path, header, rows)
