"""Privacy evaluation: the no-exchange condition on traces and mutual information.

The per-node, per-iteration condition value is

    L_i^(t) = z_{i|i'}^(t) + z_{i'|i}^(t) - 2 c x_i^(t+1) + 2 c s_i,

which equals the dummy-branch discriminant y_{i|i'}^(t) + y_{i'|i}^(t); a node
leaks only its initial combination z_{i|i'}^(0) + c/2 s_i as long as
L_i^(t) <= 0 for every t (reflect branch throughout).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from ._util import derive_seed, write_csv
from .engine import Trace
from .exceptions import InsufficientSamples, InvalidParameter

KSG_DEFAULT_K = 3
KSG_JITTER = 1e-10


@dataclass(frozen=True)
class ConditionReport:
    """Condition left-hand side for every node and transition.

    lhs reuses the engine's own y-sum array, so the sign comparison here is
    bitwise identical to the branch the engine took.
    """

    lhs: np.ndarray
    holds_all_t: np.ndarray
    violating_nodes: tuple[int, ...]
    argmax_nodes: tuple[int, ...]


def check_condition(trace: Trace) -> ConditionReport:
    """Evaluate the condition at every regular node for t = 0..t_max-1."""
    lhs = trace.y_sum
    holds = ~(lhs > 0.0).any(axis=0)
    s = trace.instance.s
    argmax = tuple(int(i) for i in np.flatnonzero(s == s.max()))
    violating = tuple(int(i) for i in np.flatnonzero(~holds))
    return ConditionReport(
        lhs=lhs,
        holds_all_t=holds,
        violating_nodes=violating,
        argmax_nodes=argmax,
    )


@dataclass(frozen=True)
class MIEstimate:
    value_nats: float
    k: int
    sample_count: int
    jitter: float


def estimate_mi_ksg(
    xs,
    ys,
    k: int = KSG_DEFAULT_K,
    *,
    jitter: float = KSG_JITTER,
    jitter_seed: int = 0,
) -> MIEstimate:
    """Kraskov-Stoegbauer-Grassberger mutual information (variant 1), in nats.

    Max-norm k-NN distances in the joint space, strict-inequality neighbor
    counts in the marginals, and psi(k) + psi(N) - <psi(n_x+1) + psi(n_y+1)>.
    A tiny seeded uniform jitter breaks ties, so the estimate is deterministic
    given (samples, k, jitter_seed).

    Raises:
        InsufficientSamples: fewer than 2(k+1) samples.
        InvalidParameter: mismatched lengths, non-finite values, or k < 1.
    """
    x = np.asarray(xs, dtype=float).reshape(len(xs), -1)
    y = np.asarray(ys, dtype=float).reshape(len(ys), -1)
    if x.shape[0] != y.shape[0]:
        raise InvalidParameter("xs and ys must have equal length")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise InvalidParameter("samples must be finite")
    if k < 1:
        raise InvalidParameter(f"k must be >= 1, got {k!r}")
    n = x.shape[0]
    if n < 2 * (k + 1):
        raise InsufficientSamples(f"need at least {2 * (k + 1)} samples, got {n}")
    rng = np.random.default_rng(jitter_seed)
    x = x + jitter * rng.random(x.shape)
    y = y + jitter * rng.random(y.shape)
    joint = np.hstack([x, y])
    eps = cKDTree(joint).query(joint, k=k + 1, p=np.inf)[0][:, k]
    # counts include the point itself, standing in for n_marginal + 1
    cx = cKDTree(x).query_ball_point(x, eps - 1e-15, p=np.inf, return_length=True)
    cy = cKDTree(y).query_ball_point(y, eps - 1e-15, p=np.inf, return_length=True)
    value = digamma(k) + digamma(n) - float(
        np.mean(digamma(np.maximum(cx, 1)) + digamma(np.maximum(cy, 1)))
    )
    return MIEstimate(value_nats=value, k=int(k), sample_count=n, jitter=jitter)


def nmi_curve(
    c: float,
    sigma_s: float,
    sigma_grid,
    samples: int = 5000,
    k: int = KSG_DEFAULT_K,
    seed: int = 0,
    mu_z: float = 0.0,
) -> list[dict]:
    """Estimated NMI of the leakage pair (S, Z + c/2 S) across dummy-init scales.

    For each sigma_z, draws S ~ N(0, sigma_s^2) and Z ~ N(mu_z, sigma_z^2),
    estimates I(S; Z + c/2 S), and normalizes by the same estimator's value on
    the duplicated sample (the self-information normalizer is estimator-defined;
    the analytic quantity is infinite for continuous S). MI is shift-invariant,
    so mu_z defaults to 0 for numerical hygiene.

    Returns one dict per grid point with keys
    (sigma_z, mi_nats, mi_self_nats, nmi_raw, nmi_clamped).
    """
    sigma_grid = [float(v) for v in sigma_grid]
    if any(v <= 0 for v in sigma_grid):
        raise InvalidParameter("all sigma_z grid values must be > 0")
    rows = []
    for idx, sigma_z in enumerate(sigma_grid):
        rng = np.random.default_rng(derive_seed(seed, 2 * idx))
        jseed = derive_seed(seed, 2 * idx + 1)
        s = rng.normal(0.0, sigma_s, samples)
        z = rng.normal(mu_z, sigma_z, samples)
        leak = z + 0.5 * c * s
        mi = estimate_mi_ksg(s, leak, k, jitter_seed=jseed).value_nats
        mi_self = estimate_mi_ksg(s, s.copy(), k, jitter_seed=jseed).value_nats
        nmi_raw = mi / mi_self
        rows.append(
            {
                "sigma_z": sigma_z,
                "mi_nats": mi,
                "mi_self_nats": mi_self,
                "nmi_raw": nmi_raw,
                "nmi_clamped": min(max(nmi_raw, 0.0), 1.0),
            }
        )
    return rows


def write_mi_curve_csv(rows: list[dict], path: str | Path) -> None:
    header = ["sigma_z", "mi_nats", "mi_self_nats", "nmi_raw", "nmi_clamped"]
    write_csv(path, header, ([row[h] for h in header] for row in rows))
