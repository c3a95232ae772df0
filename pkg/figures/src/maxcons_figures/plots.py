"""The four figure renderers: NMI decay, condition LHS, accuracy comparison,
per-node convergence.

Each renderer reads one documented CSV schema and draws; nothing is
recomputed. Output is SVG with a fixed hash salt and no timestamp metadata,
so identical inputs give identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "maxcons-figures"

import matplotlib.pyplot as plt

from .io import FigureError, column, load_rows

INPUT_FILES = {
    "fig2": "mi_curve.csv",
    "fig3": "condition.csv",
    "fig4": "errors.csv",
    "fig5": "pernode.csv",
}

AXIS_SCALES = {
    "fig2": ("log", "linear"),
    "fig3": ("linear", "symlog"),
    "fig4": ("linear", "log"),
    "fig5": ("linear", "linear"),
}


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    input_dir: Path
    output_path: Path
    axis_scales: tuple[str, str] = field(default=None)

    def __post_init__(self):
        if self.figure_id not in INPUT_FILES:
            raise FigureError(
                f"unknown figure id {self.figure_id!r}; choose from {sorted(INPUT_FILES)}"
            )
        if self.axis_scales is None:
            object.__setattr__(self, "axis_scales", AXIS_SCALES[self.figure_id])

    @property
    def input_csv(self) -> Path:
        return Path(self.input_dir) / INPUT_FILES[self.figure_id]


def _save(fig, spec: FigureSpec) -> Path:
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out


def render_fig2(spec: FigureSpec) -> Path:
    rows = load_rows(spec.input_csv, ["sigma_z", "nmi_raw", "nmi_clamped"])
    sigma = column(rows, "sigma_z")
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(sigma, column(rows, "nmi_clamped"), "o-", label="NMI (clamped)")
    ax.plot(sigma, column(rows, "nmi_raw"), ":", color="gray", label="NMI (raw)")
    ax.set_xscale(spec.axis_scales[0])
    ax.set_yscale(spec.axis_scales[1])
    ax.set_xlabel(r"$\sigma_z$")
    ax.set_ylabel("normalized mutual information")
    ax.legend()
    fig.tight_layout()
    return _save(fig, spec)


def render_fig3(spec: FigureSpec) -> Path:
    rows = load_rows(spec.input_csv, ["c", "node", "s_is_max", "t", "lhs"])
    c_values = sorted({float(r["c"]) for r in rows})
    fig, axes = plt.subplots(1, len(c_values), figsize=(4 * len(c_values), 3.2), sharey=True)
    axes = [axes] if len(c_values) == 1 else list(axes)
    for ax, c in zip(axes, c_values):
        per_node: dict[tuple[int, int], list[tuple[int, float]]] = {}
        for r in rows:
            if float(r["c"]) != c:
                continue
            key = (int(r["node"]), int(r["s_is_max"]))
            per_node.setdefault(key, []).append((int(r["t"]), float(r["lhs"])))
        for (node, is_max), series in sorted(per_node.items()):
            series.sort()
            ts, lhs = zip(*series)
            if is_max:
                ax.plot(ts, lhs, color="tab:blue", lw=1.5, label="max-value node")
            else:
                ax.plot(ts, lhs, color="0.7", lw=0.8)
        ax.axhline(0.0, color="black", lw=0.6, ls="--")
        ax.set_xscale(spec.axis_scales[0])
        ax.set_yscale(spec.axis_scales[1])
        ax.set_title(f"c = {c:g}")
        ax.set_xlabel("iteration t")
    axes[0].set_ylabel("condition LHS")
    handles, labels = axes[0].get_legend_handles_labels()
    if handles:
        axes[0].legend(handles[:1], labels[:1], loc="lower right")
    fig.tight_layout()
    return _save(fig, spec)


def render_fig4(spec: FigureSpec) -> Path:
    rows = load_rows(spec.input_csv, ["method", "sigma", "t", "squared_error"])
    sigmas = sorted({float(r["sigma"]) for r in rows})
    methods = sorted({r["method"] for r in rows})
    fig, axes = plt.subplots(1, len(sigmas), figsize=(4 * len(sigmas), 3.2), sharey=True)
    axes = [axes] if len(sigmas) == 1 else list(axes)
    for ax, sigma in zip(axes, sigmas):
        for method in methods:
            series = sorted(
                (int(r["t"]), float(r["squared_error"]))
                for r in rows
                if r["method"] == method and float(r["sigma"]) == sigma
            )
            ts, errs = zip(*series)
            # log scale cannot show exact zeros; clip to float-tiny
            errs = [max(e, 1e-300) for e in errs]
            ax.plot(ts, errs, label=method)
        ax.set_xscale(spec.axis_scales[0])
        ax.set_yscale(spec.axis_scales[1])
        ax.set_title(rf"$\sigma = {sigma:g}$")
        ax.set_xlabel("iteration t")
    axes[0].set_ylabel("squared error")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, spec)


def render_fig5(spec: FigureSpec) -> Path:
    rows = load_rows(spec.input_csv, ["method", "sigma", "role", "node", "t", "x"])
    methods = sorted({r["method"] for r in rows})
    roles = ("min", "median", "max")
    fig, axes = plt.subplots(1, len(methods), figsize=(4 * len(methods), 3.2), sharey=True)
    axes = [axes] if len(methods) == 1 else list(axes)
    for ax, method in zip(axes, methods):
        for role in roles:
            series = sorted(
                (int(r["t"]), float(r["x"]))
                for r in rows
                if r["method"] == method and r["role"] == role
            )
            if not series:
                continue
            ts, xs = zip(*series)
            ax.plot(ts, xs, label=f"{role} node")
        ax.set_xscale(spec.axis_scales[0])
        ax.set_yscale(spec.axis_scales[1])
        ax.set_title(method)
        ax.set_xlabel("iteration t")
    axes[0].set_ylabel(r"$x^{(t)}$")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, spec)


RENDERERS = {
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure from its scenario directory; returns the output path."""
    return RENDERERS[spec.figure_id](spec)
