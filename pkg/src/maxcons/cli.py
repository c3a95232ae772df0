"""maxcons command line: simulate, mi-curve, attack, compare, run.

Node ids on the command line and in all outputs are 1-based.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ._util import derive_seed, write_csv
from .adversary import AdversaryConfig, attack_mmse, collect, reconstruct, write_attack_csv
from .baselines import BaselineConfig, dp_admm_max, noisy_broadcast_max
from .engine import InitSpec, run, write_trace_csvs
from .exceptions import ConditionViolated, MaxconsError
from .experiments import (
    STREAM_GRAPH,
    STREAM_INIT,
    STREAM_S,
    STREAM_TRAJ_NOISE,
    load_config,
    run_scenario,
    squared_error_series,
)
from .graph import augment, generate_rgg, read_topology, write_topology
from .privacy import nmi_curve, write_mi_curve_csv
from .problem import assemble, dump_instance, load_instance, solve_exact


def _add_sim_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--rgg-n", type=int, help="generate a connected RGG with this many nodes")
    src.add_argument("--topology-file", type=Path, help="edge-list file (n=<count> header)")
    src.add_argument("--instance-file", type=Path, help="replay a dumped instance")
    p.add_argument("--radius", type=float, default=None, help="RGG radius (default: threshold)")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--mu-z", type=float, default=1000.0)
    p.add_argument("--sigma-z", type=float, default=1.0)
    p.add_argument("--t-max", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)


def _build_instance(args):
    """Instance plus init spec from CLI arguments (sub-seeds derived from --seed)."""
    if args.instance_file:
        p = load_instance(args.instance_file)
    else:
        if args.topology_file:
            g = read_topology(args.topology_file)
        else:
            n = args.rgg_n if args.rgg_n else 10
            g = generate_rgg(n, args.radius, seed=derive_seed(args.seed, STREAM_GRAPH))
        s = np.random.default_rng(derive_seed(args.seed, STREAM_S)).normal(0.0, 1.0, g.n)
        p = assemble(augment(g), s, args.c, args.theta)
    init = InitSpec(
        mu_z=args.mu_z, sigma_z=args.sigma_z, seed=derive_seed(args.seed, STREAM_INIT)
    )
    return p, init


def _cmd_simulate(args) -> int:
    p, init = _build_instance(args)
    trace = run(p, init, args.t_max)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_topology(p.graph.base, out / "topology.txt")
    dump_instance(p, out / "instance.txt")
    write_trace_csvs(trace, out / "trace_nodes.csv", out / "trace_edges.csv")
    err = squared_error_series(trace.x, solve_exact(p.s))[-1]
    print(f"wrote trace for n={p.n}, t_max={args.t_max} to {out}")
    print(f"final squared error vs exact maximum: {err:.3e}")
    return 0


def _cmd_mi_curve(args) -> int:
    grid = [float(v) for v in args.sigma_z_grid.split(",")]
    rows = nmi_curve(
        c=args.c,
        sigma_s=args.sigma_s,
        sigma_grid=grid,
        samples=args.samples,
        k=args.k,
        seed=args.seed,
    )
    write_mi_curve_csv(rows, args.out)
    print(f"wrote {len(rows)} grid points to {args.out}")
    return 0


def _parse_corrupt(tokens: list[str], n: int) -> frozenset[int]:
    """Either 'all-but <i>' or a comma-separated 1-based node list."""
    if tokens and tokens[0] == "all-but":
        if len(tokens) != 2:
            raise MaxconsError("--corrupt all-but needs exactly one node id")
        keep = int(tokens[1]) - 1
        return frozenset(set(range(n)) - {keep})
    if len(tokens) != 1:
        raise MaxconsError("--corrupt takes 'all-but <i>' or a comma-separated list")
    return frozenset(int(v) - 1 for v in tokens[0].split(","))


def _cmd_attack(args) -> int:
    p, init = _build_instance(args)
    trace = run(p, init, args.t_max)
    corrupt = _parse_corrupt(args.corrupt, p.n)
    cfg = AdversaryConfig(
        corrupt=corrupt,
        eavesdropping=not args.no_eavesdrop,
        encrypted_init=args.encrypted_init,
    )
    obs = collect(trace, cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    honest = sorted(set(range(p.n)) - corrupt)
    prior = (0.0, 1.0)
    rows = []
    try:
        result = reconstruct(obs, p.graph, p.c, p.theta, audit_trace=trace)
    except ConditionViolated as exc:
        print(f"reconstruction impossible: {exc}")
        for i in honest:
            l_true = float(trace.z_to_dummy[0, i] + 0.5 * p.c * p.s[i])
            rows.append((i + 1, 1, 0, None, l_true, None, None, None))
    else:
        for i in honest:
            l_rec = float(result.leakage[i])
            l_true = float(result.leakage_true[i])
            s_hat, _ = attack_mmse(l_rec, prior, (args.mu_z, args.sigma_z), p.c)
            rows.append(
                (i + 1, 1, 1, l_rec, l_true, abs(l_rec - l_true), float(s_hat),
                 float((s_hat - p.s[i]) ** 2))
            )
        print(f"recovered leakage for {len(honest)} honest node(s); "
              f"max regeneration error {result.max_regen_error:.3e}")
    write_attack_csv(rows, out / "attack.csv")
    print(f"wrote {out / 'attack.csv'}")
    return 0


def _cmd_compare(args) -> int:
    p, init_template = _build_instance(args)
    x_star = solve_exact(p.s)
    sigmas = [float(v) for v in args.sigma.split(",")]
    rows = []
    for sigma in sigmas:
        init = InitSpec(
            mu_z=args.mu_z, sigma_z=sigma, seed=init_template.seed
        )
        trajs = {
            "proposed": run(p, init, args.t_max).x,
            "noisy-broadcast": noisy_broadcast_max(
                p.graph.base, p.s,
                BaselineConfig("noisy-broadcast", sigma, args.t_max,
                               derive_seed(args.seed, STREAM_TRAJ_NOISE)),
            ),
            "dp-admm": dp_admm_max(
                p,
                BaselineConfig("dp-admm", sigma, args.t_max,
                               derive_seed(args.seed, STREAM_TRAJ_NOISE)),
            ),
        }
        for method, X in trajs.items():
            for t, err in enumerate(squared_error_series(X, x_star)):
                rows.append((method, sigma, t, err))
    write_csv(args.out, ["method", "sigma", "t", "squared_error"], rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_run(args) -> int:
    overrides = None
    name = args.scenario
    if args.config:
        cfg_name, overrides = load_config(args.config)
        if cfg_name and cfg_name != name:
            raise MaxconsError(
                f"config file is for scenario {cfg_name!r}, not {name!r}"
            )
    manifest = run_scenario(name, overrides, args.out)
    print(f"scenario {name} done; config hash {manifest['config_hash'][:12]} -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxcons",
        description="Privacy-preserving distributed maximum consensus simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the consensus engine and export the trace")
    _add_sim_args(sim)
    sim.add_argument("--out-dir", type=Path, required=True)
    sim.set_defaults(func=_cmd_simulate)

    mi = sub.add_parser("mi-curve", help="NMI of the leakage pair across sigma_z")
    mi.add_argument("--c", type=float, default=1.0)
    mi.add_argument("--sigma-s", type=float, default=1.0)
    mi.add_argument(
        "--sigma-z-grid",
        default="0.01,0.03,0.1,0.3,1.0,3.0,10.0,30.0,100.0,300.0,1000.0",
        help="comma-separated sigma_z values",
    )
    mi.add_argument("--samples", type=int, default=5000)
    mi.add_argument("--k", type=int, default=3)
    mi.add_argument("--seed", type=int, default=0)
    mi.add_argument("--out", type=Path, required=True)
    mi.set_defaults(func=_cmd_mi_curve)

    atk = sub.add_parser("attack", help="collect adversary view and run reconstruction")
    _add_sim_args(atk)
    atk.add_argument(
        "--corrupt",
        nargs="+",
        required=True,
        help="'all-but <i>' or comma-separated 1-based corrupt node ids",
    )
    atk.add_argument("--no-eavesdrop", action="store_true")
    atk.add_argument("--encrypted-init", action="store_true")
    atk.add_argument("--out-dir", type=Path, required=True)
    atk.set_defaults(func=_cmd_attack)

    cmp_ = sub.add_parser("compare", help="proposed vs baselines, error per iteration")
    _add_sim_args(cmp_)
    cmp_.add_argument("--sigma", default="0.01,0.1,1.0", help="comma-separated noise levels")
    cmp_.add_argument("--out", type=Path, required=True)
    cmp_.set_defaults(func=_cmd_compare)

    runp = sub.add_parser("run", help="run a named scenario")
    runp.add_argument("scenario")
    runp.add_argument("--config", type=Path, help="config or manifest JSON")
    runp.add_argument("--out", type=Path, required=True)
    runp.set_defaults(func=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MaxconsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
