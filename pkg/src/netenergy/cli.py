"""Command-line front end: ``netenergy <command> [options]``.

Exit status is 0 on success, 2 for invalid input, 3 for a numerical failure
and 4 when a Gramian is singular.
"""

import argparse
from dataclasses import fields
import json
import logging
import sys

import numpy as np

from . import __version__
from .control import TransferTask, min_energy_control, simulate
from .exceptions import InvalidInputError, NetEnergyError
from .experiments import (
    PRESETS,
    ExperimentConfig,
    coerce_value,
    emit_csv,
    ingest_grid,
    load_config,
    run_experiment,
    table_to_csv,
)
from .gramian import (
    LinearSystem,
    energy_metrics,
    finite_gramian,
    infinite_gramian,
    mixed_gramian_finite,
    mixed_gramian_infinite,
)
from .netgen import EnsembleSpec, read_edge_list, write_edge_list
from .oscillators import build_swing_grid, modal_decomposition
from .placement import (
    brute_force_placement,
    exact_trace_placement,
    greedy_maxmin,
    greedy_trinv,
    mode_power_placement,
    random_placement,
    rank_by_rw,
)

log = logging.getLogger("netenergy")

# short aliases for the most used config keys
_ALIASES = {
    "m_grid": ["--m"],
    "t_f": ["--tf"],
    "presets": ["--preset"],
    "strategies": ["--strategy"],
    "metrics": ["--metric"],
}


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _drivers_for(A, args):
    if args.drivers:
        return args.drivers
    if args.m is None:
        raise InvalidInputError("give --drivers or --m")
    if args.strategy == "rw":
        return list(rank_by_rw(A).order[: args.m])
    if args.strategy == "random":
        return random_placement(A.shape[0], args.m, args.seed)
    raise InvalidInputError(f"strategy {args.strategy!r} needs an oscillator network (use `place`)")


def cmd_gen(args):
    center, rho = PRESETS[args.preset]
    spec = EnsembleSpec(
        n=args.n,
        topology=args.topology,
        center=center,
        rho=rho,
        p=args.p,
        seed=args.seed,
    )
    A = spec.generate()
    if args.out:
        write_edge_list(A, args.out)
    else:
        for line in _edge_lines(A):
            print(line)
    return 0


def _edge_lines(A):
    yield f"# nodes={A.shape[0]} edges={np.count_nonzero(A)}"
    dst, src = np.nonzero(A)
    for k in np.lexsort((dst, src)):
        yield f"{src[k]} {dst[k]} {float(A[dst[k], src[k]])!r}"


def cmd_gramian(args):
    A = read_edge_list(args.system)
    drivers = _drivers_for(A, args)
    sys_ = LinearSystem.from_drivers(A, drivers)
    if args.kind == "mixed":
        G = mixed_gramian_infinite(sys_) if args.tf is None else mixed_gramian_finite(sys_, args.tf)
    elif args.tf is None:
        G = infinite_gramian(sys_, args.kind)
    else:
        G = finite_gramian(sys_, args.tf, args.kind)
    met = energy_metrics(G)
    out = {
        "kind": G.kind,
        "horizon": None if G.is_infinite else G.horizon,
        "drivers": [int(i) for i in drivers],
        **met.as_dict(),
        **{k: v for k, v in G.diagnostics.items()},
    }
    _emit(out, args.out)
    return 0


def cmd_control(args):
    A = read_edge_list(args.system)
    n = A.shape[0]
    drivers = _drivers_for(A, args)
    sys_ = LinearSystem.from_drivers(A, drivers)
    rng = np.random.default_rng(args.seed)
    x_o = args.x0 if args.x0 is not None else rng.standard_normal(n)
    x_f = args.xf if args.xf is not None else rng.standard_normal(n)
    law = min_energy_control(sys_, TransferTask(x_o, x_f, args.tf))
    _, X = simulate(sys_, law, x_o, args.tf, steps=args.steps)
    err = float(np.linalg.norm(X[-1] - x_f))
    _emit(
        {
            "drivers": [int(i) for i in drivers],
            "energy": law.energy,
            "endpoint_error": err,
            "relative_endpoint_error": err / max(1.0, float(np.linalg.norm(x_f))),
        },
        args.out,
    )
    return 0


def cmd_place(args):
    if args.grid:
        grid = ingest_grid(args.grid)
        net = build_swing_grid(
            np.column_stack([grid.edges, grid.weights]),
            n=grid.n,
            mass_mean=args.mass_mean,
            grounding=args.grounding,
            seed=args.seed,
        )
        modal = modal_decomposition(net)
        A = net.coupling_matrix()
    else:
        if not args.system:
            raise InvalidInputError("give a system file or --grid")
        A = read_edge_list(args.system)
        modal = None
    strategy = args.strategy
    m = args.m
    if strategy == "rw":
        drivers = list(rank_by_rw(A).order[:m])
    elif strategy == "random":
        drivers = random_placement(A.shape[0], m, args.seed)
    elif modal is None:
        if strategy != "brute_force":
            raise InvalidInputError(f"strategy {strategy!r} needs --grid (an oscillator network)")
        drivers = brute_force_placement(A, m, args.metric or "lambda_min", args.tf)
    elif strategy == "maxmin":
        drivers = greedy_maxmin(modal, m)
    elif strategy == "exact_trace":
        drivers = exact_trace_placement(modal, m, args.weighting)
    elif strategy == "trinv":
        drivers = greedy_trinv(modal, m, literal=args.alg2_literal)
    elif strategy == "mode_power":
        drivers = mode_power_placement(modal, m, args.mode)
    elif strategy == "brute_force":
        drivers = brute_force_placement(modal, m, args.metric or "lambda_min", weighting=args.weighting)
    else:
        raise InvalidInputError(f"unknown strategy {strategy!r}")
    _emit({"strategy": strategy, "m": m, "drivers": [int(i) for i in drivers]}, args.out)
    return 0


def cmd_experiment(args):
    overrides = {}
    for f in fields(ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = coerce_value(f.name, value) if isinstance(value, str) else value
    if args.alg2_literal:
        overrides["alg2_literal"] = True
    if args.scale:
        overrides["scale"] = args.scale
    cfg = load_config(args.config, **overrides)
    table = run_experiment(cfg)
    if cfg.out:
        emit_csv(table, cfg.out)
        log.info("wrote %d rows to %s", len(table), cfg.out)
    else:
        sys.stdout.write(table_to_csv(table))
    return 0


def cmd_ingest(args):
    grid = ingest_grid(args.path, args.expect_nodes, args.expect_edges)
    summary = {"nodes": grid.n, "edges": int(len(grid.edges))}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("# original_id compact_id\n")
            for tok, idx in grid.mapping.items():
                fh.write(f"{tok} {idx}\n")
        summary["mapping"] = args.out
    _emit(summary)
    return 0


def _add_driver_args(p):
    p.add_argument("system", help="state matrix as an edge list (src dst weight)")
    p.add_argument("--drivers", type=_int_list, help="comma-separated driver nodes")
    p.add_argument("--m", type=int, help="number of drivers chosen by --strategy")
    p.add_argument("--strategy", choices=("rw", "random"), default="rw")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write JSON here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="netenergy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a random network as an edge list")
    p.add_argument("--topology", choices=("full", "er", "sf"), default="full")
    p.add_argument("--preset", choices=sorted(PRESETS), default="blue")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--p", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("gramian", help="Gramian and energy metrics of a system file")
    _add_driver_args(p)
    p.add_argument("--tf", type=float, help="horizon; omit for infinite")
    p.add_argument("--kind", choices=("mixed", "reach", "ctrl"), default="mixed")
    p.set_defaults(func=cmd_gramian)

    p = sub.add_parser("control", help="synthesise a minimum-energy transfer and verify it")
    _add_driver_args(p)
    p.add_argument("--tf", type=float, required=True)
    p.add_argument("--x0", type=_float_list, help="initial state (default: random)")
    p.add_argument("--xf", type=_float_list, help="final state (default: random)")
    p.add_argument("--steps", type=int, default=10_000)
    p.set_defaults(func=cmd_control)

    p = sub.add_parser("place", help="run a driver placement strategy")
    p.add_argument("system", nargs="?", help="state matrix edge list")
    p.add_argument("--grid", help="grid edge list; places drivers on a swing-equation network")
    p.add_argument(
        "--strategy",
        choices=("rw", "random", "maxmin", "exact_trace", "trinv", "brute_force", "mode_power"),
        default="rw",
    )
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--metric", choices=("lambda_min", "trace", "trace_inv"))
    p.add_argument("--weighting", choices=("published", "exact"), default="published")
    p.add_argument("--mode", type=int, default=0, help="target mode for mode_power (0-based)")
    p.add_argument("--tf", type=float)
    p.add_argument("--alg2-literal", action="store_true")
    p.add_argument("--mass-mean", type=float, default=10.0)
    p.add_argument("--grounding", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("experiment", help="run an ensemble sweep and write CSV")
    p.add_argument("--config", help="flat key = value file")
    p.add_argument("--scale", choices=("desk", "full"))
    for f in fields(ExperimentConfig):
        if f.name == "alg2_literal":
            continue
        flags = [f"--{f.name.replace('_', '-')}"] + _ALIASES.get(f.name, [])
        p.add_argument(*flags, dest=f.name, type=str, default=None)
    p.add_argument("--alg2-literal", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("ingest", help="validate a grid edge list")
    p.add_argument("path")
    p.add_argument("--expect-nodes", type=int)
    p.add_argument("--expect-edges", type=int)
    p.add_argument("--out", help="write the id mapping here")
    p.set_defaults(func=cmd_ingest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except NetEnergyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return InvalidInputError.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
