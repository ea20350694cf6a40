"""Command-line workbench: solve / bench / evaluate / oracle.

Activation vectors serialize as ``arc_id,chi`` csv.  Exit code 0 on batch
completion, 2 on configuration errors (argparse uses 2 for bad flags too).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .bench import (
    ALGORITHMS,
    ConfigError,
    ExperimentConfig,
    RepetitaInstance,
    _run_algorithm,
    emit_report,
    make_row,
    run_experiment,
)
from .model import Activation, FULL_DUPLEX, SIMPLEX, full_activation, scale_traffic
from .mspnd import brute_force_mspnd
from .repetita import parse_repetita_demands, parse_repetita_graph, preprocess
from .routing import mlu

MODE_NAMES = {"simplex": SIMPLEX, "duplex": FULL_DUPLEX}
LENGTH_NAMES = {"given": "asGiven", "unit": "unit", "invcap": "inverseCapacity"}


def _add_instance_args(p: argparse.ArgumentParser, multi_demands: bool) -> None:
    p.add_argument("--graph", required=True, help="REPETITA topology file")
    p.add_argument(
        "--demands", required=True, nargs="+" if multi_demands else None,
        help="REPETITA demand file" + ("(s)" if multi_demands else ""),
    )
    p.add_argument("--mu", type=int, default=1, help="connections per link")
    p.add_argument("--mode", choices=sorted(MODE_NAMES), default="simplex")
    p.add_argument("--lengths", choices=sorted(LENGTH_NAMES), default="given")


def _load_preprocessed(args, demand_path: str):
    precursor = parse_repetita_graph(Path(args.graph).read_text())
    traffic = parse_repetita_demands(
        Path(demand_path).read_text(), num_nodes=len(precursor.nodes)
    )
    return preprocess(
        precursor, traffic, MODE_NAMES[args.mode], LENGTH_NAMES[args.lengths], args.mu
    )


def _activation_csv(activation: Activation) -> str:
    lines = ["arc_id,chi"]
    lines.extend(f"{aid},{chi}" for aid, chi in enumerate(activation.counts))
    return "\n".join(lines) + "\n"


def _read_activation_csv(text: str, n_arcs: int) -> Activation:
    counts = [0] * n_arcs
    lines = [ln for ln in text.splitlines() if ln.strip()]
    for ln in lines[1:]:
        aid, chi = ln.split(",")
        counts[int(aid)] = int(chi)
    return Activation(tuple(counts))


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_solve(args) -> int:
    net, traffic = _load_preprocessed(args, args.demands)
    rho = Fraction(args.rho).limit_denominator(10**6)
    if not 0 < rho < 1:
        raise ConfigError("--rho must lie strictly between 0 and 1")
    scaled = scale_traffic(traffic, rho)
    config = ExperimentConfig(
        algorithms=(args.algorithm,),
        rhos=(float(rho),),
        mus=(args.mu,),
        modes=(MODE_NAMES[args.mode],),
        time_limit=args.time_limit,
        length_mode=LENGTH_NAMES[args.lengths],
        strengthening=args.strengthening == "on",
    )
    import time as _time

    start = _time.perf_counter()
    activation, status, bound = _run_algorithm(
        args.algorithm, net, rho, scaled, config
    )
    runtime = _time.perf_counter() - start
    _write(_activation_csv(activation), args.out)
    if args.out not in (None, "-"):
        row = make_row(
            Path(args.graph).stem, "0", args.algorithm, float(rho), args.mu,
            MODE_NAMES[args.mode], status, activation=activation,
            full_value=full_activation(net).value, runtime=runtime,
            mlus=[mlu(net, activation, scaled)], bound=bound,
        )
        sys.stdout.write(emit_report([row], args.format))
    return 0


def _cmd_bench(args) -> int:
    spec = json.loads(Path(args.config).read_text())
    try:
        instances = []
        for inst in spec["instances"]:
            precursor = parse_repetita_graph(Path(inst["graph"]).read_text())
            matrices = tuple(
                parse_repetita_demands(Path(p).read_text(), num_nodes=len(precursor.nodes))
                for p in inst["demands"]
            )
            instances.append(
                RepetitaInstance(str(inst.get("id", Path(inst["graph"]).stem)), precursor, matrices)
            )
        config = ExperimentConfig(
            algorithms=tuple(spec.get("algorithms", ALGORITHMS)),
            rhos=tuple(spec.get("rho", (0.3, 0.5, 0.7))),
            mus=tuple(spec.get("mu", (1,))),
            modes=tuple(MODE_NAMES[m] for m in spec.get("modes", ("simplex",))),
            time_limit=float(spec.get("time_limit", 600.0)),
            length_mode=LENGTH_NAMES[spec.get("lengths", "given")],
            strengthening=bool(spec.get("strengthening", True)),
        )
        config.validate()
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad bench config: {exc}") from exc
    rows = run_experiment(config, instances)
    _write(emit_report(rows, args.format), args.out)
    return 0


def _cmd_evaluate(args) -> int:
    results = []
    for k, demand_path in enumerate(args.demands):
        net, traffic = _load_preprocessed(args, demand_path)
        rho = Fraction(args.rho).limit_denominator(10**6)
        scaled = scale_traffic(traffic, rho)
        activation = _read_activation_csv(Path(args.chi).read_text(), net.n_arcs)
        value = mlu(net, activation, scaled)
        results.append((str(k), float(value)))
    if args.format == "json":
        payload = [
            {"matrix": k, "mlu": "inf" if v == float("inf") else round(v, 6)}
            for k, v in results
        ]
        _write(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["matrix,mlu"]
        lines.extend(
            f"{k},{'inf' if v == float('inf') else format(v, '.6f')}" for k, v in results
        )
        _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_oracle(args) -> int:
    net, traffic = _load_preprocessed(args, args.demands)
    rho = Fraction(args.rho).limit_denominator(10**6)
    activation = brute_force_mspnd(net, scale_traffic(traffic, rho))
    _write(_activation_csv(activation), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greente",
        description="Minimum-active-connection subnetwork workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one algorithm on one instance")
    _add_instance_args(p, multi_demands=False)
    p.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--time-limit", type=float, default=600.0)
    p.add_argument("--strengthening", choices=("on", "off"), default="on")
    p.add_argument("--out", default=None, help="activation csv destination ('-' = stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="run an experiment batch from a config file")
    p.add_argument("--config", required=True, help="json config driving the batch")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("evaluate", help="utilization of a stored activation")
    _add_instance_args(p, multi_demands=True)
    p.add_argument("--chi", required=True, help="activation csv file")
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("oracle", help="brute-force exact optimum for small tests")
    _add_instance_args(p, multi_demands=False)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
