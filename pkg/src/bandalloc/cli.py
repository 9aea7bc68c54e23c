"""Command-line interface: run the engine, the oracle, or both, or
generate scenario files. Reports go to standard output as ``key: value``
lines; warnings and errors go to standard error."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import math
import sys
from enum import IntEnum
from pathlib import Path

from . import engine, oracle
from .admission import admit
from .scenario import (
    Scenario,
    ScenarioError,
    generate_random_scenario,
    parse_scenario,
    serialize_scenario,
)

__all__ = ["ExitStatus", "main", "entrypoint"]


class ExitStatus(IntEnum):
    OK = 0
    INVALID_INPUT = 1
    NOT_CONVERGED = 2
    NUMERICAL_FAILURE = 3


class _CliError(Exception):
    """Usage or input problem; maps to exit code 1."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise _CliError(message)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _fmt_vec(values) -> str:
    return " ".join(_fmt(v) for v in values)


def _emit(key: str, value) -> None:
    print(f"{key}: {value}")


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _load_scenario_file(path: str) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read scenario file {path}: {exc}") from None
    try:
        return parse_scenario(text)
    except ScenarioError as exc:
        raise _CliError(f"invalid scenario {path}: {exc}") from None


def _apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    global_kwargs = {}
    if args.eta is not None:
        global_kwargs["eta"] = args.eta
    if args.mu is not None:
        global_kwargs["mu"] = args.mu
    option_kwargs = {}
    if args.max_iters is not None:
        option_kwargs["max_iters"] = args.max_iters
    if args.tol_consensus is not None:
        option_kwargs["tol_consensus"] = args.tol_consensus
    if args.tol_constraint is not None:
        option_kwargs["tol_constraint"] = args.tol_constraint
    if args.init is not None:
        option_kwargs["init_mode"] = "seeded-random" if args.init == "random" else args.init
    if args.seed is not None:
        option_kwargs["seed"] = args.seed
    if not global_kwargs and not option_kwargs:
        return scenario
    try:
        return dataclasses.replace(
            scenario,
            globals=dataclasses.replace(scenario.globals, **global_kwargs),
            options=dataclasses.replace(scenario.options, **option_kwargs),
        )
    except ScenarioError as exc:
        raise _CliError(f"invalid override: {exc}") from None


def _write_trace(path: str, rows) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iter", "device", "x", "u_prime", "zeta", "q"])
            for row in rows:
                writer.writerow(
                    [row.iteration, row.device, row.x, row.u_prime, row.zeta, row.q]
                )
    except OSError as exc:
        raise _CliError(f"cannot write trace file {path}: {exc}") from None


def _run_engine(scenario: Scenario, args: argparse.Namespace) -> engine.RunResult:
    if args.stride < 1:
        raise _CliError(f"--stride must be >= 1, got {args.stride}")
    result = engine.run(scenario, trace_stride=args.stride)
    if args.trace is not None:
        _write_trace(args.trace, result.trace)
    return result


def _emit_common_header(scenario: Scenario) -> None:
    confirmed = admit(scenario.demands, scenario.globals.bandwidth)
    _emit("devices", scenario.n)
    _emit("bandwidth", _fmt(scenario.globals.bandwidth))
    _emit("confirmed_demands", _fmt_vec(confirmed.values))
    _emit("confirmed_total", _fmt(confirmed.total))


def cmd_run(args: argparse.Namespace) -> ExitStatus:
    scenario = _apply_overrides(_load_scenario_file(args.scenario), args)
    try:
        result = _run_engine(scenario, args)
    except engine.NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return ExitStatus.NUMERICAL_FAILURE
    _emit("command", "run")
    _emit_common_header(scenario)
    _emit("converged", "true" if result.converged else "false")
    _emit("iterations", result.iterations_used)
    _emit("allocations", _fmt_vec(result.allocations))
    _emit("allocation_total", _fmt(math.fsum(result.allocations)))
    _emit("consensus_value", _fmt(result.consensus_value))
    _emit("consensus_residual", _fmt(result.diagnostics.consensus_residual))
    _emit("constraint_residual", _fmt(result.diagnostics.constraint_residual))
    for message in result.diagnostics.warnings:
        _warn(message)
    return ExitStatus.OK if result.converged else ExitStatus.NOT_CONVERGED


def cmd_oracle(args: argparse.Namespace) -> ExitStatus:
    scenario = _load_scenario_file(args.scenario)
    confirmed = admit(scenario.demands, scenario.globals.bandwidth)
    try:
        solution = oracle.solve(scenario, confirmed)
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return ExitStatus.NUMERICAL_FAILURE
    _emit("command", "oracle")
    _emit_common_header(scenario)
    _emit("allocations", _fmt_vec(solution.allocations))
    _emit("allocation_total", _fmt(math.fsum(solution.allocations)))
    _emit("lambda", "n/a" if solution.lam is None else _fmt(solution.lam))
    _emit("objective", _fmt(solution.objective))
    negatives = [i for i, x in enumerate(solution.allocations) if x < 0.0]
    if negatives:
        _warn(
            "optimal allocation is negative for device(s) "
            + ", ".join(str(i) for i in negatives)
        )
    return ExitStatus.OK


def cmd_compare(args: argparse.Namespace) -> ExitStatus:
    scenario = _apply_overrides(_load_scenario_file(args.scenario), args)
    try:
        result = _run_engine(scenario, args)
    except engine.NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return ExitStatus.NUMERICAL_FAILURE
    confirmed = admit(scenario.demands, scenario.globals.bandwidth)
    try:
        solution = oracle.solve(scenario, confirmed)
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return ExitStatus.NUMERICAL_FAILURE
    gaps = [abs(a - b) for a, b in zip(result.allocations, solution.allocations)]
    max_gap = max(gaps)
    threshold = 10.0 * (scenario.options.tol_consensus + scenario.options.tol_constraint)
    _emit("command", "compare")
    _emit_common_header(scenario)
    _emit("converged", "true" if result.converged else "false")
    _emit("iterations", result.iterations_used)
    _emit("engine_allocations", _fmt_vec(result.allocations))
    _emit("oracle_allocations", _fmt_vec(solution.allocations))
    _emit("per_device_gap", _fmt_vec(gaps))
    _emit("max_gap", _fmt(max_gap))
    _emit("gap_threshold", _fmt(threshold))
    _emit("consensus_value", _fmt(result.consensus_value))
    _emit("lambda", "n/a" if solution.lam is None else _fmt(solution.lam))
    if solution.lam is None or math.isnan(result.consensus_value):
        _emit("lambda_gap", "n/a")
    else:
        _emit("lambda_gap", _fmt(abs(result.consensus_value - solution.lam)))
    for message in result.diagnostics.warnings:
        _warn(message)
    passed = result.converged and max_gap <= threshold
    return ExitStatus.OK if passed else ExitStatus.NOT_CONVERGED


def cmd_gen(args: argparse.Namespace) -> ExitStatus:
    try:
        scenario = generate_random_scenario(args.n, args.seed)
    except ValueError as exc:
        raise _CliError(str(exc)) from None
    text = serialize_scenario(scenario)
    if args.out is not None:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise _CliError(f"cannot write {args.out}: {exc}") from None
    else:
        sys.stdout.write(text)
    return ExitStatus.OK


def _add_engine_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("scenario", help="path to a scenario JSON file")
    parser.add_argument("--trace", metavar="FILE", help="write a per-iteration CSV trace")
    parser.add_argument(
        "--stride",
        type=int,
        default=1,
        metavar="K",
        help="record every K-th iteration in the trace (default 1)",
    )
    parser.add_argument("--max-iters", type=int, metavar="K", help="iteration cap override")
    parser.add_argument(
        "--tol-consensus", type=float, metavar="T", help="consensus tolerance override"
    )
    parser.add_argument(
        "--tol-constraint", type=float, metavar="T", help="constraint tolerance override"
    )
    parser.add_argument("--eta", type=float, metavar="E", help="consensus gain override")
    parser.add_argument("--mu", type=float, metavar="M", help="correction step override")
    parser.add_argument(
        "--init",
        choices=("demand", "uniform", "random"),
        help="initialization mode override",
    )
    parser.add_argument("--seed", type=int, metavar="S", help="seed for random init")


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="bandalloc",
        description="Distributed bandwidth allocation: consensus engine, "
        "centralized oracle, and scenario tooling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run the distributed engine on a scenario")
    _add_engine_arguments(run_parser)
    run_parser.set_defaults(handler=cmd_run)

    oracle_parser = sub.add_parser("oracle", help="solve a scenario centrally")
    oracle_parser.add_argument("scenario", help="path to a scenario JSON file")
    oracle_parser.set_defaults(handler=cmd_oracle)

    compare_parser = sub.add_parser(
        "compare", help="run engine and oracle, report per-device gaps"
    )
    _add_engine_arguments(compare_parser)
    compare_parser.set_defaults(handler=cmd_compare)

    gen_parser = sub.add_parser("gen", help="generate a random scenario")
    gen_parser.add_argument("--n", type=int, required=True, help="device count")
    gen_parser.add_argument("--seed", type=int, required=True, help="generator seed")
    gen_parser.add_argument("--out", metavar="FILE", help="write to a file instead of stdout")
    gen_parser.set_defaults(handler=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return int(args.handler(args))
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitStatus.INVALID_INPUT)


def entrypoint() -> None:
    raise SystemExit(main())
