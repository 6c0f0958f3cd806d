"""Command-line front end: solve, bench, sweep, verify, info."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import selfcheck
from ._kernels import USING_COMPILED_CORE
from .bench import (
    ALGORITHMS,
    BenchReport,
    RunRecord,
    apply_override,
    dispatch,
    emit_csv,
    format_table,
    param_snapshot,
    run_experiment,
    sweep_parameter,
)
from .instance import Instance, load_instance
from .mapping import accuracy
from .orchestrator import (
    ParallelConfig,
    default_annealing_params,
    default_config,
    default_genetic_params,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_RUN = 3


class _Parser(argparse.ArgumentParser):
    # usage errors exit with 1 (argparse's default of 2 is our input-error code)
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="graphmap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, needs_algorithm=True):
        if needs_algorithm:
            p.add_argument("--algorithm", default="sa", help="sa, ga, or composite")
        p.add_argument("--workers", type=int, default=None, help="worker count (default: CPUs capped at n)")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a tunable (repeatable); wins over --params",
        )
        p.add_argument(
            "--params",
            dest="params_file",
            default=None,
            metavar="FILE",
            help="file of 'key = value' lines applied before --set",
        )

    p_solve = sub.add_parser("solve", help="run one algorithm on one instance")
    p_solve.add_argument("instance")
    common(p_solve)
    p_solve.add_argument("--emit-mapping", action="store_true", help="print the mapping")

    p_bench = sub.add_parser("bench", help="repeat runs over instances and algorithms")
    p_bench.add_argument("instances", nargs="+")
    common(p_bench, needs_algorithm=False)
    p_bench.add_argument(
        "--algorithm",
        default="all",
        help="comma-separated subset of sa,ga,composite or 'all'",
    )
    p_bench.add_argument("--reps", type=int, default=10)
    p_bench.add_argument("--out", default="bench.csv", help="CSV output path")

    p_sweep = sub.add_parser("sweep", help="vary one tunable, all else fixed")
    p_sweep.add_argument("instance")
    common(p_sweep)
    p_sweep.add_argument("--parameter", required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.add_argument("--reps", type=int, default=10)
    p_sweep.add_argument("--out", default="sweep.csv", help="CSV output path")

    p_verify = sub.add_parser("verify", help="run the built-in oracle suite")
    p_verify.add_argument("--seed", type=int, default=0)

    p_info = sub.add_parser("info", help="print instance stats and registry entry")
    p_info.add_argument("instance")
    return parser


def _read_params_file(path: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _collect_overrides(args) -> dict[str, str]:
    pairs: dict[str, str] = {}
    if args.params_file:
        pairs.update(_read_params_file(args.params_file))
    for item in args.overrides:
        if "=" not in item:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        pairs[key.strip()] = value.strip()
    return pairs


def _prepare(inst: Instance, args, algorithm: str):
    """Default params and config for this instance, with overrides applied."""
    config = default_config(inst.n, workers=args.workers, seed=args.seed)
    if algorithm == "sa":
        params = default_annealing_params(inst.n)
    elif algorithm == "ga":
        params = default_genetic_params(inst.n)
    elif algorithm == "composite":
        params = (default_annealing_params(inst.n), default_genetic_params(inst.n))
    else:
        raise ValueError(
            f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}"
        )
    for key, value in _collect_overrides(args).items():
        params, config = apply_override(params, config, key, value)
    return params, config


def _load(path: str) -> Instance:
    try:
        return load_instance(path)
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise _InputError(f"{path}: {exc}") from exc


class _InputError(Exception):
    pass


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    params, config = _prepare(inst, args, args.algorithm)
    started = time.perf_counter()
    sol = dispatch(inst, args.algorithm, params, config)
    elapsed = time.perf_counter() - started
    print(f"instance   {inst.name} (n={inst.n})")
    print(f"algorithm  {args.algorithm}  workers {config.workers}  seed {config.seed}")
    print(f"backend    {'compiled' if USING_COMPILED_CORE else 'pure python'}")
    print(f"F          {sol.objective}")
    if inst.known_optimum is not None:
        print(f"A1         {accuracy(sol.objective, inst.known_optimum):.2f}%")
    print(f"seconds    {elapsed:.3f}")
    if args.emit_mapping:
        print("mapping    " + " ".join(str(v) for v in sol.mapping))
    return EXIT_OK


def _parse_algorithms(spec: str) -> list[str]:
    if spec == "all":
        return list(ALGORITHMS)
    names = [s.strip() for s in spec.split(",") if s.strip()]
    for name in names:
        if name not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {name!r}; expected one of {ALGORITHMS}"
            )
    if not names:
        raise ValueError("no algorithms selected")
    return names


def cmd_bench(args) -> int:
    algorithms = _parse_algorithms(args.algorithm)
    report = BenchReport()
    input_failed = run_failed = False
    for path in args.instances:
        try:
            inst = _load(path)
        except _InputError as exc:
            input_failed = True
            report.records.append(
                RunRecord(Path(path).stem, "-", "-", args.seed, None, None, None, str(exc))
            )
            continue
        for algorithm in algorithms:
            params, config = _prepare(inst, args, algorithm)
            try:
                report.extend(run_experiment(inst, algorithm, params, config, args.reps))
            except Exception as exc:  # keep going; the row records the failure
                run_failed = True
                report.records.append(
                    RunRecord(
                        inst.name,
                        algorithm,
                        param_snapshot(params, config),
                        config.seed,
                        None,
                        None,
                        None,
                        str(exc),
                    )
                )
    Path(args.out).write_text(emit_csv(report))
    print(format_table(report), end="")
    print(f"wrote {args.out}")
    if input_failed:
        return EXIT_INPUT
    if run_failed:
        return EXIT_RUN
    return EXIT_OK


def cmd_sweep(args) -> int:
    inst = _load(args.instance)
    params, config = _prepare(inst, args, args.algorithm)
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ValueError("--values must list at least one value")
    report = sweep_parameter(
        inst, args.algorithm, params, args.parameter, values, config, args.reps
    )
    Path(args.out).write_text(emit_csv(report))
    print(format_table(report), end="")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = selfcheck.run_all(args.seed)
    status = EXIT_OK
    for name, passed, detail in results:
        print(f"{'ok  ' if passed else 'FAIL'} {name}: {detail}")
        if not passed and status == EXIT_OK:
            status = EXIT_RUN
    return status


def cmd_info(args) -> int:
    inst = _load(args.instance)
    print(f"name           {inst.name}")
    print(f"order          {inst.n}")
    print(f"distance max   {int(inst.distances.max())}")
    print(f"flow max       {int(inst.flows.max())}")
    nonzero = int(np.count_nonzero(inst.flows))
    print(f"flow nonzeros  {nonzero} of {inst.n * (inst.n - 1)} off-diagonal")
    if inst.known_optimum is not None:
        print(f"known optimum  {inst.known_optimum}")
    else:
        print("known optimum  not registered")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "solve": cmd_solve,
        "bench": cmd_bench,
        "sweep": cmd_sweep,
        "verify": cmd_verify,
        "info": cmd_info,
    }
    try:
        return handlers[args.command](args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # unexpected solver failure
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_RUN


if __name__ == "__main__":
    sys.exit(main())
