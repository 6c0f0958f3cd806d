"""Experiment harness: repeated runs, aggregation, sweeps, CSV, oracle.

A record is one solver run; aggregates are recomputed from records per
(instance, algorithm, parameter snapshot) group, so a sweep's groups fall out
of the snapshot strings.  Timing wraps the solver call only.
"""

from __future__ import annotations

import dataclasses
import itertools
import time

import numpy as np

from .annealing import AnnealingParams
from .genetic import GeneticParams
from .instance import Instance
from .mapping import Solution, accuracy
from .orchestrator import (
    ParallelConfig,
    run_composite,
    run_parallel_ga,
    run_parallel_sa,
)

ALGORITHMS = ("sa", "ga", "composite")

CSV_HEADER = "instance,algorithm,param_snapshot,seed,F,A1,seconds"


@dataclasses.dataclass(frozen=True)
class RunRecord:
    instance: str
    algorithm: str
    param_snapshot: str
    seed: int
    objective: int | None
    accuracy_pct: float | None
    seconds: float | None
    error: str | None = None


@dataclasses.dataclass(frozen=True)
class Aggregate:
    count: int
    mean_objective: float
    min_objective: int
    mean_seconds: float
    mean_accuracy: float | None
    min_accuracy: float | None


@dataclasses.dataclass
class BenchReport:
    records: list[RunRecord] = dataclasses.field(default_factory=list)

    def extend(self, other: "BenchReport") -> None:
        self.records.extend(other.records)

    def aggregates(self) -> dict[tuple[str, str, str], Aggregate]:
        groups: dict[tuple[str, str, str], list[RunRecord]] = {}
        for rec in self.records:
            if rec.error is not None:
                continue
            key = (rec.instance, rec.algorithm, rec.param_snapshot)
            groups.setdefault(key, []).append(rec)
        out = {}
        for key, recs in groups.items():
            objectives = [r.objective for r in recs]
            best = min(range(len(recs)), key=lambda i: objectives[i])
            accuracies = [r.accuracy_pct for r in recs]
            have_acc = all(a is not None for a in accuracies)
            out[key] = Aggregate(
                count=len(recs),
                mean_objective=sum(objectives) / len(recs),
                min_objective=objectives[best],
                mean_seconds=sum(r.seconds for r in recs) / len(recs),
                mean_accuracy=sum(accuracies) / len(recs) if have_acc else None,
                min_accuracy=accuracies[best] if have_acc else None,
            )
        return out


def _snapshot_value(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def param_snapshot(params, config: ParallelConfig) -> str:
    """Compact ``key=value`` snapshot of a run's tunables, ';'-joined."""
    fields: dict[str, object] = {}
    if isinstance(params, tuple):
        sa, ga = params
        fields.update({f"sa_{k}": v for k, v in dataclasses.asdict(sa).items()})
        fields.update({f"ga_{k}": v for k, v in dataclasses.asdict(ga).items()})
    else:
        fields.update(dataclasses.asdict(params))
    fields["workers"] = config.workers
    fields["total_iterations"] = config.total_iterations
    fields["exchange_interval"] = config.exchange_interval
    fields["ga_iterations"] = config.ga_iterations
    return ";".join(f"{k}={_snapshot_value(fields[k])}" for k in sorted(fields))


def dispatch(inst: Instance, algorithm: str, params, config: ParallelConfig) -> Solution:
    if algorithm == "sa":
        if not isinstance(params, AnnealingParams):
            raise TypeError("sa runs need AnnealingParams")
        return run_parallel_sa(inst, params, config)
    if algorithm == "ga":
        if not isinstance(params, GeneticParams):
            raise TypeError("ga runs need GeneticParams")
        return run_parallel_ga(inst, params, config)
    if algorithm == "composite":
        try:
            sa, ga = params
        except (TypeError, ValueError):
            raise TypeError(
                "composite runs need an (AnnealingParams, GeneticParams) pair"
            ) from None
        return run_composite(inst, sa, ga, config)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def run_experiment(
    inst: Instance,
    algorithm: str,
    params,
    config: ParallelConfig,
    repetitions: int = 10,
) -> BenchReport:
    """``repetitions`` runs seeded master_seed + rep index, timed and recorded."""
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    snapshot = param_snapshot(params, config)
    records = []
    for rep in range(repetitions):
        cfg = config.replace(seed=config.seed + rep)
        started = time.perf_counter()
        sol = dispatch(inst, algorithm, params, cfg)
        elapsed = time.perf_counter() - started
        a1 = (
            accuracy(sol.objective, inst.known_optimum)
            if inst.known_optimum is not None
            else None
        )
        records.append(
            RunRecord(
                instance=inst.name,
                algorithm=algorithm,
                param_snapshot=snapshot,
                seed=cfg.seed,
                objective=sol.objective,
                accuracy_pct=a1,
                seconds=elapsed,
            )
        )
    return BenchReport(records)


def _normalize(name: str) -> str:
    return name.lower().replace("_", "").replace("-", "")


def _tunable_targets(params, config: ParallelConfig):
    """Map normalized tunable names to (owner, field) pairs.

    Config fields are listed first so shared budget names resolve to the
    config, which is what the orchestrator obeys.
    """
    targets: dict[str, list[tuple[str, str]]] = {}

    def add(owner: str, obj) -> None:
        for field in dataclasses.fields(obj):
            if (owner, field.name) == ("config", "seed"):
                continue
            targets.setdefault(_normalize(field.name), []).append((owner, field.name))

    add("config", config)
    if isinstance(params, tuple):
        add("sa", params[0])
        add("ga", params[1])
    elif isinstance(params, AnnealingParams):
        add("sa", params)
    else:
        add("ga", params)
    return targets


def _coerce(current, raw):
    if isinstance(raw, str):
        if isinstance(current, bool):
            return raw.lower() in ("1", "true", "yes")
        if isinstance(current, int):
            return int(raw)
        if isinstance(current, float):
            return float(raw)
        return raw
    return raw


def apply_override(params, config: ParallelConfig, name: str, value):
    """Set one tunable by (normalized) name on every object carrying it."""
    targets = _tunable_targets(params, config)
    key = _normalize(name)
    if key not in targets:
        valid = ", ".join(sorted(targets))
        raise ValueError(f"unknown parameter {name!r}; recognized: {valid}")
    for owner, field in targets[key]:
        if owner == "config":
            config = config.replace(
                **{field: _coerce(getattr(config, field), value)}
            )
        elif owner == "sa":
            sa = params[0] if isinstance(params, tuple) else params
            sa = sa.replace(**{field: _coerce(getattr(sa, field), value)})
            params = (sa, params[1]) if isinstance(params, tuple) else sa
        else:
            ga = params[1] if isinstance(params, tuple) else params
            ga = ga.replace(**{field: _coerce(getattr(ga, field), value)})
            params = (params[0], ga) if isinstance(params, tuple) else ga
    return params, config


def sweep_parameter(
    inst: Instance,
    algorithm: str,
    base_params,
    parameter: str,
    values: list,
    config: ParallelConfig,
    repetitions: int = 10,
) -> BenchReport:
    """One run_experiment per value of one tunable, everything else fixed."""
    if not values:
        raise ValueError("sweep needs at least one value")
    report = BenchReport()
    for value in values:
        params_v, config_v = apply_override(base_params, config, parameter, value)
        report.extend(run_experiment(inst, algorithm, params_v, config_v, repetitions))
    return report


def brute_force_optimum(inst: Instance, batch: int = 20_000) -> Solution:
    """Exact optimum by enumerating all mappings; guarded to n <= 10.

    Ties resolve to the lexicographically smallest mapping.
    """
    if inst.n > 10:
        raise ValueError(f"enumeration guard: n must be <= 10, got {inst.n}")
    best_f = None
    best_perm = None
    it = itertools.permutations(range(inst.n))
    while True:
        chunk = list(itertools.islice(it, batch))
        if not chunk:
            break
        arr = np.asarray(chunk, dtype=np.int64)
        costs = (inst.flows[None, :, :] * inst.distances[arr[:, :, None], arr[:, None, :]]).sum(
            axis=(1, 2)
        )
        idx = int(np.argmin(costs))
        if best_f is None or costs[idx] < best_f:
            best_f = int(costs[idx])
            best_perm = arr[idx].copy()
    return Solution(best_perm, best_f)


def _fmt_a1(a1: float | None) -> str:
    return "" if a1 is None else f"{a1:.2f}"


def emit_csv(report: BenchReport) -> str:
    """Records then AGG rows, per the documented schema; A1 with 2 decimals."""
    lines = [CSV_HEADER]
    for rec in report.records:
        if rec.error is not None:
            f_field = "ERROR: " + rec.error.replace(",", ";").replace("\n", " ")
            lines.append(
                f"{rec.instance},{rec.algorithm},{rec.param_snapshot},{rec.seed},"
                f"{f_field},,"
            )
            continue
        lines.append(
            f"{rec.instance},{rec.algorithm},{rec.param_snapshot},{rec.seed},"
            f"{rec.objective},{_fmt_a1(rec.accuracy_pct)},{rec.seconds!r}"
        )
    for (name, algo, snapshot), agg in report.aggregates().items():
        lines.append(
            f"{name},{algo},{snapshot},AGG-MEAN,{agg.mean_objective!r},"
            f"{_fmt_a1(agg.mean_accuracy)},{agg.mean_seconds!r}"
        )
        lines.append(
            f"{name},{algo},{snapshot},AGG-MIN,{agg.min_objective},"
            f"{_fmt_a1(agg.min_accuracy)},"
        )
    return "\n".join(lines) + "\n"


def format_table(report: BenchReport) -> str:
    """Plain-text summary: best/mean F, mean A1, mean time in minutes."""
    header = (
        f"{'instance':<12} {'algorithm':<10} {'runs':>4} {'best F':>10} "
        f"{'mean F':>12} {'mean A1%':>9} {'mean T(min)':>11}"
    )
    rows = [header, "-" * len(header)]
    for (name, algo, _), agg in report.aggregates().items():
        a1 = "-" if agg.mean_accuracy is None else f"{agg.mean_accuracy:.2f}"
        rows.append(
            f"{name:<12} {algo:<10} {agg.count:>4} {agg.min_objective:>10} "
            f"{agg.mean_objective:>12.1f} {a1:>9} {agg.mean_seconds / 60:>11.3f}"
        )
    failures = [r for r in report.records if r.error is not None]
    for rec in failures:
        rows.append(f"{rec.instance:<12} {rec.algorithm:<10} FAILED: {rec.error}")
    return "\n".join(rows) + "\n"
