"""Parallel runs: P cooperating workers with deterministic exchanges.

Workers are logical: they advance round-robin within the calling thread and
exchange value-copied solutions at barrier points, so results depend only on
(instance, params, config) and never on scheduling.  Parallel SA broadcasts
the global best every ``exchange_interval`` proposals; parallel GA migrates
each population's best members around a ring once per generation; the
composite pipeline seeds the GA populations from exchange-free annealing.
"""

from __future__ import annotations

import dataclasses
import math
import os

import numpy as np

from . import _kernels
from .annealing import AnnealingParams, AnnealingProcess, _segments
from .genetic import (
    GeneticParams,
    Population,
    best_member,
    ga_generation,
    init_population,
    replace_worst,
)
from .instance import Instance
from .mapping import Solution, random_mapping

_ALGORITHM_TAGS = {"sa": 1, "ga": 2, "composite": 3}


@dataclasses.dataclass
class ParallelConfig:
    """Worker count, master seed, and the shared iteration budgets."""

    workers: int = 1
    seed: int = 0
    exchange_interval: int = 100
    total_iterations: int = 50_000
    ga_iterations: int = 5_000

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.exchange_interval < 1:
            raise ValueError(
                f"exchange_interval must be >= 1, got {self.exchange_interval}"
            )
        if (
            self.total_iterations < self.exchange_interval
            or self.total_iterations % self.exchange_interval
        ):
            raise ValueError(
                "total_iterations must be a positive multiple of "
                f"exchange_interval, got {self.total_iterations} and "
                f"{self.exchange_interval}"
            )
        if self.ga_iterations < 0:
            raise ValueError(f"ga_iterations must be >= 0, got {self.ga_iterations}")

    def replace(self, **changes) -> "ParallelConfig":
        return dataclasses.replace(self, **changes)


def worker_rng(master_seed: int, rank: int, algorithm: str) -> np.random.Generator:
    """Independent, reproducible stream for one worker of one algorithm."""
    return np.random.default_rng(
        np.random.SeedSequence([master_seed, rank, _ALGORITHM_TAGS[algorithm]])
    )


def default_total_iterations(n_vertices: int) -> int:
    """Per-worker proposal budget: 50k below 256 vertices, 100k from there on."""
    if n_vertices < 1:
        raise ValueError(f"n_vertices must be >= 1, got {n_vertices}")
    return 50_000 if n_vertices < 256 else 100_000


def default_solvers(n_vertices: int) -> int:
    """Chains per worker: the graph order up to 100 vertices, then 125."""
    if n_vertices < 1:
        raise ValueError(f"n_vertices must be >= 1, got {n_vertices}")
    return n_vertices if n_vertices <= 100 else 125


def default_ga_iterations(n_vertices: int) -> int:
    """Generation budget: a tenth of the proposal budget."""
    return default_total_iterations(n_vertices) // 10


def default_annealing_params(n_vertices: int, **overrides) -> AnnealingParams:
    base = dict(
        solvers=default_solvers(n_vertices),
        total_iterations=default_total_iterations(n_vertices),
    )
    base.update(overrides)
    return AnnealingParams(**base)


def default_genetic_params(n_vertices: int, **overrides) -> GeneticParams:
    base = dict(
        population_size=n_vertices,
        iterations=default_ga_iterations(n_vertices),
    )
    base.update(overrides)
    return GeneticParams(**base)


def default_workers(n_vertices: int) -> int:
    """Logical CPU count capped at the graph order."""
    return max(1, min(os.cpu_count() or 1, n_vertices))


def default_config(n_vertices: int, workers: int | None = None, seed: int = 0) -> ParallelConfig:
    return ParallelConfig(
        workers=default_workers(n_vertices) if workers is None else workers,
        seed=seed,
        total_iterations=default_total_iterations(n_vertices),
        ga_iterations=default_ga_iterations(n_vertices),
    )


def _broadcast_best(procs: list[AnnealingProcess]) -> tuple[np.ndarray, int]:
    """Global best over workers; ties resolve to the lowest rank."""
    best_proc = procs[0]
    best_f = int(best_proc.best_objective[0])
    for proc in procs[1:]:
        f = int(proc.best_objective[0])
        if f < best_f:
            best_proc = proc
            best_f = f
    return best_proc.best_assignment.copy(), best_f


def run_parallel_sa(
    inst: Instance,
    sa_params: AnnealingParams,
    config: ParallelConfig,
    trace: list | None = None,
) -> Solution:
    """P annealing workers with periodic broadcast of the global best.

    The config's budgets override the corresponding params fields so one
    config drives all algorithms of a comparison.
    """
    eff = sa_params.replace(
        total_iterations=config.total_iterations,
        exchange_interval=config.exchange_interval,
    )
    procs = [
        AnnealingProcess(inst, eff, worker_rng(config.seed, rank, "sa"), config.total_iterations)
        for rank in range(config.workers)
    ]
    assignment = procs[0].best_assignment.copy()
    objective = int(procs[0].best_objective[0])
    for seg in _segments(config.total_iterations, config.exchange_interval):
        for proc in procs:
            proc.advance_segment(seg)
        assignment, objective = _broadcast_best(procs)
        for proc in procs:
            proc.adopt(assignment, objective)
        if trace is not None:
            trace.append(objective)
    return Solution(assignment, objective)


def _top_members(population: Population, count: int) -> list[Solution]:
    order = sorted(
        range(len(population)),
        key=lambda idx: (population.members[idx].objective, idx),
    )
    return [population.members[idx].copy() for idx in order[:count]]


def _global_best(populations: list[Population]) -> Solution:
    best = best_member(populations[0])
    for pop in populations[1:]:
        cand = best_member(pop)
        if cand.objective < best.objective:
            best = cand
    return best.copy()


def _ga_loop(
    inst: Instance,
    populations: list[Population],
    rngs: list[np.random.Generator],
    params: GeneticParams,
    generations: int,
    trace: list | None = None,
) -> None:
    workers = len(populations)
    for _ in range(generations):
        for rank in range(workers):
            ga_generation(inst, populations[rank], params, rngs[rank])
        if params.migrants > 0:
            outbound = [
                _top_members(populations[rank], min(params.migrants, len(populations[rank])))
                for rank in range(workers)
            ]
            for rank in range(workers):
                replace_worst(populations[(rank + 1) % workers], outbound[rank])
        if trace is not None:
            trace.append(_global_best(populations).objective)


def run_parallel_ga(
    inst: Instance,
    ga_params: GeneticParams,
    config: ParallelConfig,
    trace: list | None = None,
) -> Solution:
    """P island populations in a ring, migrating bests once per generation."""
    rngs = [worker_rng(config.seed, rank, "ga") for rank in range(config.workers)]
    populations = [
        init_population(inst, ga_params.population_size, rngs[rank])
        for rank in range(config.workers)
    ]
    _ga_loop(inst, populations, rngs, ga_params, config.ga_iterations, trace)
    return _global_best(populations)


def composite_stage_populations(
    inst: Instance,
    sa_params: AnnealingParams,
    ga_params: GeneticParams,
    config: ParallelConfig,
    rngs: list[np.random.Generator],
) -> list[Population]:
    """Stage 1 of the composite pipeline: exchange-free annealing snapshots.

    Each worker anneals alone, recording its best-so-far mapping every
    ceil(budget / population_size) proposals; the distinct snapshots, padded
    with random mappings when too few, become the worker's GA population.
    """
    budget = config.total_iterations
    size = ga_params.population_size
    snap_interval = max(1, math.ceil(budget / size))
    populations = []
    for rank in range(config.workers):
        rng = rngs[rank]
        proc = AnnealingProcess(inst, sa_params, rng, budget, interval=snap_interval)
        seen: dict[bytes, Solution] = {}
        for seg in _segments(budget, snap_interval):
            proc.advance_segment(seg)
            proc.adopt(proc.best_assignment.copy(), int(proc.best_objective[0]))
            snap = proc.best_solution()
            seen.setdefault(snap.mapping.tobytes(), snap)
        members = list(seen.values())
        while len(members) < size:
            m = random_mapping(inst.n, rng)
            key = m.tobytes()
            if key in seen:
                continue
            pad = Solution(
                m, int(_kernels.evaluate_objective(inst.distances, inst.flows, m))
            )
            seen[key] = pad
            members.append(pad)
        populations.append(Population(members[:size]))
    return populations


def run_composite(
    inst: Instance,
    sa_params: AnnealingParams,
    ga_params: GeneticParams,
    config: ParallelConfig,
    trace: list | None = None,
) -> Solution:
    """Stage 1: exchange-free annealing per worker; stage 2: the parallel GA."""
    rngs = [worker_rng(config.seed, rank, "composite") for rank in range(config.workers)]
    populations = composite_stage_populations(inst, sa_params, ga_params, config, rngs)
    _ga_loop(inst, populations, rngs, ga_params, config.ga_iterations, trace)
    return _global_best(populations)
