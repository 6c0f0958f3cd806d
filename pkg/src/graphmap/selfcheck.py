"""Built-in verification suite behind the ``verify`` command.

Each check returns (name, passed, detail).  The objective function used for
the bound checks is injectable so the guard logic itself can be tested
against a deliberately broken evaluator.
"""

from __future__ import annotations

import numpy as np

from . import annealing, bench, genetic, mapping, orchestrator
from .instance import generate_random_instance


def check_delta_consistency(seed: int) -> tuple[str, bool, str]:
    rng = np.random.default_rng(seed)
    for n in (5, 8, 11):
        inst = generate_random_instance(n, 9, seed + n)
        for _ in range(200):
            a = mapping.random_mapping(n, rng)
            i = int(rng.integers(n))
            j = int(rng.integers(n))
            d = mapping.swap_delta(inst, a, i, j)
            full = mapping.evaluate(inst, mapping.apply_swap(a, i, j)) - mapping.evaluate(inst, a)
            if d != full:
                return (
                    "delta-consistency",
                    False,
                    f"n={n} swap ({i},{j}): delta {d} != re-evaluation {full}",
                )
    return ("delta-consistency", True, "600 random swaps exact")


def check_oracle_bound(seed: int, evaluate_fn=None) -> tuple[str, bool, str]:
    evaluate_fn = evaluate_fn or mapping.evaluate
    for n in (5, 6):
        inst = generate_random_instance(n, 9, seed + n)
        optimum = bench.brute_force_optimum(inst).objective
        config = orchestrator.ParallelConfig(
            workers=2, seed=seed, exchange_interval=50, total_iterations=500,
            ga_iterations=50,
        )
        sols = [
            orchestrator.run_parallel_sa(
                inst, annealing.AnnealingParams(solvers=2), config
            ),
            orchestrator.run_parallel_ga(
                inst, genetic.GeneticParams(population_size=8), config
            ),
        ]
        for sol in sols:
            f = evaluate_fn(inst, sol.mapping)
            if f < optimum:
                return (
                    "oracle-bound",
                    False,
                    f"n={n}: heuristic F {f} below enumerated optimum {optimum}",
                )
    return ("oracle-bound", True, "heuristics never beat the enumeration oracle")


def check_reductions(seed: int) -> tuple[str, bool, str]:
    inst = generate_random_instance(7, 9, seed + 77)
    sa_params = annealing.AnnealingParams(solvers=3)
    config = orchestrator.ParallelConfig(
        workers=1, seed=seed, exchange_interval=50, total_iterations=400,
        ga_iterations=0,
    )
    par = orchestrator.run_parallel_sa(inst, sa_params, config)
    eff = sa_params.replace(total_iterations=400, exchange_interval=50)
    seq = annealing.anneal_process(
        inst, eff, orchestrator.worker_rng(seed, 0, "sa"), 400
    )
    if par.objective != seq.objective or not np.array_equal(par.mapping, seq.mapping):
        return ("reduction-identities", False, "P=1 parallel SA != anneal_process")
    ga_params = genetic.GeneticParams(population_size=7)
    comp = orchestrator.run_composite(inst, sa_params, ga_params, config)
    pops = orchestrator.composite_stage_populations(
        inst, sa_params, ga_params, config,
        [orchestrator.worker_rng(seed, 0, "composite")],
    )
    stage1 = orchestrator._global_best(pops)
    if comp.objective != stage1.objective or not np.array_equal(comp.mapping, stage1.mapping):
        return ("reduction-identities", False, "composite(ga_iterations=0) != stage-1 best")
    return ("reduction-identities", True, "P=1 and degenerate-pipeline identities hold")


def check_determinism(seed: int) -> tuple[str, bool, str]:
    inst = generate_random_instance(6, 9, seed + 6)
    config = orchestrator.ParallelConfig(
        workers=2, seed=seed, exchange_interval=50, total_iterations=300,
        ga_iterations=40,
    )
    for tag, run in (
        ("sa", lambda: orchestrator.run_parallel_sa(inst, annealing.AnnealingParams(solvers=2), config)),
        ("ga", lambda: orchestrator.run_parallel_ga(inst, genetic.GeneticParams(population_size=6), config)),
    ):
        first, second = run(), run()
        if first.objective != second.objective or not np.array_equal(first.mapping, second.mapping):
            return ("determinism", False, f"{tag}: repeated run differed")
    return ("determinism", True, "fixed seeds reproduce bit-identical results")


def run_all(seed: int = 0, evaluate_fn=None) -> list[tuple[str, bool, str]]:
    return [
        check_delta_consistency(seed),
        check_oracle_bound(seed, evaluate_fn),
        check_reductions(seed),
        check_determinism(seed),
    ]
