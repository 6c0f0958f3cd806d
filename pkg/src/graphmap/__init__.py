"""graphmap: map communication graphs onto machine topologies.

Assigns the processes of a parallel program to the nodes of a machine so
that heavily communicating processes land on nearby nodes.  The cost of a
mapping is the flow-weighted sum of link distances, minimised here with
parallel simulated annealing, an island-model genetic algorithm, and a
composite of the two (annealing seeds the genetic populations).

Hot kernels run in a compiled extension when available and fall back to
pure Python + numpy otherwise; both produce bit-identical results.  Set
GRAPHMAP_PURE_PYTHON=1 to force the fallback.
"""

from ._kernels import USING_COMPILED_CORE
from .annealing import (
    AnnealingParams,
    AnnealingProcess,
    acceptance_probability,
    anneal_chain,
    anneal_process,
    cauchy_beta,
    initial_temperature,
    next_temperature_cauchy,
    next_temperature_linear,
)
from .bench import (
    BenchReport,
    RunRecord,
    brute_force_optimum,
    emit_csv,
    run_experiment,
    sweep_parameter,
)
from .genetic import (
    GeneticParams,
    Population,
    best_member,
    crossover,
    ga_generation,
    init_population,
    mutate,
    replace_worst,
    select_parents,
)
from .instance import (
    Instance,
    generate_random_instance,
    known_optimum,
    load_instance,
    load_optima,
    parse_instance,
)
from .mapping import (
    Solution,
    accuracy,
    apply_swap,
    evaluate,
    is_permutation,
    random_mapping,
    swap_delta,
)
from .orchestrator import (
    ParallelConfig,
    default_annealing_params,
    default_config,
    default_genetic_params,
    run_composite,
    run_parallel_ga,
    run_parallel_sa,
    worker_rng,
)
from .synthetic import certified_mapping, known_optimum_instance

__version__ = "0.1.0"

__all__ = [
    "AnnealingParams",
    "AnnealingProcess",
    "BenchReport",
    "GeneticParams",
    "Instance",
    "ParallelConfig",
    "Population",
    "RunRecord",
    "Solution",
    "USING_COMPILED_CORE",
    "accuracy",
    "acceptance_probability",
    "anneal_chain",
    "anneal_process",
    "apply_swap",
    "best_member",
    "brute_force_optimum",
    "cauchy_beta",
    "certified_mapping",
    "crossover",
    "default_annealing_params",
    "default_config",
    "default_genetic_params",
    "emit_csv",
    "evaluate",
    "ga_generation",
    "generate_random_instance",
    "init_population",
    "initial_temperature",
    "is_permutation",
    "known_optimum",
    "known_optimum_instance",
    "load_instance",
    "load_optima",
    "mutate",
    "next_temperature_cauchy",
    "next_temperature_linear",
    "parse_instance",
    "random_mapping",
    "replace_worst",
    "run_composite",
    "run_experiment",
    "run_parallel_ga",
    "run_parallel_sa",
    "select_parents",
    "swap_delta",
    "sweep_parameter",
    "worker_rng",
    "__version__",
]
