"""Simulated annealing on mappings: acceptor, cooling schedules, chains.

A *chain* is one annealing trajectory.  A *process* owns several chains
("solvers") that share a current candidate and a best-so-far solution; the
orchestrator advances processes in segments of ``exchange_interval``
proposals and broadcasts the best solution between segments.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import _kernels
from .instance import Instance
from .mapping import Solution, random_mapping

# Stop a chain after this many consecutive temperature levels without a
# single accepted move.
STALL_LEVEL_LIMIT = 50

DEFAULT_T_FINAL = 0.1

_SCHEDULES = ("linear", "cauchy")


@dataclasses.dataclass
class AnnealingParams:
    """Tunables of one annealing process.

    ``total_iterations`` is the move-evaluation budget M of a worker and
    ``exchange_interval`` the number of consecutive proposals between
    best-solution exchanges; ``solvers`` chains share each worker's budget.
    """

    max_neighbors: int = 50
    max_success: int | None = None  # default: max(1, max_neighbors // 10)
    schedule: str = "cauchy"
    linear_q: float = 0.95
    t_final: float = DEFAULT_T_FINAL
    init_mu: float = 0.3
    init_phi: float = 0.3
    total_iterations: int = 50_000
    exchange_interval: int = 100
    solvers: int = 1

    def __post_init__(self) -> None:
        if self.max_success is None:
            self.max_success = max(1, self.max_neighbors // 10)
        if self.max_neighbors < 1:
            raise ValueError(f"max_neighbors must be >= 1, got {self.max_neighbors}")
        if not 1 <= self.max_success <= self.max_neighbors:
            raise ValueError(
                f"max_success must be in 1..max_neighbors, got {self.max_success}"
            )
        if self.schedule not in _SCHEDULES:
            raise ValueError(
                f"schedule must be one of {_SCHEDULES}, got {self.schedule!r}"
            )
        if not 0.0 < self.linear_q < 1.0:
            raise ValueError(f"linear_q must be in (0, 1), got {self.linear_q}")
        if self.t_final <= 0.0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if self.init_mu <= 0.0:
            raise ValueError(f"init_mu must be positive, got {self.init_mu}")
        if not 0.0 < self.init_phi < 1.0:
            raise ValueError(f"init_phi must be in (0, 1), got {self.init_phi}")
        if self.exchange_interval < 1:
            raise ValueError(
                f"exchange_interval must be >= 1, got {self.exchange_interval}"
            )
        if self.total_iterations < self.exchange_interval:
            raise ValueError(
                "total_iterations must be >= exchange_interval, got "
                f"{self.total_iterations} < {self.exchange_interval}"
            )
        if self.solvers < 1:
            raise ValueError(f"solvers must be >= 1, got {self.solvers}")

    def replace(self, **changes) -> "AnnealingParams":
        return dataclasses.replace(self, **changes)


def initial_temperature(
    cost: int | float, mu: float, phi: float, t_final: float = DEFAULT_T_FINAL
) -> float:
    """Starting temperature mu * cost / (-ln phi); t_final for zero-cost starts."""
    if not 0.0 < phi < 1.0:
        raise ValueError(f"phi must be in (0, 1), got {phi}")
    if mu <= 0.0:
        raise ValueError(f"mu must be positive, got {mu}")
    if cost < 0:
        raise ValueError(f"cost must be non-negative, got {cost}")
    if cost == 0:
        return t_final
    return mu * cost / (-math.log(phi))


def next_temperature_linear(t: float, q: float) -> float:
    """Geometric cooling step t -> q * t."""
    if t <= 0.0:
        raise ValueError(f"temperature must be positive, got {t}")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must be in (0, 1), got {q}")
    return q * t


def cauchy_beta(
    t_init: float, t_final: float, total_iterations: int, per_level: int
) -> float:
    """Coefficient for the Cauchy schedule.

    beta = (t_init - t_final) / (levels * t_init * t_final) with
    levels = total_iterations / per_level; iterating the schedule once per
    level lands exactly on t_final when the budget runs out.
    """
    if not t_init > t_final > 0.0:
        raise ValueError(
            f"need t_init > t_final > 0, got t_init={t_init}, t_final={t_final}"
        )
    if not total_iterations >= per_level >= 1:
        raise ValueError(
            "need total_iterations >= per_level >= 1, got "
            f"{total_iterations}, {per_level}"
        )
    levels = total_iterations / per_level
    return (t_init - t_final) / (levels * t_init * t_final)


def next_temperature_cauchy(t: float, beta: float) -> float:
    """Cauchy cooling step t -> t / (1 + beta * t)."""
    if t <= 0.0:
        raise ValueError(f"temperature must be positive, got {t}")
    if beta < 0.0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    return t / (1.0 + beta * t)


def acceptance_probability(delta: int | float, t: float) -> float:
    """Metropolis acceptor: 1 for improving and tie moves, exp(-delta/t) else."""
    if t <= 0.0:
        raise ValueError(f"temperature must be positive, got {t}")
    if delta <= 0:
        return 1.0
    return math.exp(-float(delta) / t)


def _segments(budget: int, interval: int) -> list[int]:
    """Split a proposal budget into exchange segments (last may be partial)."""
    full, rem = divmod(budget, interval)
    return [interval] * full + ([rem] if rem else [])


def _shares(total: int, parts: int) -> list[int]:
    """Split ``total`` across ``parts`` as evenly as possible, front-loaded."""
    base, extra = divmod(total, parts)
    return [base + (1 if s < extra else 0) for s in range(parts)]


class _Chain:
    """One annealing trajectory with pre-drawn randomness for its lifetime."""

    def __init__(
        self,
        inst: Instance,
        params: AnnealingParams,
        start_mapping: np.ndarray,
        start_objective: int,
        rng: np.random.Generator,
        lifetime: int,
    ) -> None:
        self.inst = inst
        self.params = params
        self.assignment = np.ascontiguousarray(start_mapping, dtype=np.int64).copy()
        # [objective, examined, accepted, stall, stopped]
        self.state = np.array([start_objective, 0, 0, 0, 0], dtype=np.int64)
        t0 = initial_temperature(
            start_objective, params.init_mu, params.init_phi, params.t_final
        )
        self.temperature = np.array([t0], dtype=np.float64)
        if t0 <= params.t_final:
            self.state[4] = 1  # born frozen; nothing to anneal
        if params.schedule == "linear":
            self.schedule_code = 0
            self.coeff = params.linear_q
        else:
            self.schedule_code = 1
            if self.state[4]:
                self.coeff = 0.0
            else:
                self.coeff = cauchy_beta(
                    t0,
                    params.t_final,
                    max(lifetime, params.max_neighbors),
                    params.max_neighbors,
                )
        # Three uniforms per proposal: swap position, swap partner, acceptance.
        self.uniforms = rng.random((lifetime, 3))
        self.cursor = 0

    def advance(self, count: int, best_assignment: np.ndarray, best_objective: np.ndarray) -> None:
        if count == 0:
            return
        if self.cursor + count > self.uniforms.shape[0]:
            raise ValueError("chain advanced past its planned lifetime")
        _kernels.advance_chain(
            self.inst.distances,
            self.inst.flows,
            self.assignment,
            best_assignment,
            best_objective,
            self.state,
            self.temperature,
            self.uniforms,
            self.cursor,
            count,
            self.params.max_neighbors,
            self.params.max_success,
            self.schedule_code,
            self.coeff,
            self.params.t_final,
            STALL_LEVEL_LIMIT,
        )
        self.cursor += count

    def adopt(self, assignment: np.ndarray, objective: int) -> None:
        self.assignment[:] = assignment
        self.state[0] = objective


class AnnealingProcess:
    """A worker: ``solvers`` chains improving one shared candidate.

    All chains start from the worker's random initial mapping; the shared
    best-so-far buffers are updated by whichever chain improves them.
    """

    def __init__(
        self,
        inst: Instance,
        params: AnnealingParams,
        rng: np.random.Generator,
        budget: int,
        interval: int | None = None,
    ) -> None:
        if budget < 0:
            raise ValueError(f"budget must be non-negative, got {budget}")
        self.inst = inst
        self.params = params
        # Chain lifetimes follow the segmentation the caller will drive, so
        # the pre-drawn randomness covers exactly the planned proposals.
        self.interval = params.exchange_interval if interval is None else interval
        start = random_mapping(inst.n, rng)
        start_f = int(_kernels.evaluate_objective(inst.distances, inst.flows, start))
        self.best_assignment = start.copy()
        self.best_objective = np.array([start_f], dtype=np.int64)
        lifetimes = [0] * params.solvers
        for seg in _segments(budget, self.interval):
            for s, share in enumerate(_shares(seg, params.solvers)):
                lifetimes[s] += share
        chain_rngs = rng.spawn(params.solvers)
        self.chains = [
            _Chain(inst, params, start, start_f, chain_rngs[s], lifetimes[s])
            for s in range(params.solvers)
        ]

    def advance_segment(self, seg: int) -> None:
        for chain, share in zip(self.chains, _shares(seg, self.params.solvers)):
            chain.advance(share, self.best_assignment, self.best_objective)

    def adopt(self, assignment: np.ndarray, objective: int) -> None:
        """Make ``assignment`` every chain's current candidate."""
        if objective < self.best_objective[0]:
            self.best_objective[0] = objective
            self.best_assignment[:] = assignment
        for chain in self.chains:
            chain.adopt(assignment, objective)

    def best_solution(self) -> Solution:
        return Solution(self.best_assignment.copy(), int(self.best_objective[0]))


def anneal_chain(
    inst: Instance,
    params: AnnealingParams,
    start: Solution,
    rng: np.random.Generator,
    budget: int,
) -> Solution:
    """Run one chain from ``start`` for ``budget`` proposals; best seen wins."""
    if budget < 0:
        raise ValueError(f"budget must be non-negative, got {budget}")
    if start.mapping.shape[0] != inst.n:
        raise ValueError(
            f"start mapping length {start.mapping.shape[0]} does not match "
            f"instance order {inst.n}"
        )
    chain = _Chain(inst, params, start.mapping, start.objective, rng, budget)
    best_assignment = start.mapping.astype(np.int64).copy()
    best_objective = np.array([start.objective], dtype=np.int64)
    chain.advance(budget, best_assignment, best_objective)
    return Solution(best_assignment, int(best_objective[0]))


def anneal_process(
    inst: Instance,
    params: AnnealingParams,
    rng: np.random.Generator,
    budget: int,
) -> Solution:
    """Run one worker for ``budget`` proposals.

    The worker re-adopts its own best solution at every exchange boundary,
    exactly as it would in a parallel run where it happens to hold the
    global best.
    """
    proc = AnnealingProcess(inst, params, rng, budget)
    for seg in _segments(budget, params.exchange_interval):
        proc.advance_segment(seg)
        proc.adopt(proc.best_assignment.copy(), int(proc.best_objective[0]))
    return proc.best_solution()
