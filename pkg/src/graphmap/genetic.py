"""Genetic operators over permutation individuals, plus the generation step.

Populations evolve steady-state: each generation breeds a few children via
tournament selection, partially-mapped crossover, and swap mutation, then
lets them displace the worst members.  A candidate whose mapping is already
in the population is discarded, so duplicates never accumulate and sending a
population its own best back is a no-op.
"""

from __future__ import annotations

import dataclasses
from collections import Counter

import numpy as np

from . import _kernels
from .instance import Instance
from .mapping import Solution, random_mapping


@dataclasses.dataclass
class GeneticParams:
    population_size: int
    crossover_prob: float = 1.0
    mutation_prob: float = 0.001
    offspring_per_iteration: int = 2
    migrants: int = 1
    iterations: int = 5_000

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError(
                f"population_size must be >= 2, got {self.population_size}"
            )
        for label, p in (
            ("crossover_prob", self.crossover_prob),
            ("mutation_prob", self.mutation_prob),
        ):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{label} must be in [0, 1], got {p}")
        if self.migrants < 0:
            raise ValueError(f"migrants must be >= 0, got {self.migrants}")
        if self.offspring_per_iteration < 1:
            raise ValueError(
                f"offspring_per_iteration must be >= 1, got "
                f"{self.offspring_per_iteration}"
            )
        if self.iterations < 0:
            raise ValueError(f"iterations must be >= 0, got {self.iterations}")

    def replace(self, **changes) -> "GeneticParams":
        return dataclasses.replace(self, **changes)


class Population:
    """A list of Solutions with constant size and fast duplicate lookup."""

    def __init__(self, members: list[Solution]) -> None:
        if not members:
            raise ValueError("population must not be empty")
        self.members = list(members)
        self._counts = Counter(m.mapping.tobytes() for m in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def contains_mapping(self, mapping: np.ndarray) -> bool:
        return self._counts.get(mapping.tobytes(), 0) > 0

    def replace_member(self, index: int, solution: Solution) -> None:
        old_key = self.members[index].mapping.tobytes()
        self._counts[old_key] -= 1
        if not self._counts[old_key]:
            del self._counts[old_key]
        self._counts[solution.mapping.tobytes()] += 1
        self.members[index] = solution


def _rand_index(rng: np.random.Generator, n: int) -> int:
    """Uniform index in 0..n-1 from a single uniform variate."""
    i = int(rng.random() * n)
    return n - 1 if i >= n else i


def _rand_index_excluding(rng: np.random.Generator, n: int, excluded: tuple[int, ...]) -> int:
    """Uniform index in 0..n-1 avoiding ``excluded`` (sorted ascending)."""
    k = _rand_index(rng, n - len(excluded))
    for e in excluded:
        if k >= e:
            k += 1
    return k


def init_population(inst: Instance, size: int, rng: np.random.Generator) -> Population:
    """``size`` independent uniformly random mappings, each evaluated."""
    if size < 2:
        raise ValueError(f"population size must be >= 2, got {size}")
    members = []
    for _ in range(size):
        m = random_mapping(inst.n, rng)
        f = int(_kernels.evaluate_objective(inst.distances, inst.flows, m))
        members.append(Solution(m, f))
    return Population(members)


def _tournament(members: list[Solution], rng: np.random.Generator, excluded: tuple[int, ...] = ()) -> int:
    """Binary tournament over member indices; lower objective wins, then lower index."""
    size = len(members)
    pool = size - len(excluded)
    c1 = _rand_index_excluding(rng, size, excluded)
    if pool >= 2:
        c2 = _rand_index_excluding(rng, size, tuple(sorted((*excluded, c1))))
        if (members[c2].objective, c2) < (members[c1].objective, c1):
            return c2
    return c1


def select_parents(population: Population, rng: np.random.Generator) -> tuple[Solution, Solution]:
    """Two distinct members chosen by binary tournament on objective."""
    if len(population) < 2:
        raise ValueError("selection needs a population of at least 2")
    a = _tournament(population.members, rng)
    b = _tournament(population.members, rng, excluded=(a,))
    return population.members[a], population.members[b]


def crossover(parent_a: np.ndarray, parent_b: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Partially-mapped crossover: one child per call.

    A random segment is copied from parent_a; the remaining positions take
    parent_b's genes, remapped along the segment's value correspondence so
    the child stays a permutation.  Identical parents reproduce themselves.
    """
    a = np.ascontiguousarray(parent_a, dtype=np.int64)
    b = np.ascontiguousarray(parent_b, dtype=np.int64)
    if a.shape != b.shape:
        raise ValueError(f"parent lengths differ: {a.shape[0]} vs {b.shape[0]}")
    n = a.shape[0]
    if n == 1:
        return a.copy()
    c1 = _rand_index(rng, n)
    c2 = _rand_index_excluding(rng, n, (c1,))
    lo, hi = min(c1, c2), max(c1, c2)
    child = np.empty(n, dtype=np.int64)
    child[lo : hi + 1] = a[lo : hi + 1]
    pos_in_a = np.empty(n, dtype=np.int64)
    pos_in_a[a] = np.arange(n)
    in_segment = np.zeros(n, dtype=bool)
    in_segment[a[lo : hi + 1]] = True
    for pos in (*range(lo), *range(hi + 1, n)):
        g = b[pos]
        while in_segment[g]:
            g = b[pos_in_a[g]]
        child[pos] = g
    return child


def mutate(mapping: np.ndarray, per_gene_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Swap each gene, with probability per_gene_prob, with a uniform other gene."""
    if not 0.0 <= per_gene_prob <= 1.0:
        raise ValueError(f"per_gene_prob must be in [0, 1], got {per_gene_prob}")
    m = mapping.copy()
    n = m.shape[0]
    triggers = rng.random(n)
    if n < 2:
        return m
    for i in np.nonzero(triggers < per_gene_prob)[0]:
        k = _rand_index(rng, n - 1)
        j = k if k < i else k + 1
        m[i], m[j] = m[j], m[i]
    return m


def _worst_index(population: Population) -> int:
    worst = 0
    worst_f = population.members[0].objective
    for idx, member in enumerate(population.members):
        if member.objective > worst_f:
            worst = idx
            worst_f = member.objective
    return worst


def replace_worst(population: Population, candidates: list[Solution]) -> Population:
    """Let each candidate displace the current worst member if strictly better.

    Candidates duplicating a mapping already present are skipped, which keeps
    replacement improve-only in the member-set sense as well.
    """
    if not candidates:
        raise ValueError("no candidates given")
    for cand in candidates:
        if population.contains_mapping(cand.mapping):
            continue
        w = _worst_index(population)
        if cand.objective < population.members[w].objective:
            population.replace_member(w, cand)
    return population


def best_member(population: Population) -> Solution:
    """Member with minimal objective; ties broken by lowest index."""
    if not len(population):
        raise ValueError("empty population")
    best = population.members[0]
    for member in population.members[1:]:
        if member.objective < best.objective:
            best = member
    return best


def ga_generation(
    inst: Instance,
    population: Population,
    params: GeneticParams,
    rng: np.random.Generator,
) -> Population:
    """One steady-state generation: breed offspring, then replace the worst."""
    children = []
    for _ in range(params.offspring_per_iteration):
        pa, pb = select_parents(population, rng)
        if rng.random() < params.crossover_prob:
            child = crossover(pa.mapping, pb.mapping, rng)
        else:
            child = (pa if pa.objective <= pb.objective else pb).mapping.copy()
        child = mutate(child, params.mutation_prob, rng)
        f = int(_kernels.evaluate_objective(inst.distances, inst.flows, child))
        children.append(Solution(child, f))
    return replace_worst(population, children)
