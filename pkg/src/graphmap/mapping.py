"""Mappings of program vertices onto machine vertices and their cost.

A mapping is a permutation array ``a`` with a[k] = machine vertex hosting
program vertex k.  The objective sums flows[k, p] * distances[a[k], a[p]]
over all ordered pairs, in exact integer arithmetic.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import _kernels
from .instance import Instance


@dataclasses.dataclass
class Solution:
    """A mapping together with its objective value."""

    mapping: np.ndarray
    objective: int

    def copy(self) -> "Solution":
        return Solution(self.mapping.copy(), self.objective)


def is_permutation(mapping: np.ndarray) -> bool:
    a = np.asarray(mapping)
    n = a.shape[0]
    if a.ndim != 1 or n == 0:
        return False
    if a.min() < 0 or a.max() >= n:
        return False
    return bool((np.bincount(a, minlength=n) == 1).all())


def _checked_mapping(inst: Instance, mapping) -> np.ndarray:
    a = np.ascontiguousarray(mapping, dtype=np.int64)
    if a.ndim != 1 or a.shape[0] != inst.n:
        raise ValueError(
            f"mapping length {a.shape[0] if a.ndim == 1 else a.shape} does not "
            f"match instance order {inst.n}"
        )
    if not is_permutation(a):
        raise ValueError("mapping is not a permutation")
    return a


def evaluate(inst: Instance, mapping) -> int:
    """Exact objective of a mapping."""
    a = _checked_mapping(inst, mapping)
    return int(_kernels.evaluate_objective(inst.distances, inst.flows, a))


def swap_delta(inst: Instance, mapping, i: int, j: int) -> int:
    """Objective change from swapping positions i and j, without re-evaluating.

    O(n); exact for asymmetric matrices as well.  ``mapping`` is not modified.
    """
    a = np.ascontiguousarray(mapping, dtype=np.int64)
    n = a.shape[0]
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"swap positions ({i}, {j}) out of range for order {n}")
    return int(_kernels.swap_delta(inst.distances, inst.flows, a, i, j))


def apply_swap(mapping: np.ndarray, i: int, j: int) -> np.ndarray:
    """New mapping with positions i and j exchanged."""
    n = mapping.shape[0]
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"swap positions ({i}, {j}) out of range for order {n}")
    out = mapping.copy()
    out[i], out[j] = out[j], out[i]
    return out


def random_mapping(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random permutation of 0..n-1."""
    if n < 1:
        raise ValueError(f"mapping order must be positive, got {n}")
    return rng.permutation(n).astype(np.int64)


def accuracy(objective: int, optimum: int) -> float:
    """Percent excess over a known optimum: 100 * (F - F0) / F0."""
    if optimum <= 0:
        raise ValueError(f"optimum must be positive, got {optimum}")
    return 100.0 * (objective - optimum) / optimum
