"""Synthetic benchmark instances with certified optima.

The machine graph is a 3-D grid with Manhattan distances.  Flows are drawn
at random and then paired anti-monotonically with the distances seen under a
hidden random mapping: the largest flows land on the closest machine pairs.
By the rearrangement inequality no bijection can pair the two value multisets
more cheaply, so the hidden mapping's objective is a certified global
optimum.  That gives desk-scale stand-ins, at the benchmark sizes the named
tai instances use, whose F0 is known by construction rather than by
literature.
"""

from __future__ import annotations

import numpy as np

from .instance import Instance

GRID_SHAPES: dict[int, tuple[int, int, int]] = {
    27: (3, 3, 3),
    45: (3, 3, 5),
    75: (3, 5, 5),
    125: (5, 5, 5),
    175: (5, 5, 7),
    343: (7, 7, 7),
    729: (9, 9, 9),
}


def grid_distances(dims: tuple[int, ...]) -> np.ndarray:
    """Manhattan distances between all cells of a dims-shaped grid."""
    axes = [np.arange(d) for d in dims]
    coords = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(dims))
    return np.abs(coords[:, None, :] - coords[None, :, :]).sum(axis=-1).astype(np.int64)


def _build(n: int, seed: int | None, flow_max: int, name: str | None):
    if n not in GRID_SHAPES:
        raise ValueError(
            f"no grid shape of order {n}; available: {sorted(GRID_SHAPES)}"
        )
    if seed is None:
        seed = 1000 + n
    rng = np.random.default_rng(seed)
    distances = grid_distances(GRID_SHAPES[n])
    hidden = rng.permutation(n).astype(np.int64)
    rows, cols = np.triu_indices(n, k=1)
    pair_distance = distances[hidden[rows], hidden[cols]]
    flow_values = np.sort(rng.integers(0, flow_max + 1, size=rows.shape[0]))[::-1]
    order = np.argsort(pair_distance, kind="stable")
    flows = np.zeros((n, n), dtype=np.int64)
    flows[rows[order], cols[order]] = flow_values
    flows += flows.T
    optimum = 2 * int((flow_values * pair_distance[order]).sum())
    inst = Instance(name or f"grid{n}", distances, flows, known_optimum=optimum)
    return inst, hidden


def known_optimum_instance(
    n: int, seed: int | None = None, flow_max: int = 99, name: str | None = None
) -> Instance:
    """Grid instance of order n with a construction-certified optimum."""
    return _build(n, seed, flow_max, name)[0]


def certified_mapping(n: int, seed: int | None = None, flow_max: int = 99) -> np.ndarray:
    """The hidden mapping that attains known_optimum_instance's optimum."""
    return _build(n, seed, flow_max, None)[1]
