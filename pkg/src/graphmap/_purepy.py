"""Pure-Python kernels, used when the compiled extension is unavailable.

These mirror the compiled kernels in ``_core.pyx`` operation for operation:
given the same inputs (including the pre-drawn uniform variates consumed by
``advance_chain``) both backends produce bit-identical results.
"""

import math

import numpy as np


def evaluate_objective(distances, flows, assignment):
    """Total cost of ``assignment``: sum of flows[k, p] * distances[a[k], a[p]]."""
    return int((flows * distances[assignment[:, None], assignment[None, :]]).sum())


def swap_delta(distances, flows, assignment, i, j):
    """Objective change from swapping positions i and j, in O(n)."""
    if i == j:
        return 0
    m, c, a = distances, flows, assignment
    u = a[i]
    v = a[j]
    # Row/column sums over all k, then the k in {i, j} terms are replaced by
    # the exact corrections for the positions that move.
    d = int(((c[i, :] - c[j, :]) * (m[v, a] - m[u, a])).sum())
    d += int(((c[:, i] - c[:, j]) * (m[a, v] - m[a, u])).sum())
    for k in (i, j):
        ak = a[k]
        d -= int(c[i, k] - c[j, k]) * int(m[v, ak] - m[u, ak])
        d -= int(c[k, i] - c[k, j]) * int(m[ak, v] - m[ak, u])
    d += int(c[i, i] - c[j, j]) * int(m[v, v] - m[u, u])
    d += int(c[i, j] - c[j, i]) * int(m[v, u] - m[u, v])
    return d


def advance_chain(
    distances,
    flows,
    assignment,
    best_assignment,
    best_objective,
    state,
    temperature,
    uniforms,
    start,
    count,
    max_neighbors,
    max_success,
    schedule,
    coeff,
    t_final,
    stall_limit,
):
    """Advance one annealing chain by up to ``count`` proposals.

    Each proposal consumes one row (u1, u2, u3) of ``uniforms``: u1 and u2
    pick the swap, u3 decides acceptance of a worsening move.  ``state`` is
    [objective, examined, accepted, stall, stopped] and ``temperature`` a
    one-element array; both are updated in place, as are the assignment
    buffers.  Returns the number of proposals consumed.
    """
    if state[4]:
        return 0
    n = assignment.shape[0]
    cur = int(state[0])
    examined = int(state[1])
    accepted = int(state[2])
    stall = int(state[3])
    t = float(temperature[0])
    schedule = int(schedule)
    done = 0
    for it in range(count):
        row = start + it
        u1 = float(uniforms[row, 0])
        u2 = float(uniforms[row, 1])
        u3 = float(uniforms[row, 2])
        i = int(u1 * n)
        if i >= n:
            i = n - 1
        k = int(u2 * (n - 1))
        if k > n - 2:
            k = n - 2
        j = i + 1 + k
        if j >= n:
            j -= n
        delta = swap_delta(distances, flows, assignment, i, j)
        examined += 1
        if delta <= 0 or u3 < math.exp(-float(delta) / t):
            assignment[i], assignment[j] = assignment[j], assignment[i]
            cur += delta
            accepted += 1
            if cur < best_objective[0]:
                best_objective[0] = cur
                best_assignment[:] = assignment
        done += 1
        if accepted >= max_success or examined >= max_neighbors:
            if schedule == 0:
                t = coeff * t
            else:
                t = t / (1.0 + coeff * t)
            if accepted == 0:
                stall += 1
            else:
                stall = 0
            examined = 0
            accepted = 0
            if stall >= stall_limit or t <= t_final:
                state[4] = 1
                break
    state[0] = cur
    state[1] = examined
    state[2] = accepted
    state[3] = stall
    temperature[0] = t
    return done
