# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: objective evaluation, swap deltas, annealing inner loop.

Semantics match ``_purepy`` exactly; see that module for the contract.
"""

from libc.math cimport exp

ctypedef long long i64


cdef i64 _swap_delta(const i64[:, ::1] m, const i64[:, ::1] c,
                     const i64[::1] a, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k
    cdef i64 u, v, ak, d
    if i == j:
        return 0
    u = a[i]
    v = a[j]
    d = 0
    for k in range(n):
        if k == i or k == j:
            continue
        ak = a[k]
        d += (c[i, k] - c[j, k]) * (m[v, ak] - m[u, ak])
        d += (c[k, i] - c[k, j]) * (m[ak, v] - m[ak, u])
    d += (c[i, i] - c[j, j]) * (m[v, v] - m[u, u])
    d += (c[i, j] - c[j, i]) * (m[v, u] - m[u, v])
    return d


def evaluate_objective(const i64[:, ::1] distances, const i64[:, ::1] flows,
                       const i64[::1] assignment):
    cdef Py_ssize_t n = assignment.shape[0]
    cdef Py_ssize_t k, p
    cdef i64 total = 0
    cdef i64 ak
    with nogil:
        for k in range(n):
            ak = assignment[k]
            for p in range(n):
                total += flows[k, p] * distances[ak, assignment[p]]
    return total


def swap_delta(const i64[:, ::1] distances, const i64[:, ::1] flows,
               const i64[::1] assignment, Py_ssize_t i, Py_ssize_t j):
    return _swap_delta(distances, flows, assignment, i, j)


def advance_chain(const i64[:, ::1] distances, const i64[:, ::1] flows,
                  i64[::1] assignment, i64[::1] best_assignment,
                  i64[::1] best_objective, i64[::1] state,
                  double[::1] temperature, const double[:, ::1] uniforms,
                  Py_ssize_t start, Py_ssize_t count,
                  Py_ssize_t max_neighbors, Py_ssize_t max_success,
                  int schedule, double coeff, double t_final,
                  Py_ssize_t stall_limit):
    cdef Py_ssize_t n = assignment.shape[0]
    cdef Py_ssize_t it, row, i, j, k, g
    cdef i64 delta, tmp
    cdef i64 cur = state[0]
    cdef i64 examined = state[1]
    cdef i64 accepted = state[2]
    cdef i64 stall = state[3]
    cdef double t = temperature[0]
    cdef double u1, u2, u3
    cdef Py_ssize_t done = 0
    if state[4]:
        return 0
    with nogil:
        for it in range(count):
            row = start + it
            u1 = uniforms[row, 0]
            u2 = uniforms[row, 1]
            u3 = uniforms[row, 2]
            i = <Py_ssize_t>(u1 * n)
            if i >= n:
                i = n - 1
            k = <Py_ssize_t>(u2 * (n - 1))
            if k > n - 2:
                k = n - 2
            j = i + 1 + k
            if j >= n:
                j -= n
            delta = _swap_delta(distances, flows, assignment, i, j)
            examined += 1
            if delta <= 0 or u3 < exp(-(<double>delta) / t):
                tmp = assignment[i]
                assignment[i] = assignment[j]
                assignment[j] = tmp
                cur += delta
                accepted += 1
                if cur < best_objective[0]:
                    best_objective[0] = cur
                    for g in range(n):
                        best_assignment[g] = assignment[g]
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
