# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled power-iteration kernel for damped random walks with restart.

Same contract as the pure-numpy fallback: arcs carry per-source-normalized
transition probabilities, mass at nodes without outgoing arcs is re-seeded
through the restart vector, and convergence is an L1 test on consecutive
iterates.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def power_iterate(
    const cnp.int32_t[::1] arc_src,
    const cnp.int32_t[::1] arc_dst,
    const double[::1] arc_prob,
    const double[::1] v,
    double damping,
    double tol,
    int max_iter,
):
    """Return ``(scores, iterations_used, converged)``."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t m = arc_src.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s_arr = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] s = s_arr
    cdef double[::1] pushed = work_arr
    cdef double absorbed, delta, pushed_total, restart_coef, val
    cdef Py_ssize_t i, k
    cdef int it
    cdef bint converged = False
    cdef int iterations = 0

    for i in range(n):
        s[i] = v[i]

    for it in range(1, max_iter + 1):
        with nogil:
            for i in range(n):
                pushed[i] = 0.0
            pushed_total = 0.0
            for k in range(m):
                val = s[arc_src[k]] * arc_prob[k]
                pushed[arc_dst[k]] += val
                pushed_total += val
            absorbed = 1.0 - pushed_total
            restart_coef = (1.0 - damping) + damping * absorbed
            delta = 0.0
            for i in range(n):
                val = damping * pushed[i] + restart_coef * v[i]
                delta += fabs(val - s[i])
                s[i] = val
        iterations = it
        if delta < tol:
            converged = True
            break

    return s_arr, iterations, converged
