# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; ``_core_py`` is the reference implementation."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def banded_recurrence(double[:, ::1] bands, double[::1] lams, int m):
    cdef Py_ssize_t n = bands.shape[0]
    cdef Py_ssize_t L = lams.shape[0]
    out_arr = np.zeros((L, n + m, m), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, d
    cdef double acc, lam
    with nogil:
        for i in range(L):
            lam = lams[i]
            for j in range(m):
                out[i, j, j] = 1.0
            for k in range(n):
                for j in range(m):
                    acc = lam * out[i, k, j]
                    for d in range(-m, m):
                        if k + d >= 0:
                            acc = acc - bands[k, d + m] * out[i, k + d, j]
                    out[i, k + m, j] = acc / bands[k, 2 * m]
    return out_arr


def walk_counts(double[:, ::1] cum, int m, double[:, ::1] uniforms):
    cdef Py_ssize_t trials = uniforms.shape[0]
    cdef Py_ssize_t T = uniforms.shape[1]
    cdef Py_ssize_t n_states = cum.shape[0]
    cdef Py_ssize_t width = cum.shape[1]
    counts_arr = np.zeros((T + 1, n_states), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] counts = counts_arr
    cdef Py_ssize_t w, t, c, state
    cdef double u
    counts[0, 0] = trials
    with nogil:
        for w in range(trials):
            state = 0
            for t in range(T):
                u = uniforms[w, t]
                c = 0
                while c < width and u >= cum[state, c]:
                    c += 1
                state = state + c - m
                counts[t + 1, state] += 1
    return counts_arr
