"""Pure-numpy implementations of the compiled kernels in ``_core.pyx``.

Both versions perform the same floating-point operations in the same order,
so results agree bit for bit.
"""

import numpy as np


def banded_recurrence(bands, lams, m):
    """Forward-solve ``lam q = P q`` for the ``m`` unit-start solutions.

    ``bands`` holds rows ``0 .. n-1`` of ``P`` in offset form; the result has
    shape ``(len(lams), n + m, m)`` with ``out[:, r, j] = Q_{r, j}``.
    """
    bands = np.asarray(bands, dtype=np.float64)
    lams = np.asarray(lams, dtype=np.float64)
    n = bands.shape[0]
    out = np.zeros((lams.shape[0], n + m, m))
    for j in range(m):
        out[:, j, j] = 1.0
    for k in range(n):
        acc = lams[:, None] * out[:, k, :]
        for d in range(-m, m):
            if k + d >= 0:
                acc = acc - bands[k, d + m] * out[:, k + d, :]
        out[:, k + m, :] = acc / bands[k, 2 * m]
    return out


def walk_counts(cum, m, uniforms):
    """Occupation counts of walkers started at 0.

    ``cum[s]`` is the cumulative row of state ``s`` in offset form and
    ``uniforms`` has shape ``(trials, T)``.  Returns ``(T + 1, n_states)`` counts.
    """
    cum = np.asarray(cum, dtype=np.float64)
    trials, T = uniforms.shape
    n_states = cum.shape[0]
    counts = np.zeros((T + 1, n_states), dtype=np.int64)
    state = np.zeros(trials, dtype=np.int64)
    counts[0, 0] = trials
    for t in range(T):
        u = uniforms[:, t]
        step = np.sum(u[:, None] >= cum[state], axis=1)
        state = state + step - m
        counts[t + 1] = np.bincount(state, minlength=n_states)
    return counts
