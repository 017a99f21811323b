"""Compare the compiled kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_core.py``.
"""

import timeit

import numpy as np

from kmspec import _core_py
from kmspec.chain_model import band_array, pentadiagonal_chebyshev
from kmspec.montecarlo import cumulative_rows

try:
    from kmspec import _core
except ImportError:
    _core = None


def _cases():
    chain = pentadiagonal_chebyshev()
    m, T = chain.m, 10
    cum = cumulative_rows(chain, m * T + 1)
    u = np.random.Generator(np.random.Philox(0)).random((2 ** 16, T))
    bands = np.ascontiguousarray(band_array(chain, 200))
    lams = np.linspace(-0.56, 1.0, 2000)
    return {
        "walk_counts (65536 walkers, 10 steps)": lambda mod: mod.walk_counts(cum, m, u),
        "banded_recurrence (2000 lambdas, 200 rows)": lambda mod: mod.banded_recurrence(bands, lams, m),
    }


def main(repeat: int = 5) -> None:
    for name, fn in _cases().items():
        t_py = min(timeit.repeat(lambda: fn(_core_py), number=1, repeat=repeat))
        line = f"{name:45s} python {t_py * 1e3:9.2f} ms"
        if _core is not None:
            t_cy = min(timeit.repeat(lambda: fn(_core), number=1, repeat=repeat))
            same = np.array_equal(fn(_core), fn(_core_py)) or np.allclose(fn(_core), fn(_core_py), rtol=1e-14)
            line += f"  cython {t_cy * 1e3:9.2f} ms  speedup {t_py / t_cy:6.1f}x  agree={same}"
        print(line)


if __name__ == "__main__":
    main()
