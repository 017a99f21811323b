"""Monte Carlo estimates of ``p_t(0, j)`` for validating the exact kernels.

Trials are split into fixed-size blocks.  Block ``k`` draws its uniforms from
``Philox`` seeded with the ``k``-th child of ``SeedSequence(seed)``, and block
counts are summed in block order, so the output depends only on
``(seed, trials, block)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .chain_model import BandedChain, band_array

ALGORITHM = "numpy.random.Philox(4x64-10); SeedSequence(seed).spawn per block; inverse-CDF step"
DEFAULT_BLOCK = 2 ** 16


@dataclass(frozen=True)
class McEstimate:
    j: int
    t: int
    estimate: float
    stderr: float
    trials: int

    def within(self, reference: float, k: float = 4.0) -> bool:
        """``|estimate - reference| <= k * stderr``."""
        return abs(self.estimate - reference) <= k * self.stderr


def cumulative_rows(chain: BandedChain, n_states: int) -> np.ndarray:
    """Cumulative offset-form rows; the last column is pushed above 1 so every uniform lands."""
    cum = np.cumsum(band_array(chain, n_states), axis=1)
    cum[:, -1] = 2.0
    return np.ascontiguousarray(cum)


def simulate_counts(chain: BandedChain, t_max: int, trials: int, seed: int,
                    block: int = DEFAULT_BLOCK) -> np.ndarray:
    """Occupation counts ``(t_max + 1, m t_max + 1)`` of ``trials`` walkers started at 0."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    n_states = chain.m * t_max + 1
    cum = cumulative_rows(chain, n_states)
    n_blocks = -(-trials // block)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    total = np.zeros((t_max + 1, n_states), dtype=np.int64)
    for k, child in enumerate(children):
        size = min(block, trials - k * block)
        rng = np.random.Generator(np.random.Philox(child))
        u = rng.random((size, t_max))
        total += _backend.walk_counts(cum, chain.m, u)
    return total


def estimates_from_counts(counts: np.ndarray, t: int, trials: int) -> list[McEstimate]:
    out = []
    for j, c in enumerate(counts[t]):
        p = float(c) / trials
        out.append(McEstimate(j, t, p, float(np.sqrt(p * (1.0 - p) / trials)), trials))
    return out


def simulate(chain: BandedChain, t: int, trials: int, seed: int,
             block: int = DEFAULT_BLOCK) -> list[McEstimate]:
    """Empirical distribution at time ``t`` of the walk from state 0, one entry per state."""
    counts = simulate_counts(chain, t, trials, seed, block)
    return estimates_from_counts(counts, t, trials)
