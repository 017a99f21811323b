"""Spectral representations of banded reversible Markov chains on the half-line.

Chains, their orthogonal-polynomial systems and spectral measures, exact
transition kernels, and the branch-resolved treatment of pentadiagonal walks.
"""

from ._backend import BACKEND
from .banded_extension import (contour_pt, det_zeros, mu_analytic_probe, mu_branches, q_with_branch,
                               s_compose_check, spectrum_det, vector_solutions)
from .chain_model import (BandedChain, BirthDeathChain, chebyshev_chain, conductance_chain,
                          pentadiagonal_chebyshev, pi_weights, symmetrize, truncate)
from .chainspec import chain_from_dict, load_chain
from .errors import KMSpecError
from .jacobi_map import (JacobiOperator, MomentSequence, jacobi_from_moments, lanczos_jacobi,
                         moments_from_operator, resolvent_G)
from .kernel import generating_function, pt_fbasis, pt_oracle, pt_spectral
from .montecarlo import McEstimate, simulate
from .orthopoly import OrthoPolySystem, coefficients_Q, evaluate_Q, monic_P, orthonormal, roots_Qn
from .rh_verify import build_mn, check_asymptotics, check_jump, gf_from_rh
from .spectral_measure import (arcsine_measure, cauchy_transform, moments, pentadiagonal_measure, psi_n,
                               stieltjes, two_sided_measure)

__version__ = "0.1.0"
