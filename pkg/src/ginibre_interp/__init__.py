"""Eigenvalue statistics of the real random matrices interpolating between
real Ginibre (i.i.d. Gaussian) and GOE (real symmetric) matrices.

The modules cover skew-orthogonal polynomials, exact probabilities of ``k``
real eigenvalues, finite-N correlation kernels, their large-N limits, and a
Monte Carlo sampler to check them against.
"""

__version__ = "0.1.0"

from .errors import AccuracyError, DomainError, GinibreError, NumericError, PrecisionError
from .specfun import DEFAULT_SPEC, QuadratureSpec
from .hermite import HermiteContext, c_poly, hermite_h, normalized_sequence
from .skewop import SkewOPFamily, inner_skew, r_norm, r_poly, skew_gram
from .pfaff import ScaledValue, det_poly_in_zeta, det_scaled, pfaffian
from .exactprob import (
    PknTable,
    mean_real_count_asymptotic,
    mean_real_count_closed,
    mean_real_count_exact,
    p_all_real,
    pkn_table,
)
from .kernels import KernelContext, d_r, i_tilde_r, rho_c, rho_r, rho_r1_profile, s_c, s_c_hat, s_r
from .asymptotics import (
    EdgeFrame,
    bulk_real_density,
    bulk_sc_limit,
    bulk_sr_limit,
    edge_real_density,
    support_ellipse,
    weak_sc,
    weak_sr,
)
from .sampler import EnsembleParams, eigen_spectrum, empirical_density, empirical_pkn, sample_matrix
