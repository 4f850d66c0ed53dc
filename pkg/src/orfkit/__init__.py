"""Random Fourier and orthogonal random features for Gaussian/Bessel kernels.

The library half evaluates every closed-form moment and bound of the two
estimators (means, variances, sandwich bounds, dominance intervals) on top of
a self-contained normalized-Bessel engine; the harness half verifies them
against Monte-Carlo and quadrature oracles and benchmarks Gram-matrix quality
on datasets.  See the ``orfkit`` CLI for the report-producing entry points.
"""

from ._version import __version__
from .analytics import (
    BoundConstants,
    ClosedFormSummary,
    bias_bounds,
    bound_constants,
    closed_form_summary,
    orf_bias,
    orf_bias_grid,
    orf_variance,
    orf_variance_grid,
    rff_bias,
    rff_variance,
    variance_bounds,
    variance_dominance_interval,
)
from .errors import DatasetError, InvalidArgumentError, NumericalFailureError
from .features import GramMatrix, approx_kernel, feature_map, gram_matrix, gram_matrix_pairwise
from .harness import (
    CovarianceEstimate,
    Dataset,
    MomentEstimate,
    bandwidth_heuristic,
    empirical_moments,
    jackknife_variance_stderr,
    kernel_replicates,
    load_dataset,
    mc_covariance,
    mse_experiment,
    normal_pair_at_distance,
    synthetic_dataset,
    true_kernel_matrix,
)
from .report import ExperimentReport, emit_report
from .sampling import (
    GAUSSIAN,
    HAAR,
    RNG_KIND,
    WeightMatrix,
    gaussian_matrix,
    haar_orthogonal,
    orf_weight_matrix,
    rff_weight_matrix,
    subseed,
)
from .specfun import (
    ZeroTable,
    bessel_order,
    first_zero,
    first_zero_lower_bounds,
    normalized_bessel,
    normalized_bessel_grid,
    normalized_bessel_quadrature,
    normalized_bessel_series,
    rayleigh_partial,
    weierstrass_partial,
    zeros,
)

__all__ = [
    "__version__",
    "BoundConstants",
    "ClosedFormSummary",
    "CovarianceEstimate",
    "Dataset",
    "DatasetError",
    "ExperimentReport",
    "GAUSSIAN",
    "GramMatrix",
    "HAAR",
    "InvalidArgumentError",
    "MomentEstimate",
    "NumericalFailureError",
    "RNG_KIND",
    "WeightMatrix",
    "ZeroTable",
    "approx_kernel",
    "bandwidth_heuristic",
    "bessel_order",
    "bias_bounds",
    "bound_constants",
    "closed_form_summary",
    "emit_report",
    "empirical_moments",
    "feature_map",
    "first_zero",
    "first_zero_lower_bounds",
    "gaussian_matrix",
    "gram_matrix",
    "gram_matrix_pairwise",
    "haar_orthogonal",
    "jackknife_variance_stderr",
    "kernel_replicates",
    "load_dataset",
    "mc_covariance",
    "mse_experiment",
    "normal_pair_at_distance",
    "normalized_bessel",
    "normalized_bessel_grid",
    "normalized_bessel_quadrature",
    "normalized_bessel_series",
    "orf_bias",
    "orf_bias_grid",
    "orf_variance",
    "orf_variance_grid",
    "orf_weight_matrix",
    "rayleigh_partial",
    "rff_bias",
    "rff_variance",
    "rff_weight_matrix",
    "subseed",
    "synthetic_dataset",
    "true_kernel_matrix",
    "variance_bounds",
    "variance_dominance_interval",
    "weierstrass_partial",
    "zeros",
]
