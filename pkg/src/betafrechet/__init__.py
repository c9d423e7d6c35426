"""Beta Frechet distribution.

Exact evaluation, series expansions, moments and L-moments, order
statistics, likelihood inference and the fibre-strength data examples.
The numerical kernels run compiled when the extension is built and fall
back to pure Python otherwise; ``BACKEND`` names the one in use.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .datasets import Dataset, builtin_dataset, read_data, write_data
from .distribution import (BFParams, BFSampler, FrechetParams, bf_cdf, bf_hazard, bf_logpdf,
                           bf_pdf, bf_quantile, bf_sample, bf_sf, frechet_cdf, frechet_logpdf,
                           frechet_pdf, inverse_gamma_params, submodel_of)
from .errors import (BetaFrechetError, ConvergenceError, DataError, DivergenceError,
                     DomainError, HazardOverflowError, MomentExistenceError,
                     SingularMatrixError, UnknownDatasetError)
from .inference import (FitResult, InfoMatrix, LRTest, TSpec, confidence_intervals, fit,
                        info_matrix_analytic, info_matrix_numeric, loglik, lr_test, score,
                        t_integral)
from .moments import (MomentRequest, bf_skewness, bf_skewness_kurtosis, frechet_cumulant_summary,
                      l_moment_ratios, l_moments, order_stat_moment, raw_moment)
from .series import (OrderStatCoeffs, SeriesOptions, cdf_series, mixture_pdf, mixture_weights,
                     order_stat_cdf_exact, order_stat_coeffs, order_stat_pdf_exact,
                     order_stat_pdf_expansion)

__all__ = [
    "BACKEND",
    "BFParams", "FrechetParams", "BFSampler",
    "bf_pdf", "bf_logpdf", "bf_cdf", "bf_sf", "bf_hazard", "bf_quantile", "bf_sample",
    "frechet_cdf", "frechet_pdf", "frechet_logpdf", "submodel_of", "inverse_gamma_params",
    "SeriesOptions", "cdf_series", "mixture_weights", "mixture_pdf",
    "order_stat_pdf_exact", "order_stat_cdf_exact", "order_stat_coeffs", "OrderStatCoeffs",
    "order_stat_pdf_expansion",
    "MomentRequest", "raw_moment", "frechet_cumulant_summary", "bf_skewness",
    "bf_skewness_kurtosis", "order_stat_moment", "l_moments", "l_moment_ratios",
    "loglik", "score", "TSpec", "t_integral", "InfoMatrix", "info_matrix_analytic",
    "info_matrix_numeric", "FitResult", "fit", "confidence_intervals", "LRTest", "lr_test",
    "Dataset", "builtin_dataset", "read_data", "write_data",
    "BetaFrechetError", "DomainError", "DataError", "ConvergenceError", "DivergenceError",
    "MomentExistenceError", "HazardOverflowError", "SingularMatrixError",
    "UnknownDatasetError",
]
