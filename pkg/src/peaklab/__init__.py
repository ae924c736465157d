"""Exact and asymptotic peak statistics of permutation conjugacy classes."""

from .asymptotics import (
    NECKLACE_RATIO_CONSTANT,
    AsymptoticParams,
    PredictionBreakdown,
    binomial_correction,
    fixed_point_correction_expansion,
    gaussian_approximant,
    limit_variance,
    mgf_quadratic_coefficient,
    necklace_ratio,
    predicted_mgf,
    prediction_residual,
    range_split_threshold,
    range_sum,
    substitution_point,
)
from .combinatorics import (
    CycleType,
    class_size,
    moebius,
    partitions_of,
    stirling2,
    stirling2_row,
)
from .errors import (
    CycleTypeParseError,
    InternalConsistencyError,
    PeaklabError,
    PrecisionError,
    SizeLimitError,
)
from .peaks import (
    PeakDistribution,
    Permutation,
    brute_force_all_classes,
    brute_force_peak_distribution,
    class_mgf,
    class_peak_distribution,
    count_descents,
    count_peaks,
    eulerian_derivative_at_one,
    eulerian_polynomial,
    necklace_count,
    necklace_poly,
    peak_moments,
    peak_polynomial,
    series_coeff_at,
    series_coeff_poly,
)
from .polynomial import DensePolynomial, TruncatedSeries, compose_series
from .sampling import (
    GENERATOR_ID,
    SampleStats,
    SeedSpec,
    chi_square_uniformity,
    element_histogram,
    ks_distance,
    run_experiment,
    sample_class,
)
from .verify import CHECKS, SUITES, CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "AsymptoticParams",
    "CHECKS",
    "CheckResult",
    "CycleType",
    "CycleTypeParseError",
    "DensePolynomial",
    "GENERATOR_ID",
    "InternalConsistencyError",
    "NECKLACE_RATIO_CONSTANT",
    "PeakDistribution",
    "PeaklabError",
    "Permutation",
    "PrecisionError",
    "PredictionBreakdown",
    "SUITES",
    "SampleStats",
    "SeedSpec",
    "SizeLimitError",
    "TruncatedSeries",
    "binomial_correction",
    "brute_force_all_classes",
    "brute_force_peak_distribution",
    "chi_square_uniformity",
    "class_mgf",
    "class_peak_distribution",
    "class_size",
    "compose_series",
    "count_descents",
    "count_peaks",
    "element_histogram",
    "eulerian_derivative_at_one",
    "eulerian_polynomial",
    "fixed_point_correction_expansion",
    "gaussian_approximant",
    "ks_distance",
    "limit_variance",
    "mgf_quadratic_coefficient",
    "moebius",
    "necklace_count",
    "necklace_poly",
    "necklace_ratio",
    "partitions_of",
    "peak_moments",
    "peak_polynomial",
    "predicted_mgf",
    "prediction_residual",
    "range_split_threshold",
    "range_sum",
    "run_checks",
    "run_experiment",
    "sample_class",
    "series_coeff_at",
    "series_coeff_poly",
    "stirling2",
    "stirling2_row",
    "substitution_point",
    "__version__",
]
