"""Numerical engines for distributions of ratios of random variables.

Closed forms for normal ratios (Hinkley 1969; Pham-Gia, Turkkan and
Marchand 2006), Mellin convolution of independent densities by double
exponential quadrature, characteristic-function inversion in one dimension
(Gil-Pelaez 1951) and two (Broda and Kan 2013), modality classification
(Marsaglia 2006), Hake-gain parameterizations, seeded Monte Carlo
cross-checks, and a timed benchmark protocol.
"""

from .errors import (
    AccuracyWarning,
    GridError,
    IntegrandError,
    InvalidParamsError,
    NonConvergenceError,
    OverflowRangeError,
    QuadratureError,
    RatioDistError,
    SingularProductError,
    UndecayedCFError,
)
from .special import erf, erfc, kummer_1f1_half, std_normal_cdf
from .quadrature import (
    ChebInterpolant,
    DETransform,
    QuadratureConfig,
    QuadratureResult,
    cheb_build,
    cheb_eval,
    cheb_eval_many,
    de_integrate,
)
from .normal_ratio import (
    MODALITY_A0,
    BivNormalParams,
    HakeInputs,
    Modality,
    PracticalMoments,
    RatioTransform,
    StdRatioParams,
    classify_modality,
    cohens_d,
    evaluation_interval,
    hake_ab,
    hake_params,
    modality_curve,
    normal_approx_cdf,
    practical_moments,
    ratio_cdf,
    ratio_pdf_hinkley,
    ratio_pdf_phamgia,
    ratio_practical_moments,
    std_ratio_cdf,
    std_ratio_pdf,
    to_standard,
)
from .mellin import (
    Chebyshev,
    DensityFn,
    Direct,
    Support,
    chi_square_density,
    normal_density,
    product_pdf,
    ratio_interpolant,
    ratio_pdf,
    ratio_pdf_grid,
    uniform_density,
)
from .cf import (
    CharFn,
    Grid2DConfig,
    JointCharFn,
    auto_grid,
    bivariate_normal_joint_cf,
    broda_kan_cdf,
    broda_kan_pdf_indep,
    broda_kan_pdf_joint,
    cauchy_cf,
    cf_decay_range,
    cf_derivative,
    cf_moments,
    chi_square_cf,
    gil_pelaez_cdf,
    gil_pelaez_pdf,
    normal_cf,
    product_joint_cf,
    six_sigma_interval,
)
from .oracle import (
    SampleSet,
    Sampler,
    chi_square_sampler,
    ks_distance,
    mc_ratio_samples,
    normal_sampler,
    reference_pdf_grid,
    uniform_sampler,
)
from .bench import BenchRecord, eps_max, export, method_ids, run_experiment

__version__ = "0.1.0"

__all__ = [
    "AccuracyWarning",
    "BenchRecord",
    "BivNormalParams",
    "CharFn",
    "ChebInterpolant",
    "Chebyshev",
    "DETransform",
    "DensityFn",
    "Direct",
    "Grid2DConfig",
    "GridError",
    "HakeInputs",
    "IntegrandError",
    "InvalidParamsError",
    "JointCharFn",
    "MODALITY_A0",
    "Modality",
    "NonConvergenceError",
    "OverflowRangeError",
    "PracticalMoments",
    "QuadratureConfig",
    "QuadratureError",
    "QuadratureResult",
    "RatioDistError",
    "RatioTransform",
    "SampleSet",
    "Sampler",
    "SingularProductError",
    "StdRatioParams",
    "Support",
    "UndecayedCFError",
    "auto_grid",
    "bivariate_normal_joint_cf",
    "broda_kan_cdf",
    "broda_kan_pdf_indep",
    "broda_kan_pdf_joint",
    "cauchy_cf",
    "cf_decay_range",
    "cf_derivative",
    "cf_moments",
    "cheb_build",
    "cheb_eval",
    "cheb_eval_many",
    "chi_square_cf",
    "chi_square_density",
    "chi_square_sampler",
    "classify_modality",
    "cohens_d",
    "de_integrate",
    "eps_max",
    "erf",
    "erfc",
    "evaluation_interval",
    "export",
    "gil_pelaez_cdf",
    "gil_pelaez_pdf",
    "hake_ab",
    "hake_params",
    "ks_distance",
    "kummer_1f1_half",
    "mc_ratio_samples",
    "method_ids",
    "modality_curve",
    "normal_approx_cdf",
    "normal_cf",
    "normal_density",
    "normal_sampler",
    "practical_moments",
    "product_joint_cf",
    "product_pdf",
    "ratio_cdf",
    "ratio_interpolant",
    "ratio_pdf",
    "ratio_pdf_grid",
    "ratio_pdf_hinkley",
    "ratio_pdf_phamgia",
    "ratio_practical_moments",
    "reference_pdf_grid",
    "run_experiment",
    "six_sigma_interval",
    "std_normal_cdf",
    "std_ratio_cdf",
    "std_ratio_pdf",
    "to_standard",
    "uniform_density",
    "uniform_sampler",
]
