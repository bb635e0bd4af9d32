"""Distance distributions between a node in a disk/ball and a node in the
concentric annulus/spherical shell, for a uniformly placed or random-waypoint
inner node.

Public surface: region/scenario types and conditional geometry
(:mod:`ringdist.geometry`), exact piecewise densities with CDF/moments
(:mod:`ringdist.closed_form`), the independent quadrature reference
(:mod:`ringdist.oracle`), seeded Monte Carlo validation
(:mod:`ringdist.montecarlo`), and the beta approximation with its KL
diagnostics (:mod:`ringdist.approx`). The ``ringdist`` console script wraps
all of it.
"""

__version__ = "0.1.0"

from .approx import (
    BetaParams,
    KLCurve,
    beta_pdf,
    fit_beta,
    kl_divergence,
    kl_sweep,
    threshold_crossing,
)
from .closed_form import (
    CoeffKind,
    CoefficientSet,
    CorollaryKind,
    PiecewisePdf,
    build_pdf,
    coefficient_set,
    corollary_pdf,
    eval_cdf,
    eval_pdf,
    moments,
)
from .errors import (
    ConfigurationError,
    ConsistencyError,
    DataError,
    DomainError,
    FitError,
    InfiniteDivergenceError,
    QuadratureError,
    RingdistError,
)
from .geometry import (
    Dim,
    IntersectionCase,
    OracleRegime,
    Regime,
    RegionPair,
    Scenario,
    UnifiedRegime,
    classify_regime,
    conditional_pdf,
    inner_radial_cdf,
    inner_radial_pdf,
    inner_radial_ppf,
    intersection_case,
    kappa,
    theta1,
    theta2,
)
from .montecarlo import (
    EmpiricalDistribution,
    SampleConfig,
    empirical_pdf,
    ks_statistic,
    sample_distance,
    sample_distances,
)
from .oracle import IntervalPlan, RhoSegment, RInterval, adaptive_quadrature, build_plan, numeric_pdf

__all__ = [
    "__version__",
    # errors
    "RingdistError", "ConfigurationError", "DomainError", "ConsistencyError",
    "QuadratureError", "DataError", "FitError", "InfiniteDivergenceError",
    # geometry
    "Dim", "Scenario", "UnifiedRegime", "OracleRegime", "Regime",
    "IntersectionCase", "RegionPair", "classify_regime", "inner_radial_pdf",
    "inner_radial_cdf", "inner_radial_ppf", "theta1", "theta2", "kappa",
    "intersection_case", "conditional_pdf",
    # closed form
    "CoeffKind", "CoefficientSet", "coefficient_set", "PiecewisePdf",
    "build_pdf", "eval_pdf", "eval_cdf", "moments", "CorollaryKind",
    "corollary_pdf",
    # oracle
    "IntervalPlan", "RInterval", "RhoSegment", "build_plan", "numeric_pdf",
    "adaptive_quadrature",
    # monte carlo
    "SampleConfig", "EmpiricalDistribution", "sample_distance",
    "sample_distances", "empirical_pdf", "ks_statistic",
    # approximation
    "BetaParams", "KLCurve", "fit_beta", "beta_pdf", "kl_divergence",
    "kl_sweep", "threshold_crossing",
]
