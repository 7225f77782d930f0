"""Birkhoff orthogonality and Birkhoff angles in finite-dimensional normed spaces."""
from .exceptions import (
    BirkhoffError,
    ConvergenceError,
    DimensionError,
    InvalidParameterError,
    NormSpecError,
    ZeroVectorError,
)
from .geometry import (
    AngleClass,
    AngleReport,
    Comparison,
    SweepRow,
    Verdict,
    angle_report,
    classify,
    compare_same_base,
    compare_same_target,
    cosine_k,
    gamma,
    gamma_star,
    isosceles_angle,
    pythagorean_angle,
    sweep_k,
)
from .norms import (
    INF,
    CustomNorm,
    InnerProduct,
    Lp,
    NormClass,
    WeightedLp,
    format_norm_spec,
    inner_product_eval,
    norm_eval,
    normalize,
    parse_norm_spec,
)
from .profile import (
    DerivativePair,
    Method,
    Side,
    SublevelInterval,
    one_sided_derivatives,
    profile_eval,
    sublevel_interval,
    sublevel_interval_bisection,
    sublevel_interval_pl_exact,
    sublevel_interval_quadratic_exact,
)

__version__ = "0.1.0"
