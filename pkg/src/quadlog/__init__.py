"""Principal matrix logarithms by quadrature.

log(A) = (A - I) * integral_0^1 [t(A - I) + I]^{-1} dt, evaluated either by
a tanh-sinh (double-exponential) trapezoid on a rigorously truncated
interval or by Gauss-Legendre rules, with adaptive variants of both and
spectral-parameter estimation that never needs eigensolvers beyond things
built here. The compiled kernel backend is used when available; set
QUADLOG_KERNELS=py to force the pure-NumPy fallback.
"""

from .algorithms import (
    AdaptiveReport,
    LogmResult,
    logm_de,
    logm_de_adaptive,
    logm_gl,
    logm_gl_adaptive,
    logm_action_de,
)
from .backend import BACKEND
from .errors import (
    AIsIdentity,
    DegenerateSpectrum,
    DimensionMismatch,
    NoConvergence,
    NoRoot,
    NotSPD,
    NotSymmetric,
    Overflow,
    ParseError,
    PreconditionViolated,
    QuadlogError,
    SingularMatrix,
)
from .linalg import (
    PowerInfo,
    SpectralParams,
    eig_logm_spd,
    estimate_params,
    expm,
    spectral_radius,
    two_norm,
)
from .quadrature import GLRule, QuadratureState, de_transform, gl_nodes, refine, trapezoid_de
from .testmats import (
    MatrixSpec,
    gen_frank,
    gen_parter,
    gen_spd,
    gen_vand,
    parse_matrix_spec,
    precondition_scale,
    read_matrix_market,
    realize,
    spec_name,
    write_matrix_market,
)
from .truncation import (
    ToleranceConfig,
    TruncationInterval,
    epsilon_max,
    select_interval,
    tail_bound_left,
    tail_bound_right,
    truncation_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AIsIdentity",
    "AdaptiveReport",
    "BACKEND",
    "DegenerateSpectrum",
    "DimensionMismatch",
    "GLRule",
    "LogmResult",
    "MatrixSpec",
    "NoConvergence",
    "NoRoot",
    "NotSPD",
    "NotSymmetric",
    "Overflow",
    "ParseError",
    "PowerInfo",
    "PreconditionViolated",
    "QuadlogError",
    "QuadratureState",
    "SingularMatrix",
    "SpectralParams",
    "ToleranceConfig",
    "TruncationInterval",
    "de_transform",
    "eig_logm_spd",
    "epsilon_max",
    "estimate_params",
    "expm",
    "gen_frank",
    "gen_parter",
    "gen_spd",
    "gen_vand",
    "gl_nodes",
    "logm_action_de",
    "logm_de",
    "logm_de_adaptive",
    "logm_gl",
    "logm_gl_adaptive",
    "parse_matrix_spec",
    "precondition_scale",
    "read_matrix_market",
    "realize",
    "refine",
    "select_interval",
    "spec_name",
    "spectral_radius",
    "tail_bound_left",
    "tail_bound_right",
    "trapezoid_de",
    "truncation_bound",
    "two_norm",
    "write_matrix_market",
    "__version__",
]
