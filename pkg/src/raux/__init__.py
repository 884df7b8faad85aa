"""Zeros of Riemann's auxiliary function R(s) at configurable precision."""

from .auxiliary import (
    f_val,
    g_val,
    h_val,
    left_eq,
    omega_contains,
    r_aux,
    r_aux_logpolar,
    s_approx,
    siegel_residual,
    u_val,
    v_val,
    zero_map,
)
from .errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    InvalidArgument,
    NonFiniteError,
    PoleError,
    PrecisionExhausted,
    QuadratureError,
    RauxError,
    SeedMismatch,
    StageError,
    TruncationError,
)
from .numerics import PrecisionContext, RootResult, c_log, c_pow, ctx_new, holo_root, integrate_line
from .special import bernoulli_even, chi, lambert_w1, log_gamma, zeta
from .table import ZeroTable
from .xray import XRayImage, eta_markers, image_write, xray_render
from .zeros import (
    WedgeParams,
    ZeroRecord,
    count_zeros,
    eta_refine,
    eta_seed,
    eta_seed_asymptotic,
    rho_asymptotic,
    wedge_params,
    zero_solve,
)

__version__ = "0.1.0"
