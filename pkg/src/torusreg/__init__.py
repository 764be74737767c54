"""Bregman-iterated variational regularization on the 1-D torus.

Building blocks: Fourier-multiplier smoothing operators, quadratic and
entropy (Kullback-Leibler) penalties with exact proximal maps, a
Douglas-Rachford solver, the Bregman iteration with dual bookkeeping,
source-condition diagnostics, and a convergence-rate experiment harness.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainError,
    GridMismatch,
    InsufficientData,
    InteriorityWarning,
    NonConvergence,
    NonPositiveError,
    ProxFailure,
    SourceDivisionError,
    SpectrumNotReal,
    SubgradientUndefined,
    TorusRegError,
    Unsupported,
)
from .torus import (
    Signal,
    Spectrum,
    TorusGrid,
    bspline_truth,
    from_spectrum,
    inner,
    norm_l1,
    norm_l2,
    to_spectrum,
)
from .operators import (
    FourierMultiplierOperator,
    apply,
    kernel_signal,
    make_identity,
    make_inverse_helmholtz,
    multiplier_power_apply,
    power_apply,
    spectral_projection,
)
from .functionals import (
    EntropyPenalty,
    Fidelity,
    QuadraticPenalty,
    bregman_distance,
    kl_divergence,
    penalty_value,
    prox_fidelity,
    prox_penalty,
    xu_roach_check,
)
from .solvers import SolveReport, SolverConfig, solve_generalized_dr, solve_quadratic_spectral
from .bregman import (
    BregmanState,
    bregman_distance_invariance_check,
    bregman_iterate,
    dual_variable,
    step_penalty,
)
from .vsc import (
    HoelderIndexFunction,
    RatePrediction,
    SourceDecomposition,
    construct_source,
    decay_space_norm,
    fenchel_psi,
    predict_rate_entropy,
    predict_rate_hoelder,
    rate_function,
    vsc_violation_search,
)
from .harness import (
    ExperimentConfig,
    NoiseModel,
    OutputConfig,
    Problem,
    ProblemConfig,
    RateFit,
    SweepConfig,
    SweepRow,
    apriori_alpha,
    approx_error_sweep,
    build_problem,
    calibrate_c,
    fit_rate,
    geometric_grid,
    rate_sweep,
    reconstruction_error,
    sinusoid_noise,
    worst_case_noise,
)
from .config import default_config, load_config
