"""Experiment orchestration: noise models, parameter rules, sweeps and fits.

Reproduces the convergence-rate experiment: build the periodic test
problem, perturb the exact data by the worst sinusoid in the noise ball,
apply the a-priori rule alpha = c delta^sigma, run the Bregman chain, and
fit log-log slopes of the recorded errors. All sweeps are deterministic:
candidate and row order is fixed by the configuration, and argmax/argmin
ties break on the first index.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .bregman import bregman_iterate
from .errors import ConfigError, InsufficientData, NonPositiveError
from .functionals import EntropyPenalty, Penalty, QuadraticPenalty
from .operators import FourierMultiplierOperator, apply, make_inverse_helmholtz
from .solvers import SolverConfig
from .torus import Signal, TorusGrid, bspline_truth, norm_l1, norm_l2

__all__ = [
    "ProblemConfig",
    "NoiseModel",
    "SweepConfig",
    "OutputConfig",
    "ExperimentConfig",
    "Problem",
    "SweepRow",
    "RateFit",
    "build_problem",
    "sinusoid_noise",
    "reconstruction_error",
    "worst_case_noise",
    "apriori_alpha",
    "calibrate_c",
    "approx_error_sweep",
    "rate_sweep",
    "fit_rate",
    "geometric_grid",
]


def geometric_grid(top: float, bottom: float, count: int) -> tuple[float, ...]:
    """Strictly decreasing geometric grid from top to bottom inclusive."""
    if not (top > bottom > 0) or count < 2:
        raise ConfigError("need top > bottom > 0 and at least two points")
    return tuple(np.geomspace(top, bottom, count).tolist())


@dataclass(frozen=True)
class ProblemConfig:
    n: int = 480
    operator: str = "inverse_helmholtz"
    penalty: str = "entropy"
    truth: str = "bspline"
    bspline_degree: int = 5
    prior_value: float = 1.0
    box_lo: float = 0.0
    box_hi: float = 5.0

    def __post_init__(self):
        if self.operator != "inverse_helmholtz":
            raise ConfigError(f"unknown operator {self.operator!r}")
        if self.penalty not in ("entropy", "quadratic"):
            raise ConfigError(f"unknown penalty {self.penalty!r}")
        if self.truth != "bspline":
            raise ConfigError(f"unknown truth {self.truth!r}")
        if self.prior_value <= 0:
            raise ConfigError("prior value must be positive")


@dataclass(frozen=True)
class NoiseModel:
    kind: str = "worst_case"
    k_max: int = 32
    k_fixed: int = 1

    def __post_init__(self):
        if self.kind not in ("exact", "worst_case", "fixed_sinusoid"):
            raise ConfigError(f"unknown noise model {self.kind!r}")
        if self.k_max < 1 or self.k_fixed < 1:
            raise ConfigError("noise frequencies must be >= 1")


@dataclass(frozen=True)
class SweepConfig:
    deltas: tuple[float, ...] = field(default_factory=lambda: geometric_grid(1e-1, 1e-4, 12))
    alphas: tuple[float, ...] | None = None
    alpha_c: float = 1.0
    alpha_sigma: float = 8.0 / 15.0
    bregman_steps: int = 2
    noise: NoiseModel = field(default_factory=NoiseModel)
    metric: str = "kl"
    predicted_rate: float | None = None
    calibrate_cs: tuple[float, ...] | None = None

    def __post_init__(self):
        d = np.asarray(self.deltas, dtype=float)
        if d.size == 0 or np.any(d <= 0) or np.any(np.diff(d) >= 0):
            raise ConfigError("deltas must be strictly positive and strictly decreasing")
        if self.alpha_c <= 0:
            raise ConfigError("alpha rule constant must be positive")
        if not 0 < self.alpha_sigma <= 2:
            raise ConfigError("alpha rule exponent must lie in (0, 2]")
        if self.bregman_steps < 1:
            raise ConfigError("bregman_steps must be >= 1")
        if self.metric not in ("kl", "l1"):
            raise ConfigError(f"unknown metric {self.metric!r}")


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    csv_name: str = "sweep.csv"
    svg_name: str = "sweep.svg"
    write_svg: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


@dataclass(frozen=True)
class Problem:
    grid: TorusGrid
    op: FourierMultiplierOperator
    penalty: Penalty
    f_true: Signal = field(repr=False)
    g_true: Signal = field(repr=False)


def build_problem(cfg: ProblemConfig) -> Problem:
    grid = TorusGrid(cfg.n)
    op = make_inverse_helmholtz(grid)
    f_true = bspline_truth(grid, cfg.bspline_degree)
    prior = Signal(grid, np.full(grid.n, cfg.prior_value))
    if cfg.penalty == "entropy":
        penalty: Penalty = EntropyPenalty(prior, cfg.box_lo, cfg.box_hi)
    else:
        penalty = QuadraticPenalty(prior)
    return Problem(grid, op, penalty, f_true, apply(op, f_true))


@dataclass(frozen=True)
class SweepRow:
    delta: float
    alpha: float
    k_worst: int
    n_bregman: int
    kl_error: float
    l1_error: float
    data_residual: float
    dr_iterations: int

    def __post_init__(self):
        for name in ("kl_error", "l1_error", "data_residual"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ConfigError(f"{name} must be finite and non-negative, got {v}")


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    n_points: int


def sinusoid_noise(grid: TorusGrid, delta: float, k: int) -> Signal:
    """delta * sin(2 pi k x); its L2 norm is delta/sqrt(2) <= delta."""
    return Signal(grid, delta * np.sin(2.0 * np.pi * k * grid.points))


def apriori_alpha(delta: float, c: float, sigma: float) -> float:
    """A-priori rule alpha = c * delta^sigma."""
    if delta <= 0 or c <= 0 or sigma <= 0:
        raise ConfigError("apriori rule needs positive delta, c and sigma")
    return c * delta**sigma


def reconstruction_error(penalty: Penalty, recon: Signal, f_true: Signal, metric: str) -> float:
    """Error of a reconstruction in the chosen metric.

    ``kl`` is the penalty-native Bregman distance to the truth (the KL
    divergence for the entropy penalty, 1/2 ||.||^2 for the quadratic one);
    ``l1`` is the L1 distance.
    """
    if metric == "kl":
        return penalty.bregman(recon, f_true)
    if metric == "l1":
        return norm_l1(recon - f_true)
    raise ConfigError(f"unknown metric {metric!r}")


def worst_case_noise(
    op: FourierMultiplierOperator,
    g_true: Signal,
    delta: float,
    k_max: int,
    evaluator: Callable[[Signal], Signal],
    metric: str,
    f_true: Signal,
    penalty: Penalty,
) -> tuple[Signal, int]:
    """Search g_true + delta sin(2 pi k .), k = 1..k_max, for the worst error.

    Runs the full reconstruction ``evaluator`` on every candidate and
    returns the observation maximizing the reconstruction error (first
    index wins ties).
    """
    if delta < 0:
        raise ConfigError("delta must be non-negative")
    if not 1 <= k_max <= g_true.grid.n // 2 - 1:
        raise ConfigError("k_max must lie in [1, n/2 - 1]")
    best_err = -float("inf")
    best = (g_true, 1)
    for k in range(1, k_max + 1):
        g_obs = g_true + sinusoid_noise(g_true.grid, delta, k)
        err = reconstruction_error(penalty, evaluator(g_obs), f_true, metric)
        if err > best_err:
            best_err = err
            best = (g_obs, k)
    return best


def _chain_metrics(
    problem: Problem,
    g_obs: Signal,
    alpha: float,
    n_steps: int,
    solver: SolverConfig,
) -> list[tuple[float, float, float, int]]:
    """(kl, l1, data residual, iterations) for each step of the chain."""
    states = bregman_iterate(problem.op, g_obs, alpha, problem.penalty, n_steps, solver)
    out = []
    for st in states:
        kl = problem.penalty.bregman(st.iterate, problem.f_true)
        l1 = norm_l1(st.iterate - problem.f_true)
        resid = norm_l2(apply(problem.op, st.iterate) - g_obs)
        out.append((kl, l1, resid, st.report.iterations))
    return out


def _rows_for_delta(config: ExperimentConfig, problem: Problem, delta: float) -> list[SweepRow]:
    sweep = config.sweep
    alpha = apriori_alpha(delta, sweep.alpha_c, sweep.alpha_sigma)
    noise = sweep.noise
    n_steps = sweep.bregman_steps
    if noise.kind == "exact":
        per_k = {0: _chain_metrics(problem, problem.g_true, alpha, n_steps, config.solver)}
        choice = {n: 0 for n in range(1, n_steps + 1)}
    elif noise.kind == "fixed_sinusoid":
        g_obs = problem.g_true + sinusoid_noise(problem.grid, delta, noise.k_fixed)
        per_k = {noise.k_fixed: _chain_metrics(problem, g_obs, alpha, n_steps, config.solver)}
        choice = {n: noise.k_fixed for n in range(1, n_steps + 1)}
    else:
        # worst case, selected per Bregman step: the candidate chains share
        # their early steps, so one chain per k covers every n
        per_k = {}
        for k in range(1, noise.k_max + 1):
            g_obs = problem.g_true + sinusoid_noise(problem.grid, delta, k)
            per_k[k] = _chain_metrics(problem, g_obs, alpha, n_steps, config.solver)
        col = 0 if sweep.metric == "kl" else 1
        choice = {}
        for n in range(1, n_steps + 1):
            errs = [per_k[k][n - 1][col] for k in sorted(per_k)]
            choice[n] = sorted(per_k)[int(np.argmax(errs))]
    rows = []
    for n in range(1, n_steps + 1):
        kl, l1, resid, iters = per_k[choice[n]][n - 1]
        rows.append(
            SweepRow(
                delta=delta,
                alpha=alpha,
                k_worst=choice[n],
                n_bregman=n,
                kl_error=kl,
                l1_error=l1,
                data_residual=resid,
                dr_iterations=iters,
            )
        )
    return rows


def _delta_job(args) -> list[SweepRow]:
    config, problem, delta = args
    if problem is None:
        problem = build_problem(config.problem)
    return _rows_for_delta(config, problem, delta)


def rate_sweep(
    config: ExperimentConfig,
    threads: int = 1,
    problem: Problem | None = None,
) -> list[SweepRow]:
    """One row per (delta, bregman step), deltas in config order, steps ascending.

    Pass ``problem`` to sweep a synthetic problem instead of the configured one.
    """
    deltas = config.sweep.deltas
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_delta_job, [(config, problem, d) for d in deltas]))
    else:
        if problem is None:
            problem = build_problem(config.problem)
        chunks = [_rows_for_delta(config, problem, d) for d in deltas]
    return [row for chunk in chunks for row in chunk]


def approx_error_sweep(
    config: ExperimentConfig,
    alphas: Sequence[float] | None = None,
    problem: Problem | None = None,
) -> list[SweepRow]:
    """Exact-data sweep over alpha: rows carry delta = 0 and k_worst = 0.

    Rows are emitted in the given alpha order (unsorted), steps ascending
    within each alpha.
    """
    if alphas is None:
        alphas = config.sweep.alphas
    if not alphas:
        raise ConfigError("approx_error_sweep needs an alpha list")
    if problem is None:
        problem = build_problem(config.problem)
    rows = []
    for alpha in alphas:
        metrics = _chain_metrics(
            problem, problem.g_true, alpha, config.sweep.bregman_steps, config.solver
        )
        for n, (kl, l1, resid, iters) in enumerate(metrics, start=1):
            rows.append(
                SweepRow(
                    delta=0.0,
                    alpha=alpha,
                    k_worst=0,
                    n_bregman=n,
                    kl_error=kl,
                    l1_error=l1,
                    data_residual=resid,
                    dr_iterations=iters,
                )
            )
    return rows


def _calibration_objective(config: ExperimentConfig, c: float, problem: Problem | None) -> float:
    trial = replace(config, sweep=replace(config.sweep, alpha_c=c))
    rows = rate_sweep(trial, problem=problem)
    target_n = config.sweep.bregman_steps
    rate = config.sweep.predicted_rate
    col = "kl_error" if config.sweep.metric == "kl" else "l1_error"
    worst = -float("inf")
    for row in rows:
        if row.n_bregman == target_n:
            worst = max(worst, getattr(row, col) / row.delta**rate)
    return worst


def _calibration_job(args) -> float:
    config, problem, c = args
    return _calibration_objective(config, c, problem)


def calibrate_c(
    config: ExperimentConfig,
    candidate_cs: Sequence[float] | None = None,
    threads: int = 1,
    problem: Problem | None = None,
) -> float:
    """Pick the rule constant minimizing max_delta error(delta) / delta^rate.

    The error column, target step and predicted rate come from the sweep
    configuration; the delta grid is the configured one, so calibration on
    a reduced grid just means passing a reduced config.
    """
    if candidate_cs is None:
        candidate_cs = config.sweep.calibrate_cs
    if not candidate_cs:
        raise ConfigError("calibrate_c needs candidate constants")
    if config.sweep.predicted_rate is None:
        raise ConfigError("calibrate_c needs sweep.predicted_rate")
    cs = list(candidate_cs)
    if len(cs) == 1:
        return cs[0]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            objectives = list(pool.map(_calibration_job, [(config, problem, c) for c in cs]))
    else:
        objectives = [_calibration_objective(config, c, problem) for c in cs]
    return cs[int(np.argmin(objectives))]


def fit_rate(
    rows: Sequence[SweepRow],
    x: str = "delta",
    y: str = "kl_error",
    n_bregman: int | None = None,
) -> RateFit:
    """Least-squares slope of log y against log x over the filtered rows.

    Positive slope means the error decays like x^slope as x shrinks.
    """
    if x not in ("delta", "alpha") or y not in ("kl_error", "l1_error"):
        raise ConfigError(f"cannot fit {y!r} against {x!r}")
    picked = [r for r in rows if n_bregman is None or r.n_bregman == n_bregman]
    if len(picked) < 3:
        raise InsufficientData(f"need >= 3 rows, have {len(picked)}")
    xs = np.array([getattr(r, x) for r in picked])
    ys = np.array([getattr(r, y) for r in picked])
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise NonPositiveError("log-log fit needs positive values")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    predicted = slope * lx + intercept
    ss_res = float(np.sum((ly - predicted) ** 2))
    ss_tot = float(np.sum((ly - np.mean(ly)) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return RateFit(float(slope), float(intercept), r2, len(picked))
