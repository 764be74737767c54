"""Command-line entry points: reconstruct, sweeps, diagnostics, selftest."""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .bregman import bregman_iterate
from .config import default_config, load_config
from .errors import SourceDivisionError, TorusRegError
from .functionals import QuadraticPenalty
from .harness import (
    apriori_alpha,
    approx_error_sweep,
    build_problem,
    calibrate_c,
    fit_rate,
    rate_sweep,
    sinusoid_noise,
    worst_case_noise,
)
from .operators import apply, kernel_signal, make_inverse_helmholtz
from .solvers import SolverConfig, solve_quadratic_spectral
from .svgplot import Line, Series, svg_loglog
from .reportio import write_signals_csv, write_sweep_csv
from .torus import Signal, TorusGrid, norm_l2, to_spectrum
from .vsc import (
    HoelderIndexFunction,
    construct_source,
    decay_space_norm,
    vsc_violation_search,
)


def _ensure_outdir(config, override):
    directory = override or config.output.directory
    os.makedirs(directory, exist_ok=True)
    return directory


def _load(args):
    return load_config(args.config) if args.config else default_config()


def cmd_reconstruct(args) -> int:
    config = _load(args)
    problem = build_problem(config.problem)
    sweep = config.sweep
    delta = sweep.deltas[0]
    alpha = sweep.alphas[0] if sweep.alphas else apriori_alpha(delta, sweep.alpha_c, sweep.alpha_sigma)
    noise = sweep.noise
    if noise.kind == "exact":
        g_obs, k = problem.g_true, 0
    elif noise.kind == "fixed_sinusoid":
        g_obs, k = problem.g_true + sinusoid_noise(problem.grid, delta, noise.k_fixed), noise.k_fixed
    else:
        def evaluator(g):
            chain = bregman_iterate(problem.op, g, alpha, problem.penalty, sweep.bregman_steps, config.solver)
            return chain[-1].iterate

        g_obs, k = worst_case_noise(
            problem.op, problem.g_true, delta, noise.k_max, evaluator,
            sweep.metric, problem.f_true, problem.penalty,
        )
    states = bregman_iterate(problem.op, g_obs, alpha, problem.penalty, sweep.bregman_steps, config.solver)
    outdir = _ensure_outdir(config, args.out)
    path = os.path.join(outdir, "reconstruction.csv")
    columns = {"f_true": problem.f_true, "g_true": problem.g_true, "g_obs": g_obs}
    for st in states:
        columns[f"f_step{st.n}"] = st.iterate
    write_signals_csv(path, columns)
    print(f"reconstruct: delta={delta:g} alpha={alpha:g} noise_k={k}")
    for st in states:
        err = problem.penalty.bregman(st.iterate, problem.f_true)
        residual = norm_l2(apply(problem.op, st.iterate) - g_obs)
        print(
            f"  step {st.n}: penalty_error={err:.6e} data_residual={residual:.6e} "
            f"iterations={st.report.iterations} boundary_touch={st.report.boundary_touch}"
        )
    print(f"wrote {path}")
    return 0


def _emit_sweep_outputs(config, rows, outdir, x_field, xlabel):
    csv_path = os.path.join(outdir, config.output.csv_name)
    write_sweep_csv(rows, csv_path)
    print(f"wrote {csv_path}")
    steps = sorted({r.n_bregman for r in rows})
    series, lines = [], []
    for n in steps:
        picked = [r for r in rows if r.n_bregman == n and r.kl_error > 0 and getattr(r, x_field) > 0]
        if len(picked) < 3:
            continue
        xs = [getattr(r, x_field) for r in picked]
        ys = [r.kl_error for r in picked]
        fit = fit_rate(picked, x=x_field, y="kl_error")
        print(f"  step {n}: slope={fit.slope:.4f} r2={fit.r_squared:.5f} points={fit.n_points}")
        series.append(Series(label=f"step {n} (slope {fit.slope:.3f})", xs=xs, ys=ys))
        lines.append(Line(label="", slope=fit.slope, intercept10=fit.intercept / math.log(10), dashed=False))
    if config.sweep.predicted_rate is not None and series:
        anchor_x, anchor_y = series[-1].xs[0], series[-1].ys[0]
        rate = config.sweep.predicted_rate
        lines.append(
            Line(
                label=f"reference slope {rate:.3f}",
                slope=rate,
                intercept10=math.log10(anchor_y) - rate * math.log10(anchor_x),
            )
        )
    if config.output.write_svg and series:
        svg_path = os.path.join(outdir, config.output.svg_name)
        svg_loglog(svg_path, series, lines, title="penalty error", xlabel=xlabel, ylabel="error")
        print(f"wrote {svg_path}")


def cmd_approx_sweep(args) -> int:
    config = _load(args)
    if not config.sweep.alphas:
        print("error: approx-sweep needs sweep.alphas", file=sys.stderr)
        return 2
    rows = approx_error_sweep(config)
    outdir = _ensure_outdir(config, args.out)
    _emit_sweep_outputs(config, rows, outdir, "alpha", "alpha")
    return 0


def cmd_rate_sweep(args) -> int:
    config = _load(args)
    if config.sweep.calibrate_cs:
        c = calibrate_c(config, threads=args.threads)
        print(f"calibrated c = {c:g}")
        config = replace(config, sweep=replace(config.sweep, alpha_c=c))
    rows = rate_sweep(config, threads=args.threads)
    outdir = _ensure_outdir(config, args.out)
    _emit_sweep_outputs(config, rows, outdir, "delta", "delta")
    return 0


def cmd_vsc_diagnose(args) -> int:
    config = _load(args)
    problem = build_problem(config.problem)
    outdir = _ensure_outdir(config, args.out)
    path = os.path.join(outdir, "vsc_report.txt")
    lines = [f"torusreg {__version__} vsc diagnostics (n={problem.grid.n})"]
    for nu in (0.25, 0.5, 1.0):
        kappa = HoelderIndexFunction(1.0, nu / 2.0)
        norm = decay_space_norm(problem.op, problem.f_true, kappa)
        lines.append(f"decay norm, kappa=t^{nu / 2:g}: {norm:.6e}")
    for order in (1, 2, 3, 4):
        try:
            source = construct_source(problem.op, problem.f_true, order)
            lines.append(f"order {order} source: ok, |generator|_2 = {norm_l2(source.leading()):.6e}")
        except SourceDivisionError as exc:
            lines.append(f"order {order} source: fails at mode {exc.mode}")
    omega = construct_source(problem.op, problem.f_true, 1).leading()
    amplitude = 1.0
    for _ in range(60):
        phi = HoelderIndexFunction(amplitude, 1.0 / 3.0)
        residual = vsc_violation_search(problem.op, omega, phi, trials=32, seed=args.seed)
        if residual <= 1e-9:
            break
        amplitude *= 2.0
    lines.append(
        f"first-order inequality satisfied at amplitude {amplitude:g} "
        f"(residual {residual:.3e}, exponent 1/3)"
    )
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    print("\n".join(lines))
    print(f"wrote {path}")
    return 0


def cmd_selftest(args) -> int:
    checks = []
    grid = TorusGrid(128)
    op = make_inverse_helmholtz(grid)
    rng = np.random.default_rng(args.seed)

    f = Signal(grid, rng.standard_normal(grid.n))
    spec = to_spectrum(f)
    parseval = abs(norm_l2(f) ** 2 - float(np.sum(np.abs(spec.coefficients) ** 2)))
    checks.append(("parseval", parseval < 1e-10))

    kernel_spec = to_spectrum(kernel_signal(grid)).coefficients
    defect = float(np.max(np.abs(kernel_spec - op.symbol)))
    checks.append(("kernel symbol aliasing bound", defect < 1.0 / (4.0 * grid.n**2)))

    prior = Signal(grid, rng.standard_normal(grid.n))
    g_obs = Signal(grid, rng.standard_normal(grid.n))
    exact = solve_quadratic_spectral(op, g_obs, 0.1, prior)
    from .solvers import solve_generalized_dr

    report = solve_generalized_dr(op, g_obs, 0.1, QuadraticPenalty(prior), SolverConfig())
    rel = norm_l2(report.minimizer - exact) / max(norm_l2(exact), 1e-30)
    checks.append(("douglas-rachford vs spectral", rel < 1e-6))

    states = bregman_iterate(op, g_obs, 0.5, QuadraticPenalty(prior), 3, SolverConfig(method="spectral"))
    mu = op.symbol
    beta = 0.5 / (mu**2 + 0.5)
    gc = to_spectrum(g_obs).coefficients
    pc = to_spectrum(prior).coefficients
    filt = gc / mu + beta**3 * (pc - gc / mu)
    got = to_spectrum(states[-1].iterate).coefficients
    checks.append(("iterated filter formula", float(np.max(np.abs(filt - got))) < 1e-9))

    ok = True
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
        ok &= passed
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torusreg", description=__doc__)
    parser.add_argument("--version", action="version", version=f"torusreg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("reconstruct", cmd_reconstruct),
        ("approx-sweep", cmd_approx_sweep),
        ("rate-sweep", cmd_rate_sweep),
        ("vsc-diagnose", cmd_vsc_diagnose),
        ("selftest", cmd_selftest),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="path to a config file")
        p.add_argument("--out", default=None, help="output directory override")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except TorusRegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
