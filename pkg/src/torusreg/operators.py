"""Self-adjoint smoothing operators on the torus in Fourier-multiplier form.

The test operator is the inverse Helmholtz operator, the periodic
convolution with kernel cosh((2x - 2*floor(x) - 1)/4) / sinh(1/4), whose
symbol is 1 / (4 pi^2 j^2 + 1/4). Symbols are positive, even and
non-increasing in |j|, so T = T* and the spectral calculus of T*T is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigError, SourceDivisionError
from .torus import Signal, TorusGrid, check_same_grid

__all__ = [
    "FourierMultiplierOperator",
    "make_inverse_helmholtz",
    "make_identity",
    "kernel_signal",
    "apply",
    "power_apply",
    "multiplier_power_apply",
    "spectral_projection",
]

OVERFLOW_LIMIT = 1e300


@dataclass(frozen=True)
class FourierMultiplierOperator:
    """Diagonal operator (Tf)^_j = mu_j f^_j with a positive even symbol.

    ``smoothing_order`` records how many derivatives the operator gains
    (metadata used by the rate predictors, not by the arithmetic).
    """

    grid: TorusGrid
    symbol: np.ndarray = field(repr=False)
    smoothing_order: float = 0.0

    def __post_init__(self):
        mu = np.asarray(self.symbol, dtype=float)
        if mu.shape != (self.grid.n,):
            raise ConfigError("symbol length does not match grid size")
        if not np.all(mu > 0):
            raise ConfigError("symbol must be strictly positive")
        j = self.grid.modes
        mu_by_absj = mu[np.argsort(np.abs(j), kind="stable")]
        if not np.all(np.diff(mu_by_absj) <= 1e-15 * mu_by_absj[:-1] + 1e-300):
            raise ConfigError("symbol must be non-increasing in |j|")
        pos = j >= 1
        neg_sorted = mu[j <= -1][::-1]
        if not np.allclose(mu[pos][: neg_sorted.size], neg_sorted[: mu[pos].size], rtol=1e-14):
            raise ConfigError("symbol must be even in j")
        object.__setattr__(self, "symbol", mu)
        if self.smoothing_order < 0:
            raise ConfigError("smoothing_order must be >= 0")

    @cached_property
    def symbol_fft_order(self) -> np.ndarray:
        """Symbol permuted into numpy's unshifted FFT mode order."""
        return np.fft.ifftshift(self.symbol)


def make_inverse_helmholtz(grid: TorusGrid) -> FourierMultiplierOperator:
    """T = (-d^2/dx^2 + I/4)^{-1}: symbol 1/(4 pi^2 j^2 + 1/4), 2-smoothing."""
    j = grid.modes
    mu = 1.0 / (4.0 * np.pi**2 * j.astype(float) ** 2 + 0.25)
    return FourierMultiplierOperator(grid, mu, smoothing_order=2.0)


def make_identity(grid: TorusGrid) -> FourierMultiplierOperator:
    """Identity multiplier, handy for single-mode normal-equation checks."""
    return FourierMultiplierOperator(grid, np.ones(grid.n), smoothing_order=0.0)


def kernel_signal(grid: TorusGrid) -> Signal:
    """Samples of the closed-form convolution kernel of the inverse Helmholtz T.

    Its exact Fourier coefficients are the symbol 1/(4 pi^2 j^2 + 1/4); the
    DFT of the samples matches the symbol up to the aliasing defect
    sum_{m != 0} mu_{j+mn}, which is below 1/(4 n^2) in every mode.
    """
    x = grid.points
    vals = np.cosh((2.0 * x - 2.0 * np.floor(x) - 1.0) / 4.0) / np.sinh(0.25)
    return Signal(grid, vals)


def multiply_modes(f: Signal, factor_fft_order: np.ndarray) -> Signal:
    """Mode-wise multiplication by a real, even factor (result is real)."""
    out = np.fft.ifft(np.fft.fft(f.values) * factor_fft_order)
    return Signal(f.grid, out.real)


def apply(op: FourierMultiplierOperator, f: Signal) -> Signal:
    """Apply the multiplier: (Tf)^_j = mu_j f^_j."""
    check_same_grid(op, f)
    return multiply_modes(f, op.symbol_fft_order)


def multiplier_power_apply(op: FourierMultiplierOperator, p: float, f: Signal) -> Signal:
    """Apply mu_j^p mode-wise, failing loudly on blow-up.

    Negative powers amplify high modes; any output coefficient beyond
    1e300 (or non-finite) raises :class:`SourceDivisionError` carrying the
    first offending mode.
    """
    check_same_grid(op, f)
    if p == 0:
        return Signal(f.grid, f.values.copy())
    c = np.fft.fft(f.values)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        factor = op.symbol_fft_order**p
        out = np.where(c == 0, 0.0 + 0.0j, c * factor)
    bad = ~np.isfinite(out) | (np.abs(out) > OVERFLOW_LIMIT)
    if np.any(bad):
        modes_fft_order = np.fft.ifftshift(op.grid.modes)
        mode = int(modes_fft_order[np.argmax(bad)])
        raise SourceDivisionError(
            f"mode {mode} blows up under symbol power {p:g}", mode=mode
        )
    return Signal(f.grid, np.fft.ifft(out).real)


def power_apply(op: FourierMultiplierOperator, s: float, f: Signal) -> Signal:
    """Apply (T*T)^s, i.e. the multiplier mu_j^{2s} (T is self-adjoint)."""
    return multiplier_power_apply(op, 2.0 * s, f)


def spectral_projection(op: FourierMultiplierOperator, lam: float, f: Signal) -> Signal:
    """Spectral projection 1_{[0, lam)}(T*T): keeps modes with mu_j^2 < lam."""
    if lam <= 0:
        raise ConfigError("projection threshold must be positive")
    check_same_grid(op, f)
    keep = (op.symbol_fft_order**2 < lam).astype(float)
    return multiply_modes(f, keep)
