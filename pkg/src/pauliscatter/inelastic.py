"""Inelastic (pair) light scattering in the Condon-point picture.

A colliding pair absorbs blue-detuned light at the separation where the
1/r^3 resonant dipole shift matches the detuning. The loss rate follows the
pair probability at that separation; with p(r) ~ r^gamma the rate scales as
Delta^-(gamma + 6)/3. Only exponents are modelled; amplitudes are free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FitError
from .species import AtomSpecies

# pair-correlation exponents at short range
DISTINGUISHABLE = 0.0
IDENTICAL_FERMIONS = 2.0


@dataclass(frozen=True)
class FitResult:
    exponent: float
    exponent_stderr: float
    amplitude: float
    n_points: int = 0

    def __post_init__(self):
        if self.exponent_stderr < 0:
            raise ValueError("standard error must be non-negative")


def condon_radius(species: AtomSpecies, delta: float) -> float:
    """Resonant separation lambdabar (Gamma/Delta)^(1/3) for blue detuning ``delta`` [rad/s]."""
    if delta <= 0:
        raise DomainError("Condon radius is defined for blue (positive) detuning only")
    return species.reduced_wavelength * (species.linewidth_gamma / delta) ** (1.0 / 3.0)


def loss_exponent(gamma: float) -> float:
    """alpha in loss ~ Delta^-alpha for pair probability p(r) ~ r^gamma.

    p(r) r^2 dr/dDelta with r ~ Delta^(-1/3) gives alpha = (gamma + 6)/3.
    """
    if gamma < 0:
        raise DomainError("pair-correlation exponent must be non-negative")
    return (gamma + 6.0) / 3.0


def loss_curve(delta_grid, gamma: float, amplitude: float = 1.0):
    """amplitude * Delta^-alpha on ``delta_grid`` (any positive unit)."""
    delta = np.asarray(delta_grid, dtype=float)
    if np.any(delta <= 0):
        raise DomainError("detunings must be positive")
    return amplitude * delta ** (-loss_exponent(gamma))


def atom_loss_metric(n_final: float, n_initial: float) -> float:
    """-ln(N/N0)."""
    if n_final <= 0 or n_initial <= 0:
        raise DomainError("atom numbers must be positive")
    return -math.log(n_final / n_initial)


def fit_power_law(x, y, y_err=None) -> FitResult:
    """Weighted least squares of ln y = ln A + alpha ln x.

    ``y_err`` (absolute errors on y) sets weights (y/y_err)^2 on the log
    residuals; without it the fit is unweighted. The standard error is
    scaled by the reduced chi-square of the residuals, so it vanishes for
    exact data.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError("x and y must be 1-d arrays of equal length")
    if x.size < 3:
        raise FitError(f"need at least 3 points, got {x.size}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise FitError("power-law fit needs positive x and y")
    lx, ly = np.log(x), np.log(y)
    if y_err is None:
        w = np.ones_like(lx)
    else:
        y_err = np.asarray(y_err, dtype=float)
        if np.any(y_err <= 0):
            raise FitError("errors must be positive")
        w = (y / y_err) ** 2
    W = w.sum()
    xm = np.sum(w * lx) / W
    ym = np.sum(w * ly) / W
    sxx = np.sum(w * (lx - xm) ** 2)
    if sxx <= 1e-300 or np.ptp(lx) == 0.0:
        raise FitError("x values have no spread")
    slope = np.sum(w * (lx - xm) * (ly - ym)) / sxx
    intercept = ym - slope * xm
    resid = ly - intercept - slope * lx
    dof = x.size - 2
    chi2 = np.sum(w * resid ** 2)
    stderr = math.sqrt(chi2 / dof / sxx)
    return FitResult(float(slope), stderr, float(math.exp(intercept)), int(x.size))


def monte_carlo_calibration(seed: int = 0, true_exponent: float = -2.0,
                            noise: float = 0.05, n_points: int = 8, trials: int = 500,
                            x_range=(100.0, 500.0)):
    """Fit synthetic power laws with lognormal noise; returns (mean exponent, coverage).

    Trial ``i`` draws its noise from a generator seeded with ``(seed, i)``.
    Coverage is the fraction of trials whose one-sigma interval contains the
    true exponent.
    """
    x = np.geomspace(*x_range, n_points)
    exponents = np.empty(trials)
    covered = 0
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        y = x ** true_exponent * np.exp(noise * rng.standard_normal(n_points))
        fit = fit_power_law(x, y)
        exponents[i] = fit.exponent
        covered += abs(fit.exponent - true_exponent) <= fit.exponent_stderr
    return float(exponents.mean()), covered / trials
