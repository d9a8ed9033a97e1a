"""Trap-averaged scattering suppression, probe-beam overlap and detected signal.

The trapped cloud is treated in the local density approximation: every
point is a homogeneous gas at eta(r) = eta_0 - V(r)/k_B T, and the detected
suppression is the density-weighted average of the local beta(q). For a
harmonic trap the spatial average reduces to an integral over v = V/k_B T
with weight sqrt(v). Substituting w = u^2 + v (total single-particle energy)
and u = sqrt(w) sin(phi) confines the Fermi factor to the outer integral:

    <n beta> ~ int dw f(w - eta_0) w^(3/2)
               int_0^(pi/2) dphi sin(phi) cos(phi)^2
               [L(w + p^2 + 2p sqrt(w) sin phi - eta_0)
                - L(w + p^2 - 2p sqrt(w) sin phi - eta_0)] / 4p

and <n> ~ (pi/8) F_2(eta_0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericalError
from .fdint import fermi_dirac_integral
from .species import AtomSpecies, momentum_transfer
from .thermo import ThermoState, TrapConfig, cloud_rms_widths, fermi_temperature, trapped_state

_TAIL = 60.0
_SMALL_P = 1e-4  # below this the p = 0 limit is exact to O(p^2)

# detection numerical aperture of the collection lens
DEFAULT_NA = 0.27


def _expit(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _softplus(x):
    if x > 0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


def _shell_average(w, p, eta0, epsrel):
    """Inner phi integral for total energy w (reduced units)."""
    a = w + p * p - eta0
    b = 2.0 * p * math.sqrt(w)

    def integrand(phi):
        s = math.sin(phi)
        c = math.cos(phi)
        return s * c * c * (_softplus(a + b * s) - _softplus(a - b * s))

    points = []
    # softplus changes from exponential to linear where its argument crosses 0
    if b > 0:
        for arg in (-a / b, a / b):
            if 0.0 < arg < 1.0:
                points.append(math.asin(arg))
    value = integrate.quad(integrand, 0.0, 0.5 * math.pi, points=points or None,
                           epsabs=0.0, epsrel=epsrel, limit=200)[0]
    return value / (4.0 * p)


def trap_blocked_numerator(p: float, eta0: float, epsrel: float = 1e-9) -> float:
    """Spatially integrated n(r) beta(r), in units where <n> = (pi/8) F_2(eta0)."""
    upper = max(eta0, 0.0) + _TAIL
    points = [eta0] if 0.0 < eta0 < upper else None
    if p < _SMALL_P:
        # p -> 0 limit of the shell average is sqrt(w) (1 - f) pi/16
        def outer(w):
            x = w - eta0
            return 0.0625 * math.pi * w * w * _expit(-x) * _expit(x)
    else:
        def outer(w):
            if w == 0.0:
                return 0.0
            return _expit(eta0 - w) * w ** 1.5 * _shell_average(w, p, eta0, epsrel)
    value = integrate.quad(outer, 0.0, upper, points=points, epsabs=0.0,
                           epsrel=epsrel * 10, limit=200)[0]
    if not math.isfinite(value):
        raise NumericalError("trap-averaged quadrature failed", p=p, eta0=eta0)
    return value


def trap_occupied_integral(eta0: float) -> float:
    return 0.125 * math.pi * fermi_dirac_integral(2.0, eta0)


def beta_trap_reduced(p: float, eta0: float) -> float:
    """Density-weighted LDA average of beta for reduced momentum p = q/k_T."""
    if p < 0:
        raise DomainError("momentum transfer must be non-negative")
    value = trap_blocked_numerator(p, eta0) / trap_occupied_integral(eta0)
    return min(max(value, 0.0), 1.0)


def suppression_trap_averaged(state: ThermoState, q: float) -> float:
    """Pauli suppression of scattering at momentum transfer q from a trapped cloud."""
    if state.trap is None:
        raise DomainError("trap average needs a trapped state")
    return beta_trap_reduced(q / state.thermal_wavenumber, state.eta)


def aperture_momenta(species: AtomSpecies, numerical_aperture: float = DEFAULT_NA,
                     order: int = 8):
    """Momentum transfers and weights for detection through a cone around 90 degrees.

    The cone axis is perpendicular to the probe wavevector; directions are
    weighted uniformly in solid angle. Returns (q, weights) with weights
    summing to 1.
    """
    half_angle = math.asin(numerical_aperture)
    # Gauss-Legendre in cos(alpha) over the cap, uniform in azimuth
    x, wx = np.polynomial.legendre.leggauss(order)
    cos_lo = math.cos(half_angle)
    cos_alpha = 0.5 * (1.0 - cos_lo) * x + 0.5 * (1.0 + cos_lo)
    w_alpha = 0.5 * wx
    phi = 2.0 * math.pi * (np.arange(2 * order) + 0.5) / (2 * order)
    sin_alpha = np.sqrt(1.0 - cos_alpha ** 2)
    cos_theta = sin_alpha[:, None] * np.cos(phi)[None, :]
    q = species.k * np.sqrt(2.0 * (1.0 - cos_theta))
    weights = np.repeat(w_alpha[:, None], phi.size, axis=1)
    weights = weights / weights.sum()
    return q.ravel(), weights.ravel()


def suppression_aperture_averaged(state: ThermoState,
                                  numerical_aperture: float = DEFAULT_NA) -> float:
    q, weights = aperture_momenta(state.species, numerical_aperture)
    return float(sum(wt * suppression_trap_averaged(state, qi) for qi, wt in zip(q, weights)))


@dataclass(frozen=True)
class ProbeBeam:
    """Gaussian probe beam. ``waist`` is the 1/e^2 intensity radius."""

    waist: float
    power: float
    detuning: float
    pulse_duration: float

    def __post_init__(self):
        if not (self.waist > 0 and self.pulse_duration > 0):
            raise DomainError("beam waist and pulse duration must be positive")
        if self.power < 0:
            raise DomainError("beam power must be non-negative")

    @property
    def peak_intensity(self) -> float:
        return 2.0 * self.power / (math.pi * self.waist ** 2)


def overlap_from_widths(sigmas, waist: float) -> float:
    """prod_i 1/sqrt(1 + 4 sigma_i^2 / w^2) over the transverse axes."""
    out = 1.0
    for sigma in sigmas:
        out /= math.sqrt(1.0 + 4.0 * sigma ** 2 / waist ** 2)
    return out


def beam_overlap_factor(state: ThermoState, beam: ProbeBeam) -> float:
    """Mean relative intensity seen by a Gaussian cloud in a Gaussian beam.

    The beam propagates along y, perpendicular to the long trap axis, so
    the transverse cloud widths are sigma_x (radial) and sigma_z (axial).
    """
    sx, sy, sz = cloud_rms_widths(state)
    return overlap_from_widths((sx, sz), beam.waist)


@dataclass
class SuppressionCurve:
    """Rows of (T/T_F, suppression, overlap, product) on a temperature grid."""

    t_over_tf: list = field(default_factory=list)
    suppression: list = field(default_factory=list)
    overlap: list = field(default_factory=list)
    product: list = field(default_factory=list)

    COLUMNS = ("t_over_tf", "suppression", "overlap", "product")

    def append(self, t, suppression, overlap):
        self.t_over_tf.append(t)
        self.suppression.append(suppression)
        self.overlap.append(overlap)
        self.product.append(suppression * overlap)

    def columns(self) -> dict:
        return {name: list(getattr(self, name)) for name in self.COLUMNS}

    def rows(self):
        return list(zip(self.t_over_tf, self.suppression, self.overlap, self.product))


def detected_signal_curve(species: AtomSpecies, trap: TrapConfig, beam: ProbeBeam, q: float,
                          t_grid, aperture_average: bool = False) -> SuppressionCurve:
    """Suppression, beam overlap and their product along a T/T_F grid."""
    t_grid = [float(t) for t in t_grid]
    if not t_grid or any(t <= 0 for t in t_grid):
        raise DomainError("temperature grid must be positive")
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise DomainError("temperature grid must be strictly increasing")
    T_F = fermi_temperature(trap)
    curve = SuppressionCurve()
    for t in t_grid:
        state = trapped_state(species, trap, t * T_F)
        if aperture_average:
            beta = suppression_aperture_averaged(state)
        else:
            beta = suppression_trap_averaged(state, q)
        curve.append(t, beta, beam_overlap_factor(state, beam))
    return curve


def fig2_momentum_transfer(species: AtomSpecies) -> float:
    """q at the 90 degree detection angle."""
    return momentum_transfer(species, 0.5 * math.pi)
