"""Recoil heating of the trapped gas during a probe pulse.

State variables are the total energy E and the photons scattered per atom
Phi:

    dE/dt   = N R0 overlap(T) beta_tot(T) heat_per_event
    dPhi/dt =   R0 overlap(T) beta_tot(T)

with T = T(E) from the equilibrium energy relation and beta_tot the trap
suppression averaged over all emission directions. beta_tot(T) is
tabulated once per sweep on a logarithmic temperature grid and
interpolated monotonically; it is by far the most expensive ingredient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy import integrate, interpolate

from .errors import DomainError, FitError, NumericalError
from .species import AtomSpecies, LITHIUM_6, rayleigh_rate, recoil_energy
from .thermo import (
    TrapConfig, cloud_rms_widths, fermi_temperature, invert_energy_to_temperature,
    total_energy_trapped, trapped_state,
)
from .trap import ProbeBeam, beta_trap_reduced, overlap_from_widths

ISOTROPIC = "isotropic"
DIPOLE = "dipole"


@dataclass(frozen=True)
class PulseSimConfig:
    trap: TrapConfig
    beam: ProbeBeam
    initial_t_over_tf: float
    species: AtomSpecies = LITHIUM_6
    heat_per_event: Optional[float] = None  # J; None means two recoil energies
    include_overlap: bool = False
    angle_average: str = ISOTROPIC
    blocking: bool = True
    include_saturation: bool = False
    rtol: float = 1e-6

    def __post_init__(self):
        if not self.initial_t_over_tf > 0:
            raise DomainError("initial T/T_F must be positive")
        if self.heat_per_event is not None and self.heat_per_event < 0:
            raise DomainError("heat per event must be non-negative")
        if self.angle_average not in (ISOTROPIC, DIPOLE):
            raise DomainError(f"angle_average must be {ISOTROPIC!r} or {DIPOLE!r}")

    @property
    def heat(self) -> float:
        if self.heat_per_event is None:
            return 2.0 * recoil_energy(self.species)
        return self.heat_per_event

    @property
    def unblocked_rate(self) -> float:
        """R0 at the beam's peak intensity [photons/s per atom]."""
        return rayleigh_rate(self.species, self.beam.peak_intensity, self.beam.detuning,
                             saturation=self.include_saturation)


@dataclass
class HeatingTrajectory:
    t: np.ndarray
    t_over_tf: np.ndarray
    photons: np.ndarray
    rate: np.ndarray
    energy: np.ndarray = field(repr=False)

    COLUMNS = ("t_ms", "t_over_tf", "photons", "rate")

    def columns(self) -> dict:
        return {
            "t_ms": list(self.t * 1e3),
            "t_over_tf": list(self.t_over_tf),
            "photons": list(self.photons),
            "rate": list(self.rate),
        }


def angle_weights(species: AtomSpecies, angle_average: str = ISOTROPIC, order: int = 16):
    """Nodes in momentum transfer q and weights for the emission-direction average.

    With c = cos(theta), q^2 = 2k^2 (1 - c) and dc = q dq / k^2; integrating
    in q removes the sqrt behaviour of beta near forward scattering.
    Isotropic emission weighs dc/2; the dipole pattern for polarisation
    perpendicular to the probe, averaged over azimuth, weighs 3/8 (1 + c^2) dc.
    """
    k = species.k
    x, wx = np.polynomial.legendre.leggauss(order)
    q = k * (x + 1.0)  # [0, 2k]
    jac = k * q / k ** 2  # dq/dx * dc/dq
    c = 1.0 - q ** 2 / (2.0 * k ** 2)
    if angle_average == ISOTROPIC:
        w = 0.5 * wx * jac
    elif angle_average == DIPOLE:
        w = 0.375 * (1.0 + c ** 2) * wx * jac
    else:
        raise DomainError(f"unknown angle average {angle_average!r}")
    return q, w


def total_suppression(species: AtomSpecies, trap: TrapConfig, T: float,
                      angle_average: str = ISOTROPIC) -> float:
    """Suppression of the total (all-angle) scattering rate at temperature T."""
    state = trapped_state(species, trap, T)
    q, w = angle_weights(species, angle_average)
    k_T = state.thermal_wavenumber
    return float(sum(wi * beta_trap_reduced(qi / k_T, state.eta) for qi, wi in zip(q, w)))


class SuppressionTable:
    """beta_tot(T) sampled on a log grid in T/T_F, monotone cubic interpolation."""

    def __init__(self, species, trap, t_min, t_max, angle_average=ISOTROPIC, points=28):
        if not 0 < t_min < t_max:
            raise DomainError("table needs 0 < t_min < t_max")
        self.t_min, self.t_max = t_min, t_max
        self.T_F = fermi_temperature(trap)
        grid = np.geomspace(t_min, t_max, points)
        values = [total_suppression(species, trap, t * self.T_F, angle_average) for t in grid]
        self._interp = interpolate.PchipInterpolator(np.log(grid), values, extrapolate=False)

    def __call__(self, t_over_tf: float) -> float:
        t = min(max(t_over_tf, self.t_min), self.t_max)
        return float(self._interp(math.log(t)))


def _max_energy(config: PulseSimConfig, duration: float) -> float:
    state0 = trapped_state(config.species, config.trap,
                           config.initial_t_over_tf * fermi_temperature(config.trap))
    E0 = total_energy_trapped(state0)
    # unblocked, full-overlap bound on the absorbed energy
    return E0, E0 + config.trap.atom_number * config.unblocked_rate * duration * config.heat


def build_table(config: PulseSimConfig, duration: Optional[float] = None,
                powers=None) -> Optional[SuppressionTable]:
    if not config.blocking:
        return None
    duration = config.beam.pulse_duration if duration is None else duration
    worst = config
    if powers is not None:
        worst = replace(config, beam=replace(config.beam, power=max(powers)))
    E0, E_max = _max_energy(worst, duration)
    t_max = invert_energy_to_temperature(config.trap, E_max) / fermi_temperature(config.trap)
    t_max = max(t_max * 1.05, config.initial_t_over_tf * 1.5)
    return SuppressionTable(config.species, config.trap, config.initial_t_over_tf * 0.999,
                            t_max, config.angle_average)


def evolve_heating(config: PulseSimConfig, table: Optional[SuppressionTable] = None,
                   samples: int = 51) -> HeatingTrajectory:
    """Integrate energy and photons per atom across one probe pulse."""
    trap = config.trap
    N = trap.atom_number
    T_F = fermi_temperature(trap)
    duration = config.beam.pulse_duration
    R0 = config.unblocked_rate
    heat = config.heat
    if config.blocking and table is None:
        table = build_table(config)

    T0 = config.initial_t_over_tf * T_F
    state0 = trapped_state(config.species, trap, T0)
    E0 = total_energy_trapped(state0)

    def temperature(E):
        if E <= E0:
            return T0
        return invert_energy_to_temperature(trap, E)

    def rate(E):
        T = temperature(E)
        r = R0
        if config.blocking:
            r *= table(T / T_F)
        if config.include_overlap:
            state = trapped_state(config.species, trap, T)
            sx, sy, sz = cloud_rms_widths(state)
            r *= overlap_from_widths((sx, sz), config.beam.waist)
        return r, T

    def rhs(t, y):
        r, _ = rate(y[0])
        return [N * r * heat, r]

    t_eval = np.linspace(0.0, duration, samples)
    if R0 == 0.0:
        E = np.full(samples, E0)
        photons = np.zeros(samples)
    else:
        # energy scale only enters through the absolute tolerance
        sol = integrate.solve_ivp(rhs, (0.0, duration), [E0, 0.0], method="RK45",
                                  t_eval=t_eval, rtol=config.rtol,
                                  atol=[config.rtol * E0, config.rtol * 1e-6])
        if not sol.success:
            raise NumericalError(f"heating integration failed: {sol.message}",
                                 t=sol.t, y=sol.y)
        E = sol.y[0]
        photons = sol.y[1]
    temps = np.empty(samples)
    rates = np.empty(samples)
    for i, e in enumerate(E):
        r, T = rate(e)
        temps[i] = T / T_F
        rates[i] = r
    # enforce the monotone invariants against O(rtol) integration noise
    temps = np.maximum.accumulate(temps)
    photons = np.maximum.accumulate(photons)
    return HeatingTrajectory(t=t_eval, t_over_tf=temps, photons=photons, rate=rates, energy=E)


@dataclass
class PowerSweep:
    power: list
    photons_per_atom: list
    final_t_over_tf: list

    COLUMNS = ("power_mw", "photons_per_atom", "final_t_over_tf")

    def columns(self) -> dict:
        return {
            "power_mw": [p * 1e3 for p in self.power],
            "photons_per_atom": list(self.photons_per_atom),
            "final_t_over_tf": list(self.final_t_over_tf),
        }


def photons_vs_power(config: PulseSimConfig, power_grid) -> PowerSweep:
    """Photons per atom and final T/T_F at the end of the pulse for each power [W]."""
    powers = [float(p) for p in power_grid]
    if not powers or any(p <= 0 for p in powers):
        raise DomainError("power grid must be positive")
    if any(b <= a for a, b in zip(powers, powers[1:])):
        raise DomainError("power grid must be strictly increasing")
    table = build_table(config, powers=powers)
    sweep = PowerSweep([], [], [])
    for p in powers:
        cfg = replace(config, beam=replace(config.beam, power=p))
        traj = evolve_heating(cfg, table=table, samples=2)
        sweep.power.append(p)
        sweep.photons_per_atom.append(float(traj.photons[-1]))
        sweep.final_t_over_tf.append(float(traj.t_over_tf[-1]))
    return sweep


def initial_suppression(config: PulseSimConfig) -> float:
    """Total-scattering suppression (times overlap, if enabled) at the start of the pulse."""
    T0 = config.initial_t_over_tf * fermi_temperature(config.trap)
    s0 = 1.0
    if config.blocking:
        s0 = total_suppression(config.species, config.trap, T0, config.angle_average)
    if config.include_overlap:
        state = trapped_state(config.species, config.trap, T0)
        sx, sy, sz = cloud_rms_widths(state)
        s0 *= overlap_from_widths((sx, sz), config.beam.waist)
    return s0


@dataclass(frozen=True)
class TwoSlopeResult:
    slope_low: float
    slope_high: float
    intercept_low: float
    intercept_high: float


def _ols(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0.0:
        raise FitError("all x values coincide")
    slope = np.sum((x - xm) * (y - ym)) / sxx
    return float(slope), float(ym - slope * xm)


def two_slope_analysis(power, photons, low_fraction: float = 0.25,
                       high_fraction: float = 0.25) -> TwoSlopeResult:
    """Straight-line fits to the lowest and highest fractions of a power sweep."""
    power = np.asarray(power, dtype=float)
    photons = np.asarray(photons, dtype=float)
    n = power.size
    n_low = int(math.floor(low_fraction * n + 1e-9))
    n_high = int(math.floor(high_fraction * n + 1e-9))
    if n_low < 4 or n_high < 4:
        raise FitError(f"need at least 4 points per region, got {n_low} low and {n_high} high")
    order = np.argsort(power)
    low, high = order[:n_low], order[n - n_high:]
    if np.ptp(photons[low]) == 0.0 or np.ptp(photons[high]) == 0.0:
        raise FitError("photon counts are constant in a fit region")
    slope_low, icpt_low = _ols(power[low], photons[low])
    slope_high, icpt_high = _ols(power[high], photons[high])
    return TwoSlopeResult(slope_low, slope_high, icpt_low, icpt_high)
