"""Ideal, spin-polarised Fermi gas: homogeneous and harmonically trapped.

Reduced variables used throughout: ``eta = mu / k_B T`` and energies in
units of k_B T. For the harmonic trap the density of states makes every
trap-integrated quantity a single Fermi-Dirac integral of eta_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.constants import h, hbar, k as k_B

from .errors import DomainError
from .fdint import fermi_dirac_integral
from .roots import find_root
from .species import AtomSpecies


@dataclass(frozen=True)
class TrapConfig:
    """Cylindrically symmetric harmonic trap.

    Frequencies are angular (rad/s); ``omega_r`` is shared by the x and y
    axes, ``omega_z`` is the weak axial direction.
    """

    omega_r: float
    omega_z: float
    atom_number: float

    def __post_init__(self):
        if not (self.omega_r > 0 and self.omega_z > 0 and self.atom_number > 0):
            raise DomainError("trap frequencies and atom number must be positive")

    @classmethod
    def from_hz(cls, f_r: float, f_z: float, atom_number: float) -> "TrapConfig":
        return cls(2 * math.pi * f_r, 2 * math.pi * f_z, atom_number)

    @property
    def omega_bar(self) -> float:
        return (self.omega_r ** 2 * self.omega_z) ** (1.0 / 3.0)

    @property
    def omegas(self) -> tuple:
        return (self.omega_r, self.omega_r, self.omega_z)


@dataclass(frozen=True)
class ThermoState:
    """Equilibrium state of a homogeneous (``density`` set) or trapped gas.

    For a trapped gas ``chemical_potential`` is the global mu_0 at the trap
    centre.
    """

    species: AtomSpecies
    temperature: float
    chemical_potential: float
    density: Optional[float] = None
    trap: Optional[TrapConfig] = None

    def __post_init__(self):
        if not self.temperature > 0:
            raise DomainError(f"temperature must be positive, got {self.temperature}")
        if (self.density is None) == (self.trap is None):
            raise DomainError("a state is either homogeneous (density) or trapped (trap)")

    @property
    def is_trapped(self) -> bool:
        return self.trap is not None

    @property
    def kT(self) -> float:
        return k_B * self.temperature

    @property
    def eta(self) -> float:
        return self.chemical_potential / self.kT

    @property
    def fugacity(self) -> float:
        return math.exp(self.eta)

    @property
    def thermal_wavelength(self) -> float:
        return thermal_wavelength(self.species, self.temperature)

    @property
    def thermal_wavenumber(self) -> float:
        """sqrt(2 m k_B T) / hbar; momenta in units of this make energies k_B T."""
        return math.sqrt(2.0 * self.species.mass * self.kT) / hbar

    @property
    def t_over_tf(self) -> float:
        if self.trap is not None:
            return self.temperature / fermi_temperature(self.trap)
        return self.temperature / homogeneous_fermi_temperature(self.species, self.density)

    @property
    def peak_density(self) -> float:
        if self.density is not None:
            return self.density
        return fermi_dirac_integral(0.5, self.eta) / self.thermal_wavelength ** 3


# -- homogeneous gas -------------------------------------------------------------

def thermal_wavelength(species: AtomSpecies, T: float) -> float:
    """Thermal de Broglie wavelength h / sqrt(2 pi m k_B T)."""
    if T <= 0:
        raise DomainError(f"temperature must be positive, got {T}")
    return h / math.sqrt(2.0 * math.pi * species.mass * k_B * T)


def fermi_wavenumber(n: float) -> float:
    """k_F = (6 pi^2 n)^(1/3) for a single spin component."""
    return (6.0 * math.pi ** 2 * n) ** (1.0 / 3.0)


def fermi_energy(species: AtomSpecies, n: float) -> float:
    return (hbar * fermi_wavenumber(n)) ** 2 / (2.0 * species.mass)


def homogeneous_fermi_temperature(species: AtomSpecies, n: float) -> float:
    return fermi_energy(species, n) / k_B


def density_from_mu(species: AtomSpecies, mu: float, T: float) -> float:
    """n = F_{1/2}(mu/k_B T) / Lambda_t^3."""
    return fermi_dirac_integral(0.5, mu / (k_B * T)) / thermal_wavelength(species, T) ** 3


def _solve_eta(order: float, target: float) -> float:
    """eta with F_order(eta) = target for the monotone F."""
    if target <= 0:
        raise DomainError("target occupation must be positive")
    # Boltzmann guess below unit phase-space density, Sommerfeld leading term above
    if target < 1.0:
        guess = math.log(target)
    else:
        guess = (target * math.gamma(order + 2.0)) ** (1.0 / (order + 1.0))

    def residual(eta):
        return math.log(fermi_dirac_integral(order, eta)) - math.log(target)

    return find_root(residual, guess, step=0.5)


def solve_mu_homogeneous(species: AtomSpecies, n: float, T: float) -> float:
    """Chemical potential reproducing density ``n`` at temperature ``T``."""
    if n <= 0 or T <= 0:
        raise DomainError("density and temperature must be positive")
    D = n * thermal_wavelength(species, T) ** 3
    return _solve_eta(0.5, D) * k_B * T


def homogeneous_state(species: AtomSpecies, n: float, T: float) -> ThermoState:
    return ThermoState(species, T, solve_mu_homogeneous(species, n, T), density=n)


def homogeneous_state_at(species: AtomSpecies, n: float, t_over_tf: float) -> ThermoState:
    """Homogeneous state at density ``n`` and reduced temperature T/T_F."""
    return homogeneous_state(species, n, t_over_tf * homogeneous_fermi_temperature(species, n))


def state_from_phase_space_density(species: AtomSpecies, D: float, T: float) -> ThermoState:
    """Homogeneous state with prescribed n Lambda_t^3 at temperature T."""
    n = D / thermal_wavelength(species, T) ** 3
    return homogeneous_state(species, n, T)


def peak_phase_space_density(state: ThermoState) -> float:
    """n Lambda_t^3, at the trap centre for a trapped state."""
    return state.peak_density * state.thermal_wavelength ** 3


# -- harmonic trap ---------------------------------------------------------------

def fermi_temperature(trap: TrapConfig) -> float:
    """T_F = hbar (omega_r^2 omega_z 6N)^(1/3) / k_B."""
    return hbar * (trap.omega_r ** 2 * trap.omega_z * 6.0 * trap.atom_number) ** (1.0 / 3.0) / k_B


def fermi_energy_trapped(trap: TrapConfig) -> float:
    return k_B * fermi_temperature(trap)


def atom_number_from_mu(trap: TrapConfig, mu0: float, T: float) -> float:
    """N = (k_B T / hbar omega_bar)^3 F_2(mu0 / k_B T)."""
    kT = k_B * T
    return (kT / (hbar * trap.omega_bar)) ** 3 * fermi_dirac_integral(2.0, mu0 / kT)


def solve_mu_trapped(trap: TrapConfig, T: float) -> float:
    """Global chemical potential mu_0 holding ``trap.atom_number`` atoms at T."""
    if T <= 0:
        raise DomainError(f"temperature must be positive, got {T}")
    kT = k_B * T
    target = trap.atom_number * (hbar * trap.omega_bar / kT) ** 3
    return _solve_eta(2.0, target) * kT


def trapped_state(species: AtomSpecies, trap: TrapConfig, T: float) -> ThermoState:
    return ThermoState(species, T, solve_mu_trapped(trap, T), trap=trap)


def trapped_state_at(species: AtomSpecies, trap: TrapConfig, t_over_tf: float) -> ThermoState:
    return trapped_state(species, trap, t_over_tf * fermi_temperature(trap))


def trap_potential(species: AtomSpecies, trap: TrapConfig, r) -> np.ndarray:
    """V(r) = m/2 sum_i omega_i^2 r_i^2 for positions ``r`` with shape (..., 3)."""
    r = np.asarray(r, dtype=float)
    w2 = np.array(trap.omegas) ** 2
    return 0.5 * species.mass * np.sum(w2 * r ** 2, axis=-1)


def density_profile(state: ThermoState, r) -> np.ndarray:
    """Local-density-approximation density n(r) [1/m^3] at positions (..., 3)."""
    if state.trap is None:
        raise DomainError("density_profile needs a trapped state")
    V = trap_potential(state.species, state.trap, r)
    eta_local = state.eta - V / state.kT
    return fermi_dirac_integral(0.5, eta_local) / state.thermal_wavelength ** 3


def mean_density(state: ThermoState) -> float:
    """Density-weighted mean density  int n^2 d^3r / int n d^3r."""
    from scipy import integrate

    eta0 = state.eta

    def weight(v, power):
        return math.sqrt(v) * fermi_dirac_integral(0.5, eta0 - v) ** power

    upper = max(eta0, 0.0) + 60.0
    points = [eta0] if eta0 > 0 else None
    # relative tolerance only: the integrands are tiny in the dilute limit
    opts = dict(points=points, limit=200, epsabs=0.0, epsrel=1e-10)
    num = integrate.quad(weight, 0.0, upper, args=(2,), **opts)[0]
    den = integrate.quad(weight, 0.0, upper, args=(1,), **opts)[0]
    return num / den / state.thermal_wavelength ** 3


def _moment_ratio(eta: float) -> float:
    # Li_4(-z) / Li_3(-z)
    return fermi_dirac_integral(3.0, eta) / fermi_dirac_integral(2.0, eta)


def cloud_rms_widths(state: ThermoState) -> tuple:
    """(sigma_x, sigma_y, sigma_z) from <x_i^2> = k_B T/(m omega_i^2) Li_4(-z)/Li_3(-z)."""
    if state.trap is None:
        raise DomainError("cloud widths need a trapped state")
    ratio = _moment_ratio(state.eta)
    m = state.species.mass
    return tuple(math.sqrt(state.kT * ratio / (m * w ** 2)) for w in state.trap.omegas)


def total_energy_trapped(state: ThermoState) -> float:
    """E = 3 N k_B T Li_4(-z)/Li_3(-z), kinetic plus potential."""
    if state.trap is None:
        raise DomainError("total energy needs a trapped state")
    return 3.0 * state.trap.atom_number * state.kT * _moment_ratio(state.eta)


def ground_state_energy(trap: TrapConfig) -> float:
    """T = 0 energy (3/4) N E_F of the filled harmonic-oscillator Fermi sea."""
    return 0.75 * trap.atom_number * fermi_energy_trapped(trap)


def _t_over_tf_from_eta(eta: float) -> float:
    # N (hbar w / kT)^3 F_2 = N  <=>  (T_F/T)^3 = 6 F_2(eta)
    return (6.0 * fermi_dirac_integral(2.0, eta)) ** (-1.0 / 3.0)


def invert_energy_to_temperature(trap: TrapConfig, E: float, rtol: float = 1e-12) -> float:
    """Temperature at which the trapped gas holds total energy ``E``.

    Solved in eta, where E / (N k_B T_F) = 3 (T/T_F) F_3/F_2 is monotone.
    """
    E0 = ground_state_energy(trap)
    if E < E0 * (1.0 - 1e-9):
        raise DomainError(f"energy {E:.6g} J is below the ground-state energy {E0:.6g} J")
    if E <= E0 * (1.0 + 1e-9):
        # degenerate limit: T -> 0
        raise DomainError("energy equals the ground-state energy; temperature is zero")
    target = E / (trap.atom_number * fermi_energy_trapped(trap))

    def scaled_energy(eta):
        return 3.0 * _t_over_tf_from_eta(eta) * _moment_ratio(eta)

    def residual(eta):
        return math.log(scaled_energy(eta) / target)

    # classical guess E = 3 N k T  <=>  T/T_F = target/3
    t_guess = target / 3.0
    if t_guess > 0.5:
        guess = math.log(1.0 / (6.0 * t_guess ** 3))
    else:
        guess = 1.0 / max(t_guess, 1e-3)
    eta = find_root(residual, guess, step=0.5, xtol=1e-15)
    return _t_over_tf_from_eta(eta) * fermi_temperature(trap)
