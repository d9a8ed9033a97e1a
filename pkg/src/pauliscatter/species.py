"""Atomic constants, photon kinematics and single-atom scattering diagnostics.

All quantities are SI. Linewidths and detunings are angular frequencies
(rad/s); detunings are signed, negative meaning red of resonance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from scipy.constants import atomic_mass, h, hbar

from .errors import ConfigError, DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AtomSpecies:
    """Two-level description of an alkali atom on its resonance line.

    Attributes:
        mass: atomic mass [kg]
        wavelength: resonance wavelength [m]
        linewidth_gamma: natural linewidth Gamma [rad/s]
        saturation_intensity: [W/m^2]
        fine_structure_splitting: D1-D2 splitting [Hz], informational only
    """

    mass: float
    wavelength: float
    linewidth_gamma: float
    saturation_intensity: float
    fine_structure_splitting: float
    name: str = "custom"

    def __post_init__(self):
        for field in ("mass", "wavelength", "linewidth_gamma",
                      "saturation_intensity", "fine_structure_splitting"):
            value = getattr(self, field)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{field} must be positive and finite, got {value!r}")

    @property
    def k(self) -> float:
        """Photon wavenumber 2 pi / lambda [1/m]."""
        return TWO_PI / self.wavelength

    @property
    def reduced_wavelength(self) -> float:
        """lambda / 2 pi [m]."""
        return self.wavelength / TWO_PI


# Li-6 D2 line. Mass from the AME atomic mass table, Gamma/2pi = 5.87 MHz,
# Isat = 2.54 mW/cm^2 for the cycling transition.
LITHIUM_6 = AtomSpecies(
    mass=6.0151228874 * atomic_mass,
    wavelength=671e-9,
    linewidth_gamma=TWO_PI * 5.87e6,
    saturation_intensity=25.4,
    fine_structure_splitting=10.05e9,
    name="lithium6",
)

BUILTIN_SPECIES = {"lithium6": LITHIUM_6, "li6": LITHIUM_6}

_SPECIES_KEYS = ("mass_amu", "wavelength_nm", "gamma_MHz", "isat_mW_cm2", "fs_split_GHz")


def species_from_mapping(values: dict, name: str = "custom") -> AtomSpecies:
    """Build a species from the lab-unit keys used by species files."""
    missing = [key for key in _SPECIES_KEYS if key not in values]
    if missing:
        raise ConfigError(f"species definition missing keys: {', '.join(missing)}")
    try:
        return AtomSpecies(
            mass=float(values["mass_amu"]) * atomic_mass,
            wavelength=float(values["wavelength_nm"]) * 1e-9,
            linewidth_gamma=TWO_PI * float(values["gamma_MHz"]) * 1e6,
            saturation_intensity=float(values["isat_mW_cm2"]) * 10.0,
            fine_structure_splitting=float(values["fs_split_GHz"]) * 1e9,
            name=str(values.get("name", name)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid species definition: {exc}") from exc


def load_species(path) -> AtomSpecies:
    """Read a plain-text ``key=value`` species file.

    Recognised keys: mass_amu, wavelength_nm, gamma_MHz (Gamma/2pi),
    isat_mW_cm2, fs_split_GHz and an optional name. ``#`` starts a comment.
    """
    path = Path(path)
    values = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value in {path.name}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SPECIES_KEYS and key != "name":
            raise ConfigError(f"unknown species key {key!r}", line=lineno)
        values[key] = value
    return species_from_mapping(values, name=path.stem)


def resolve_species(name: str) -> AtomSpecies:
    """Builtin name (``lithium6``) or path to a species file."""
    if name.lower() in BUILTIN_SPECIES:
        return BUILTIN_SPECIES[name.lower()]
    return load_species(name)


@dataclass(frozen=True)
class ScatteringGeometry:
    """Detection angle and probe detuning for one scattering channel."""

    angle_theta: float
    detuning_delta: float

    def __post_init__(self):
        if not 0.0 < self.angle_theta <= math.pi:
            raise DomainError(f"scattering angle must lie in (0, pi], got {self.angle_theta}")

    def momentum_transfer(self, species: AtomSpecies) -> float:
        return momentum_transfer(species, self.angle_theta)


def recoil_energy(species: AtomSpecies) -> float:
    """Single-photon recoil energy hbar^2 k^2 / 2m [J]."""
    return (hbar * species.k) ** 2 / (2.0 * species.mass)


def recoil_frequency(species: AtomSpecies) -> float:
    """Recoil energy expressed as a frequency E_rec / h [Hz]."""
    return recoil_energy(species) / h


def momentum_transfer(species: AtomSpecies, theta: float) -> float:
    """|k_i - k_f| = 2 k sin(theta/2) for elastic scattering by ``theta``."""
    if not 0.0 < theta <= math.pi:
        raise DomainError(f"scattering angle must lie in (0, pi], got {theta}")
    return 2.0 * species.k * math.sin(0.5 * theta)


def polarizability_parameter(species: AtomSpecies, n: float, delta: float) -> float:
    """|n alpha| for the two-level polarizability 6 pi lambdabar^3 Gamma / (Delta + i Gamma)."""
    gamma = species.linewidth_gamma
    alpha = 6.0 * math.pi * species.reduced_wavelength ** 3 * gamma / complex(delta, gamma)
    return abs(n * alpha)


def resonant_optical_density(species: AtomSpecies, n: float, length: float) -> float:
    """On-resonance optical density 6 pi n lambdabar^2 l."""
    if n < 0 or length < 0:
        raise DomainError("density and length must be non-negative")
    return 6.0 * math.pi * n * species.reduced_wavelength ** 2 * length


def rayleigh_rate(species: AtomSpecies, intensity: float, delta: float,
                  saturation: bool = True) -> float:
    """Steady-state two-level scattering rate per atom [photons/s].

    With ``saturation=False`` the ``s`` term in the denominator is dropped,
    giving the linear-response rate that is strictly proportional to
    intensity.
    """
    if intensity < 0:
        raise DomainError(f"intensity must be non-negative, got {intensity}")
    gamma = species.linewidth_gamma
    s = intensity / species.saturation_intensity
    denom = 1.0 + (2.0 * delta / gamma) ** 2
    if saturation:
        denom += s
    return 0.5 * gamma * s / denom


def peak_intensity(power: float, waist: float) -> float:
    """Peak intensity 2P / (pi w^2) of a Gaussian beam with 1/e^2 radius ``waist``."""
    if waist <= 0:
        raise DomainError(f"waist must be positive, got {waist}")
    return 2.0 * power / (math.pi * waist ** 2)
