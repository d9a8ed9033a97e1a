"""Pauli blocking of light scattering in a trapped, degenerate Fermi gas.

Ideal-Fermi-gas thermodynamics, static structure factors, trap-averaged
scattering suppression, recoil heating during a probe pulse and the
detuning scaling of inelastic pair scattering.
"""

from .errors import ConfigError, DomainError, FitError, NumericalError
from .species import LITHIUM_6, AtomSpecies, ScatteringGeometry

__version__ = "0.1.0"

__all__ = [
    "AtomSpecies",
    "ConfigError",
    "DomainError",
    "FitError",
    "LITHIUM_6",
    "NumericalError",
    "ScatteringGeometry",
    "__version__",
]
