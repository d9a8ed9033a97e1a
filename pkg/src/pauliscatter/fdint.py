"""Complete Fermi-Dirac integrals in the normalised convention

    F_j(eta) = 1/Gamma(j+1) * int_0^inf t^j / (exp(t - eta) + 1) dt
             = -Li_{j+1}(-exp(eta))

so that F_j(eta) -> exp(eta) in the Boltzmann limit. Evaluation paths:
the alternating fugacity series (z <= 0.9), adaptive quadrature (everything
else), and the Sommerfeld expansion, which is exposed for cross-checks in
the strongly degenerate regime. For integer j the Sommerfeld series
terminates and F_j(eta) = P_j(eta) + (-1)^j F_j(-eta) holds exactly; that
reflection routes eta >= -ln(0.9) back to the fast series.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from .errors import DomainError, NumericalError

SUPPORTED_ORDERS = (-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0)

# above ln(0.9) the series converges too slowly for a fixed term budget
SERIES_LIMIT = math.log(0.9)
_SERIES_TERMS = np.arange(1, 400, dtype=float)
_TAIL = 60.0


def _check_order(j):
    if not any(abs(j - s) < 1e-12 for s in SUPPORTED_ORDERS):
        raise DomainError(f"unsupported Fermi-Dirac order j={j}; supported: {SUPPORTED_ORDERS}")


def fd_series(j: float, eta: float) -> float:
    """sum_k (-1)^(k+1) z^k / k^(j+1), valid for z = exp(eta) <= 1."""
    if eta > 0:
        raise DomainError("fugacity series requires eta <= 0")
    k = _SERIES_TERMS
    terms = np.exp(k * eta - (j + 1.0) * np.log(k))
    signs = np.where(k % 2 == 1, 1.0, -1.0)
    # sum smallest terms first
    return float(np.sum((signs * terms)[::-1]))


def _integrand(s, j, eta):
    # t = s^2 removes the t^j branch point at the origin for half-integer j
    return 2.0 * s ** (2.0 * j + 1.0) * special.expit(eta - s * s)


def fd_quadrature(j: float, eta: float, epsrel: float = 1e-13) -> float:
    """Direct adaptive quadrature of the defining integral."""
    if j <= -1:
        raise DomainError("quadrature needs j > -1")
    upper = math.sqrt(max(eta, 0.0) + _TAIL)
    pieces = []
    if eta > 0:
        knee = math.sqrt(eta)
        pieces = [(0.0, knee), (knee, upper)]
    else:
        pieces = [(0.0, upper)]
    total = 0.0
    for a, b in pieces:
        value, err = integrate.quad(_integrand, a, b, args=(j, eta),
                                    epsabs=0.0, epsrel=epsrel, limit=200)
        total += value
    if not math.isfinite(total):
        raise NumericalError("Fermi-Dirac quadrature failed", j=j, eta=eta)
    return total / math.gamma(j + 1.0)


def fd_sommerfeld(j: float, eta: float, terms: int = 8) -> float:
    """Sommerfeld asymptotic expansion for eta >> 1.

    F_j(eta) ~ eta^(j+1)/Gamma(j+2) * [1 + sum_k 2(1 - 2^(1-2k)) zeta(2k)
               Gamma(j+2)/Gamma(j+2-2k) eta^(-2k)]

    Exponentially small corrections of order exp(-eta) are dropped.
    """
    if eta <= 0:
        raise DomainError("Sommerfeld expansion requires eta > 0")
    total = 1.0
    for k in range(1, terms + 1):
        coeff = 2.0 * (1.0 - 2.0 ** (1 - 2 * k)) * special.zeta(2 * k)
        # Gamma(j+2)/Gamma(j+2-2k) as a falling factorial; terminates for integer j
        falling = special.gamma(j + 2.0) * special.rgamma(j + 2.0 - 2 * k)
        total += coeff * falling * eta ** (-2 * k)
    return eta ** (j + 1.0) / math.gamma(j + 2.0) * total


def fd_reflection(j: float, eta: float) -> float:
    """Exact integer-order reflection F_j(eta) = P_j(eta) + (-1)^j F_j(-eta)."""
    if j != int(j) or j < 0:
        raise DomainError("reflection formula needs a non-negative integer order")
    if -eta > SERIES_LIMIT:
        raise DomainError("reflection needs exp(-eta) <= 0.9")
    polynomial = fd_sommerfeld(j, eta, terms=int(j) // 2 + 1)
    return polynomial + (-1.0) ** int(j) * fd_series(j, -eta)


def _fd_scalar(j, eta):
    if eta <= SERIES_LIMIT:
        return fd_series(j, eta)
    if j == int(j) and j >= 0 and -eta <= SERIES_LIMIT:
        return fd_reflection(j, eta)
    return fd_quadrature(j, eta)


def fermi_dirac_integral(j: float, eta):
    """Normalised complete Fermi-Dirac integral F_j(eta).

    ``eta`` may be a scalar or an array; the return type follows it.
    Relative accuracy is better than 1e-10 everywhere.
    """
    _check_order(j)
    if np.ndim(eta) == 0:
        return _fd_scalar(j, float(eta))
    eta = np.asarray(eta, dtype=float)
    out = np.empty_like(eta)
    for idx, value in np.ndenumerate(eta):
        out[idx] = _fd_scalar(j, value)
    return out


def neg_polylog(s: float, eta):
    """-Li_s(-exp(eta)) = F_{s-1}(eta)."""
    return fermi_dirac_integral(s - 1.0, eta)
