"""Bracketed root-finding for monotone scalar functions."""

from __future__ import annotations

import math

from scipy import optimize

from .errors import NumericalError


def find_root(func, x0: float, step: float = 1.0, growth: float = 2.0,
              max_expansions: int = 80, xtol: float = 1e-14, rtol: float = 1e-15):
    """Root of a monotone ``func`` starting from a guess ``x0``.

    The bracket is grown geometrically outward from ``x0`` until ``func``
    changes sign, then refined by Brent's method (bisection safeguarded
    secant / inverse-quadratic steps).
    """
    f0 = func(x0)
    if f0 == 0.0:
        return x0
    lo = hi = x0
    f_lo = f_hi = f0
    width = step
    for _ in range(max_expansions):
        lo, hi = x0 - width, x0 + width
        f_lo, f_hi = func(lo), func(hi)
        if math.copysign(1.0, f_lo) != math.copysign(1.0, f0):
            hi, f_hi = x0, f0
            break
        if math.copysign(1.0, f_hi) != math.copysign(1.0, f0):
            lo, f_lo = x0, f0
            break
        width *= growth
    else:
        raise NumericalError("could not bracket root", x0=x0, last_bracket=(lo, hi),
                             values=(f_lo, f_hi))
    try:
        root, info = optimize.brentq(func, lo, hi, xtol=xtol, rtol=rtol,
                                     maxiter=500, full_output=True)
    except (RuntimeError, ValueError) as exc:
        raise NumericalError(f"root refinement failed: {exc}", bracket=(lo, hi)) from exc
    if not info.converged:
        raise NumericalError("root refinement did not converge", bracket=(lo, hi),
                             iterations=info.iterations)
    return root
