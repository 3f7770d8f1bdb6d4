"""Squeeze-modulated coherent fluctuation factors.

Both functions evaluate |gamma|^2 (cosh 2s +/- sinh 2s cos(2*theta_gamma - vartheta)).
They bound the fluctuations of a quadrature measurement on a squeezed-coherent
state and show up in every sensitivity and Fisher formula.  Implemented from
cosh/sinh directly; no exponential-difference forms.
"""

from __future__ import annotations

import math

from .states import Coherent, Squeeze


def _upsilon(gamma: Coherent, chi: Squeeze, sign: float) -> float:
    two_s = 2.0 * chi.factor
    angle = 2.0 * gamma.phase - chi.phase
    return gamma.magnitude ** 2 * (math.cosh(two_s) + sign * math.sinh(two_s) * math.cos(angle))


def upsilon_plus(gamma: Coherent, chi: Squeeze) -> float:
    """Enhanced-fluctuation factor; ranges over [|g|^2 e^{-2s}, |g|^2 e^{2s}]."""
    return _upsilon(gamma, chi, +1.0)


def upsilon_minus(gamma: Coherent, chi: Squeeze) -> float:
    """Reduced-fluctuation factor, the minus-sign companion of upsilon_plus."""
    return _upsilon(gamma, chi, -1.0)
