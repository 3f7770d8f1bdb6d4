"""Two-parameter Fisher information, QFI and the Cramer-Rao bound.

The generic path evaluates the matrix elements from the two ports' moments
alone (the input is separable, so every cross expectation factorizes).  The
closed-form path re-expresses the same elements through the Upsilon functions
and the optimal phase-matching families; both must agree to 1e-10 and are
tested against the finite-difference Fock oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMatrix, NonPositiveInformation
from .interferometer import BsConvention, MziScenario
from .states import port_moments

_NEG_CLAMP = 1e-9


@dataclass(frozen=True)
class FisherMatrix:
    """Elements of the 2x2 matrix over the sum/difference phase parameters."""

    f_ss: float
    f_dd: float
    f_sd: float

    def __post_init__(self):
        for name in ("f_ss", "f_dd"):
            val = getattr(self, name)
            if val < -_NEG_CLAMP:
                raise ValueError(f"{name} must be non-negative, got {val}")
            if val < 0.0:
                object.__setattr__(self, name, 0.0)


def fisher_matrix(scenario: MziScenario) -> FisherMatrix:
    """Fisher matrix of the scenario; the internal phase and efficiency do not enter."""
    p0 = port_moments(scenario.port0)
    p1 = port_moments(scenario.port1)
    m0, m1 = p0.mean_a, p1.mean_a
    c0, c1 = p0.corr_na, p1.corr_na

    f_ss = p0.var_n + p1.var_n
    base = p0.mean_n + p1.mean_n + 2.0 * (p0.mean_n * p1.mean_n - abs(m0) ** 2 * abs(m1) ** 2)
    cross = p0.mean_a2 * np.conj(p1.mean_a2) - m0 ** 2 * np.conj(m1) ** 2
    mixed = m0 * np.conj(m1) + c0 * np.conj(m1) + m0 * np.conj(c1)

    if scenario.convention is BsConvention.SYMMETRIC:
        f_dd = base - 2.0 * cross.real
        f_sd = 2.0 * mixed.imag
    else:
        f_dd = base + 2.0 * cross.real
        f_sd = 2.0 * mixed.real
    return FisherMatrix(f_ss=float(f_ss), f_dd=float(f_dd), f_sd=float(f_sd))


def qfi(fm: FisherMatrix) -> float:
    """Difference-parameter quantum Fisher information F_dd - F_sd^2 / F_ss."""
    if fm.f_ss < 1e-12:
        if abs(fm.f_sd) >= 1e-9:
            raise DegenerateMatrix(
                f"f_ss ~ 0 but f_sd = {fm.f_sd}; the matrix cannot be reduced"
            )
        return fm.f_dd
    return fm.f_dd - fm.f_sd ** 2 / fm.f_ss


def qcrb(fisher_information: float, shots: int = 1) -> float:
    """Phase-sensitivity floor 1 / sqrt(shots * F)."""
    if fisher_information <= 0.0:
        raise NonPositiveInformation(f"Fisher information must be > 0, got {fisher_information}")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    return 1.0 / math.sqrt(shots * fisher_information)


# --- closed forms ------------------------------------------------------------

def _ups(mag, two_s_cosh, two_s_sinh, angle, sign):
    return mag ** 2 * (two_s_cosh + sign * two_s_sinh * np.cos(angle))


def phase_fisher_elements(alpha, beta, r, z, theta, phi_zeta, theta_beta,
                          theta_alpha=0.0, convention: BsConvention = BsConvention.SYMMETRIC):
    """Closed-form (f_ss, f_dd, f_sd) for arbitrary input phases.

    Accepts scalars or broadcastable numpy arrays; the cube convention is the
    symmetric one with port 0 rotated by -pi/2 (squeeze phase by -pi).
    """
    if convention is BsConvention.CUBE:
        theta = np.asarray(theta) - math.pi
        theta_beta = np.asarray(theta_beta) - 0.5 * math.pi

    c2r, s2r = np.cosh(2.0 * r), np.sinh(2.0 * r)
    c2z, s2z = np.cosh(2.0 * z), np.sinh(2.0 * z)
    shr2, shz2 = np.sinh(r) ** 2, np.sinh(z) ** 2

    f_dd = (_ups(alpha, c2r, s2r, 2.0 * np.asarray(theta_alpha) - theta, +1)
            + _ups(beta, c2z, s2z, 2.0 * np.asarray(theta_beta) - phi_zeta, +1)
            + 0.5 * (c2r * c2z - s2r * s2z * np.cos(np.asarray(theta) - phi_zeta) - 1.0))
    f_ss = (0.5 * (s2r ** 2 + s2z ** 2)
            + _ups(beta, c2r, s2r, 2.0 * np.asarray(theta_beta) - theta, -1)
            + _ups(alpha, c2z, s2z, 2.0 * np.asarray(theta_alpha) - phi_zeta, -1))
    f_sd = alpha * beta * (
        s2r * np.sin(np.asarray(theta_alpha) + theta_beta - theta)
        - s2z * np.sin(np.asarray(theta_alpha) + theta_beta - phi_zeta)
        - 2.0 * (1.0 + shr2 + shz2) * np.sin(np.asarray(theta_alpha) - theta_beta)
    )
    return f_ss, f_dd, f_sd


def qfi_from_elements(f_ss, f_dd, f_sd):
    """Vector-friendly F_dd - F_sd^2 / F_ss with the vacuum case reduced to F_dd."""
    f_ss = np.asarray(f_ss, dtype=float)
    safe = np.where(f_ss < 1e-12, 1.0, f_ss)
    corr = np.where(f_ss < 1e-12, 0.0, np.asarray(f_sd) ** 2 / safe)
    out = np.asarray(f_dd) - corr
    return float(out) if out.ndim == 0 else out


def qfi_closed_form(alpha: float, beta: float, r: float, z: float,
                    pmc=None, convention: BsConvention = BsConvention.SYMMETRIC,
                    *, theta_alpha: float = 0.0, theta: float | None = None,
                    phi_zeta: float | None = None, theta_beta: float | None = None) -> float:
    """QFI from the published closed forms.

    With ``pmc`` given, evaluates that family's optimal-value expression (the
    value is convention independent; only the realizing phases move).  With
    ``pmc=None`` the three explicit phases are required and the general-phase
    element expressions are combined.
    """
    from .pmc import PmcSet

    if pmc is not None:
        e2r, e2z = math.exp(2.0 * r), math.exp(2.0 * z)
        if pmc in (PmcSet.PMC1, PmcSet.SQZVAC_OPTIMAL):
            return alpha ** 2 * e2r + beta ** 2 / e2z + math.sinh(r + z) ** 2
        if pmc in (PmcSet.PMC2, PmcSet.SQZVAC_WIDEBAND):
            return alpha ** 2 * e2r + beta ** 2 * e2z + math.sinh(r - z) ** 2
        if pmc is PmcSet.PMC3:
            top = (alpha * beta) ** 2 * (e2r + e2z) ** 2
            bottom = (0.5 * (math.sinh(2.0 * r) ** 2 + math.sinh(2.0 * z) ** 2)
                      + beta ** 2 * e2r + alpha ** 2 * e2z)
            corr = 0.0 if top == 0.0 else top / bottom
            return alpha ** 2 * e2r + beta ** 2 * e2z + math.sinh(r + z) ** 2 - corr
        raise ValueError(f"unknown PMC family {pmc!r}")

    if theta is None or phi_zeta is None or theta_beta is None:
        raise ValueError("explicit phases are required when no PMC family is given")
    f_ss, f_dd, f_sd = phase_fisher_elements(
        alpha, beta, r, z, theta, phi_zeta, theta_beta, theta_alpha, convention
    )
    return qfi_from_elements(f_ss, f_dd, f_sd)
