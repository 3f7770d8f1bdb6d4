"""Phase-matching-condition families, regime boundaries and the phase-grid maximizer.

Three families of input phase relations each maximize the QFI in a region of
the (|alpha|, |beta|) plane; the boundary amplitudes below are the exact
crossing points of the corresponding closed-form QFI expressions.  The
brute-force grid maximizer over the three free phase differences validates the
analytic families.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._minimize import golden_minimize
from .errors import UndefinedBoundary
from .fisher import phase_fisher_elements, qfi_closed_form, qfi_from_elements
from .interferometer import BsConvention
from .states import TWO_PI, GaussianPort


class PmcSet(enum.Enum):
    """Optimal phase-assignment families, all referenced to theta_alpha."""

    PMC1 = "pmc1"                      # squeezers in anti-phase, coherents in phase
    PMC2 = "pmc2"                      # everything in phase (high-coherent optimum)
    PMC3 = "pmc3"                      # coherents pi/2 apart (low-coherent optimum)
    SQZVAC_OPTIMAL = "sqzvac_optimal"  # beta = 0 family, squeezers in anti-phase
    SQZVAC_WIDEBAND = "sqzvac_wideband"  # beta = 0 family, all phases aligned


def apply_pmc(pmc: PmcSet, theta_alpha: float, alpha: float, beta: float,
              r: float, z: float,
              convention: BsConvention = BsConvention.SYMMETRIC) -> tuple[GaussianPort, GaussianPort]:
    """Concrete (port1, port0) preparations satisfying the family's constraints.

    Under the cube convention the port-0 phases shift (squeeze phase by pi,
    displacement phase by pi/2) so that the same physical optimum is realized.
    """
    theta = 2.0 * theta_alpha
    if pmc in (PmcSet.PMC1, PmcSet.SQZVAC_OPTIMAL):
        phi_zeta = theta + math.pi
        theta_beta = theta_alpha
    elif pmc in (PmcSet.PMC2, PmcSet.SQZVAC_WIDEBAND):
        phi_zeta = theta
        theta_beta = theta_alpha
    elif pmc is PmcSet.PMC3:
        theta_beta = theta_alpha - 0.5 * math.pi
        phi_zeta = 2.0 * theta_beta
    else:
        raise ValueError(f"unknown PMC family {pmc!r}")

    if convention is BsConvention.CUBE:
        theta += math.pi
        theta_beta += 0.5 * math.pi

    port1 = GaussianPort.from_params(alpha, theta_alpha, z, phi_zeta)
    port0 = GaussianPort.from_params(beta, theta_beta, r, theta)
    return port1, port0


def single_mode_alpha_lim(z: float) -> float:
    """Amplitude above which the aligned-phase single-mode working point wins (beta = 0)."""
    c2z = math.cosh(2.0 * z)
    return math.sqrt(c2z + math.sqrt(4.0 * c2z ** 2 - 3.0)) / 2.0


@dataclass(frozen=True)
class RegimeBoundaries:
    """Limit amplitudes partitioning the (|alpha|, |beta|) plane at fixed r, z.

    ``alpha_13``/``alpha_23`` are the small-|beta| crossings of families 1/3
    and 2/3, ``alpha_circ`` the triple point where all three beta curves meet,
    and ``beta_12`` the (|alpha|-independent) crossing of families 1 and 2.
    ``beta_23``/``beta_13`` are curves over |alpha|, defined only where their
    radicands are positive.
    """

    r: float
    z: float
    s_helper: float
    alpha_13: float
    alpha_23: float
    alpha_circ: float
    beta_12: float
    alpha_lim_single: float

    def beta_23(self, alpha: float) -> float:
        s2r, s2z = math.sinh(2.0 * self.r), math.sinh(2.0 * self.z)
        e2z = math.exp(2.0 * self.z)
        den = 4.0 * alpha ** 2 * e2z * math.cosh(self.r - self.z) ** 2 - s2r * s2z
        num = math.exp(-2.0 * self.r) * s2r * s2z * (self.s_helper + alpha ** 2 * e2z)
        if num == 0.0 and den > 0.0:
            return 0.0
        if den <= 0.0:
            raise UndefinedBoundary(
                f"beta_23 undefined at alpha={alpha}: radicand denominator {den:.3e} <= 0"
            )
        return math.sqrt(num / den)

    def beta_13(self, alpha: float) -> float:
        s2z = math.sinh(2.0 * self.z)
        if s2z == 0.0:
            raise UndefinedBoundary("beta_13 undefined for z = 0")
        e2r, e2z = math.exp(2.0 * self.r), math.exp(2.0 * self.z)
        radicand = (alpha ** 2 * (2.0 * e2r * math.cosh(self.r - self.z) ** 2 / s2z - 1.0)
                    - self.s_helper / e2z)
        if radicand < 0.0:
            raise UndefinedBoundary(
                f"beta_13 undefined at alpha={alpha}: radicand {radicand:.3e} < 0"
            )
        return math.exp(self.z - self.r) * math.sqrt(radicand)


def boundaries(r: float, z: float) -> RegimeBoundaries:
    """Evaluate every closed-form limit amplitude at squeeze factors (r, z)."""
    if r < 0.0 or z < 0.0:
        raise ValueError("squeeze factors must be >= 0")
    s2r, s2z = math.sinh(2.0 * r), math.sinh(2.0 * z)
    e2r, e2z = math.exp(2.0 * r), math.exp(2.0 * z)
    s_helper = 0.5 * (s2r ** 2 + s2z ** 2)
    shared = e2r * (e2r + 2.0 * e2z) + 1.0

    alpha_13 = math.sqrt(2.0 * s_helper * s2z / shared)
    alpha_23 = math.exp(-z) * math.sqrt(s2r * s2z) / (2.0 * math.cosh(r - z))
    alpha_circ = math.sqrt(s2z * (e2r * s2r + 2.0 * s_helper) / shared)
    beta_12 = math.sqrt(0.5 * s2r)
    return RegimeBoundaries(
        r=r, z=z, s_helper=s_helper,
        alpha_13=alpha_13, alpha_23=alpha_23,
        alpha_circ=alpha_circ, beta_12=beta_12,
        alpha_lim_single=single_mode_alpha_lim(z),
    )


_CLASSIFY_ORDER = (PmcSet.PMC1, PmcSet.PMC2, PmcSet.PMC3)


def classify(alpha: float, beta: float, r: float, z: float) -> PmcSet:
    """The family whose closed-form QFI is maximal at these magnitudes.

    Direct value comparison rather than boundary-table lookups, so the edge
    orderings of the atlas (including alpha_23 > alpha_13 and r = z) come out
    right automatically.  Exact ties resolve to PMC1 > PMC2 > PMC3.
    """
    values = {p: qfi_closed_form(alpha, beta, r, z, pmc=p) for p in _CLASSIFY_ORDER}
    best = max(values.values())
    for p in _CLASSIFY_ORDER:
        if values[p] == best:
            return p
    raise AssertionError("unreachable")


def _grid_qfi(alpha, beta, r, z, theta, phi_zeta, theta_beta, convention):
    f_ss, f_dd, f_sd = phase_fisher_elements(
        alpha, beta, r, z, theta, phi_zeta, theta_beta, 0.0, convention
    )
    return qfi_from_elements(f_ss, f_dd, f_sd)


def grid_search_qfi(alpha: float, beta: float, r: float, z: float,
                    resolution: int = 32,
                    convention: BsConvention = BsConvention.SYMMETRIC,
                    ) -> tuple[tuple[float, float, float], float]:
    """Exhaustive QFI maximization over the three free phases, then refinement.

    theta_alpha is fixed to 0 (a joint rotation of all phases leaves the QFI
    unchanged); the lattice covers (theta, phi_zeta, theta_beta) in [0, 2pi)^3.
    Returns the refined best phase triple and its QFI.
    """
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    axis = np.linspace(0.0, TWO_PI, resolution, endpoint=False)

    best_val = -math.inf
    best = (0.0, 0.0, 0.0)
    pz = axis[:, None]
    tb = axis[None, :]
    for th in axis:  # slab over theta keeps memory flat
        vals = _grid_qfi(alpha, beta, r, z, th, pz, tb, convention)
        k = int(np.argmax(vals))
        if vals.flat[k] > best_val:
            best_val = float(vals.flat[k])
            best = (float(th), float(axis[k // resolution]), float(axis[k % resolution]))

    step = TWO_PI / resolution
    point = list(best)
    for _ in range(3):  # coordinate-wise golden refinement
        for i in range(3):
            def neg(x, i=i):
                trial = list(point)
                trial[i] = x
                return -_grid_qfi(alpha, beta, r, z, *trial, convention)

            x, fx = golden_minimize(neg, point[i] - step, point[i] + step, tol=1e-10)
            if -fx >= best_val:
                point[i] = x
                best_val = -fx
    phases = tuple(float(x % TWO_PI) for x in point)
    return phases, best_val
