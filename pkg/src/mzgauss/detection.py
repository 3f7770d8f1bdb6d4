"""Means, variances, sensitivities and working points of the detection schemes.

Three realistic read-outs of the interferometer are modeled: the photocurrent
difference between both output ports, the intensity of output port 4 alone,
and balanced homodyne detection of the port-4 quadrature.  Every quantity is
computed from the two ports' moments through one generic path; the cube
beam-splitter convention enters as a phase rotation of port 0.

Where the phase sensitivity loses meaning (vanishing slope of the mean, or a
parameter choice that removes all phase dependence from the observable) the
infinity marker is returned instead of raising.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._minimize import golden_minimize
from .errors import FlatObjective, NegativeVariance
from .interferometer import CUBE_PORT0_ROTATION, BsConvention, MziScenario
from .states import TWO_PI, PortMoments, port_moments


@dataclass(frozen=True)
class DifferenceIntensity:
    """Observable n4 - n5."""


@dataclass(frozen=True)
class SingleModeIntensity:
    """Observable n4."""


@dataclass(frozen=True)
class Homodyne:
    """Port-4 quadrature at local-oscillator phase ``local_phase``.

    ``None`` keeps the oscillator in phase with the port-1 coherent source.
    """

    local_phase: float | None = None


DetectionScheme = Union[DifferenceIntensity, SingleModeIntensity, Homodyne]


@dataclass(frozen=True)
class SensitivityPoint:
    phase: float
    delta_phi: float  # +inf marks an undefined sensitivity at this phase

    def __post_init__(self):
        if not (self.delta_phi > 0.0 or math.isinf(self.delta_phi)):
            raise ValueError(f"delta_phi must be positive or +inf, got {self.delta_phi}")


def effective_moments(scenario: MziScenario) -> tuple[PortMoments, PortMoments]:
    """(port0, port1) moments with the cube convention folded into port 0."""
    p0 = port_moments(scenario.port0)
    p1 = port_moments(scenario.port1)
    if scenario.convention is BsConvention.CUBE:
        p0 = p0.rotated(CUBE_PORT0_ROTATION)
    return p0, p1


def _local_phase(scheme: Homodyne, scenario: MziScenario) -> float:
    if scheme.local_phase is None:
        return scenario.port1.displacement.phase
    return scheme.local_phase


def _checked_variance(value: float) -> float:
    if value < -1e-9:
        raise NegativeVariance(f"closed-form variance evaluated to {value}")
    return max(value, 0.0)


# cross-port combinations shared by several formulas
def _pair_terms(p0: PortMoments, p1: PortMoments):
    base = (p0.mean_n + p1.mean_n
            + 2.0 * (p0.mean_n * p1.mean_n - abs(p0.mean_a) ** 2 * abs(p1.mean_a) ** 2))
    cross = (p0.mean_a2 * p1.mean_a2.conjugate()
             - p0.mean_a ** 2 * p1.mean_a.conjugate() ** 2).real
    return base, cross


def _nd_mean(p0, p1, phi):
    return (math.cos(phi) * (p1.mean_n - p0.mean_n)
            - 2.0 * math.sin(phi) * (p0.mean_a * p1.mean_a.conjugate()).real)


def _nd_slope(p0, p1, phi):
    return abs(math.sin(phi) * (p0.mean_n - p1.mean_n)
               - 2.0 * math.cos(phi) * (p0.mean_a * p1.mean_a.conjugate()).real)


def _nd_var(p0, p1, phi):
    base, cross = _pair_terms(p0, p1)
    corr = (p0.corr_na.conjugate() * p1.mean_a
            - p0.mean_a * p1.corr_na.conjugate()).real
    return (math.cos(phi) ** 2 * (p0.var_n + p1.var_n)
            + math.sin(phi) ** 2 * (base + 2.0 * cross)
            + 2.0 * math.sin(2.0 * phi) * corr)


def _n4_mean(p0, p1, phi):
    half = 0.5 * phi
    return (math.sin(half) ** 2 * p0.mean_n + math.cos(half) ** 2 * p1.mean_n
            - math.sin(phi) * (p0.mean_a * p1.mean_a.conjugate()).real)


def _n4_slope(p0, p1, phi):
    return 0.5 * _nd_slope(p0, p1, phi)


def _n4_var(p0, p1, phi):
    half = 0.5 * phi
    sin_phi = math.sin(phi)
    base, cross = _pair_terms(p0, p1)
    return (math.sin(half) ** 4 * p0.var_n + math.cos(half) ** 4 * p1.var_n
            + 0.25 * sin_phi ** 2 * base + 0.5 * sin_phi ** 2 * cross
            - sin_phi * (p0.mean_a * p1.mean_a.conjugate()).real
            - 2.0 * math.sin(half) ** 2 * sin_phi * (p0.corr_na.conjugate() * p1.mean_a).real
            - 2.0 * math.cos(half) ** 2 * sin_phi * (p0.mean_a * p1.corr_na.conjugate()).real)


def _quad_port_var(p: PortMoments, phi_l: float) -> float:
    """Quadrature variance of a single mode at angle phi_l (vacuum gives 1/4)."""
    centered = p.mean_a2 - p.mean_a ** 2
    return 0.25 + 0.5 * ((cmath.exp(-2j * phi_l) * centered).real
                         + p.mean_n - abs(p.mean_a) ** 2)


def _x_mean(p0, p1, phi, phi_l):
    half = 0.5 * phi
    rot = cmath.exp(-1j * phi_l)
    return (-math.sin(half) * (rot * p0.mean_a).real
            + math.cos(half) * (rot * p1.mean_a).real)


def _x_slope(p0, p1, phi, phi_l):
    half = 0.5 * phi
    rot = cmath.exp(-1j * phi_l)
    return 0.5 * abs(math.cos(half) * (rot * p0.mean_a).real
                     + math.sin(half) * (rot * p1.mean_a).real)


def _x_var(p0, p1, phi, phi_l):
    half = 0.5 * phi
    return (math.sin(half) ** 2 * _quad_port_var(p0, phi_l)
            + math.cos(half) ** 2 * _quad_port_var(p1, phi_l))


def observable_mean(scheme: DetectionScheme, scenario: MziScenario) -> float:
    p0, p1 = effective_moments(scenario)
    phi = scenario.phase
    if isinstance(scheme, DifferenceIntensity):
        return _nd_mean(p0, p1, phi)
    if isinstance(scheme, SingleModeIntensity):
        return _n4_mean(p0, p1, phi)
    return _x_mean(p0, p1, phi, _local_phase(scheme, scenario))


def observable_variance(scheme: DetectionScheme, scenario: MziScenario) -> float:
    p0, p1 = effective_moments(scenario)
    phi = scenario.phase
    if isinstance(scheme, DifferenceIntensity):
        return _checked_variance(_nd_var(p0, p1, phi))
    if isinstance(scheme, SingleModeIntensity):
        return _checked_variance(_n4_var(p0, p1, phi))
    return _checked_variance(_x_var(p0, p1, phi, _local_phase(scheme, scenario)))


def mean_slope(scheme: DetectionScheme, scenario: MziScenario) -> float:
    """|d<A>/dphi| at the scenario phase, from the closed-form derivative."""
    p0, p1 = effective_moments(scenario)
    phi = scenario.phase
    if isinstance(scheme, DifferenceIntensity):
        return _nd_slope(p0, p1, phi)
    if isinstance(scheme, SingleModeIntensity):
        return _n4_slope(p0, p1, phi)
    return _x_slope(p0, p1, phi, _local_phase(scheme, scenario))


def sensitivity(scheme: DetectionScheme, scenario: MziScenario) -> SensitivityPoint:
    """Delta phi = sqrt(variance) / |slope| at the scenario phase."""
    slope = mean_slope(scheme, scenario)
    if slope == 0.0:
        return SensitivityPoint(scenario.phase, math.inf)
    var = observable_variance(scheme, scenario)
    return SensitivityPoint(scenario.phase, math.sqrt(var) / slope)


# --- optimal working points ---------------------------------------------------

def _evaluate_candidates(scheme, scenario, candidates) -> SensitivityPoint:
    best = None
    for phi in candidates:
        phi = phi % TWO_PI
        point = sensitivity(scheme, scenario.with_phase(phi))
        if best is None or point.delta_phi < best.delta_phi or (
                point.delta_phi == best.delta_phi and phi < best.phase):
            best = point
    return best


def _numeric_optimum(scheme, scenario) -> SensitivityPoint:
    coarse = 720
    phis = np.linspace(0.0, TWO_PI, coarse, endpoint=False)
    vals = np.array([sensitivity(scheme, scenario.with_phase(p)).delta_phi for p in phis])
    if not np.isfinite(vals).any():
        raise FlatObjective("phase sensitivity is infinite for every internal phase")
    k = int(np.argmin(vals))
    step = TWO_PI / coarse

    def objective(phi):
        return sensitivity(scheme, scenario.with_phase(phi % TWO_PI)).delta_phi

    x, fx = golden_minimize(objective, phis[k] - step, phis[k] + step, tol=1e-9)
    return SensitivityPoint(x % TWO_PI, fx)


def difference_abcdf(scenario: MziScenario) -> tuple[float, float, float, float, float]:
    """Coefficients (A, B, C, D, F) of the difference-intensity sensitivity.

    Delta^2 N_d = A cos^2 phi + B sin^2 phi + C sin 2phi and the slope of the
    mean is |D sin phi + F cos phi|.
    """
    p0, p1 = effective_moments(scenario)
    base, cross = _pair_terms(p0, p1)
    a = p0.var_n + p1.var_n
    b = base + 2.0 * cross
    c = 2.0 * (p0.corr_na.conjugate() * p1.mean_a - p0.mean_a * p1.corr_na.conjugate()).real
    d = p1.mean_n - p0.mean_n
    f = 2.0 * (p0.mean_a * p1.mean_a.conjugate()).real
    return a, b, c, d, f


def optimal_working_point(scheme: DetectionScheme, scenario: MziScenario) -> SensitivityPoint:
    """Best (phi_opt, Delta phi) over the free internal phase.

    Uses the analytic stationarity conditions where they exist (difference
    intensity always, single mode for an undisplaced port 0, homodyne always)
    and falls back to a coarse scan plus golden-section refinement otherwise.
    The arctan branch ambiguity is settled by evaluating both candidates.
    """
    p0, p1 = effective_moments(scenario)

    if isinstance(scheme, (DifferenceIntensity, SingleModeIntensity)):
        d = p1.mean_n - p0.mean_n
        f = 2.0 * (p0.mean_a * p1.mean_a.conjugate()).real
        if d == 0.0 and f == 0.0:
            raise FlatObjective("the intensity mean carries no phase dependence")

    if isinstance(scheme, DifferenceIntensity):
        a, b, c, d, f = difference_abcdf(scenario)
        num = a * d - c * f
        den = b * f - c * d
        if num == 0.0 and den == 0.0:
            return _numeric_optimum(scheme, scenario)
        tau = math.atan2(num, den) % math.pi
        return _evaluate_candidates(scheme, scenario, (tau, tau + math.pi))

    if isinstance(scheme, SingleModeIntensity):
        if abs(p0.mean_a) == 0.0 and p0.var_n > 0.0:
            # undisplaced port 0: phi_opt = +/- 2 arctan (var1/var0)^(1/4)
            phi_opt = 2.0 * math.atan((p1.var_n / p0.var_n) ** 0.25)
            return _evaluate_candidates(scheme, scenario, (phi_opt,))
        return _numeric_optimum(scheme, scenario)

    phi_l = _local_phase(scheme, scenario)
    c0 = (cmath.exp(-1j * phi_l) * p0.mean_a).real
    d1 = (cmath.exp(-1j * phi_l) * p1.mean_a).real
    if c0 == 0.0 and d1 == 0.0:
        raise FlatObjective("homodyne mean carries no phase dependence")
    a = _quad_port_var(p0, phi_l)
    b = _quad_port_var(p1, phi_l)
    phi_opt = 2.0 * math.atan2(b * d1, a * c0)
    return _evaluate_candidates(scheme, scenario, (phi_opt,))
