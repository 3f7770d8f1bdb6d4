"""Non-unit photo-detection efficiency, shared by all detectors.

Losses are the standard fictitious beam splitter of transmission sqrt(eta) in
front of each ideal detector.  For number observables that inflates the
variance by (1 - eta)/eta times the detected photon number; for homodyne it
adds (1 - eta)/(4 eta) of vacuum noise.  The slope of the mean scales out, so
only the numerator changes relative to the lossless sensitivity.
"""

from __future__ import annotations

import math

import numpy as np

from ._minimize import golden_minimize
from .detection import (DetectionScheme, DifferenceIntensity,
                        SensitivityPoint, SingleModeIntensity, _local_phase,
                        _n4_mean, _n4_slope, _n4_var, _nd_slope, _nd_var,
                        _x_slope, _x_var, effective_moments)
from .errors import FlatObjective, InvalidEfficiency
from .interferometer import MziScenario
from .states import TWO_PI


def lossy_sensitivity(scheme: DetectionScheme, scenario: MziScenario) -> SensitivityPoint:
    """Sensitivity at the scenario phase with detector efficiency scenario.efficiency."""
    eta = scenario.efficiency
    if not 0.0 < eta <= 1.0:
        raise InvalidEfficiency(f"efficiency must be in (0, 1], got {eta}")
    excess = (1.0 - eta) / eta

    p0, p1 = effective_moments(scenario)
    phi = scenario.phase
    if isinstance(scheme, DifferenceIntensity):
        slope = _nd_slope(p0, p1, phi)
        # n4 + n5 equals the conserved total input photon number
        var = _nd_var(p0, p1, phi) + excess * (p0.mean_n + p1.mean_n)
    elif isinstance(scheme, SingleModeIntensity):
        slope = _n4_slope(p0, p1, phi)
        var = _n4_var(p0, p1, phi) + excess * _n4_mean(p0, p1, phi)
    else:
        phi_l = _local_phase(scheme, scenario)
        slope = _x_slope(p0, p1, phi, phi_l)
        var = _x_var(p0, p1, phi, phi_l) + 0.25 * excess

    if slope == 0.0:
        return SensitivityPoint(phi, math.inf)
    return SensitivityPoint(phi, math.sqrt(max(var, 0.0)) / slope)


def lossy_optimal_working_point(scheme: DetectionScheme, scenario: MziScenario) -> SensitivityPoint:
    """Minimize the lossy sensitivity over the internal phase by scan plus refinement."""
    coarse = 720
    phis = np.linspace(0.0, TWO_PI, coarse, endpoint=False)
    vals = np.array([lossy_sensitivity(scheme, scenario.with_phase(p)).delta_phi for p in phis])
    if not np.isfinite(vals).any():
        raise FlatObjective("lossy phase sensitivity is infinite for every internal phase")
    k = int(np.argmin(vals))
    step = TWO_PI / coarse

    def objective(phi):
        return lossy_sensitivity(scheme, scenario.with_phase(phi % TWO_PI)).delta_phi

    x, fx = golden_minimize(objective, phis[k] - step, phis[k] + step, tol=1e-9)
    return SensitivityPoint(x % TWO_PI, fx)
