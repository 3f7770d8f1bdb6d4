"""Gaussian input preparations and their single-mode moments.

A port is prepared by squeezing the vacuum and then displacing it,
D(gamma) S(chi) |0>.  Every closed-form result downstream consumes only the
five moment quantities collected in :class:`PortMoments`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def canonical_angle(phase: float) -> float:
    """Map an angle to [0, 2*pi)."""
    phase = math.fmod(phase, TWO_PI)
    if phase < 0.0:
        phase += TWO_PI
    # fmod can return TWO_PI after the branch above for tiny negatives
    if phase >= TWO_PI:
        phase -= TWO_PI
    return phase


@dataclass(frozen=True)
class Coherent:
    """Displacement amplitude gamma = magnitude * exp(i * phase)."""

    magnitude: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0.0:
            raise ValueError("coherent magnitude must be >= 0")
        phase = 0.0 if self.magnitude == 0.0 else canonical_angle(self.phase)
        object.__setattr__(self, "phase", phase)

    @property
    def value(self) -> complex:
        return self.magnitude * cmath.exp(1j * self.phase)


@dataclass(frozen=True)
class Squeeze:
    """Squeeze parameter chi = factor * exp(i * phase)."""

    factor: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.factor < 0.0:
            raise ValueError("squeeze factor must be >= 0")
        phase = 0.0 if self.factor == 0.0 else canonical_angle(self.phase)
        object.__setattr__(self, "phase", phase)


@dataclass(frozen=True)
class GaussianPort:
    """One input mode: squeeze-then-displace, D(gamma) S(chi) |0>."""

    displacement: Coherent = Coherent()
    squeeze: Squeeze = Squeeze()

    @staticmethod
    def from_params(magnitude: float = 0.0, phase: float = 0.0,
                    factor: float = 0.0, squeeze_phase: float = 0.0) -> "GaussianPort":
        return GaussianPort(Coherent(magnitude, phase), Squeeze(factor, squeeze_phase))

    @staticmethod
    def vacuum() -> "GaussianPort":
        return GaussianPort()

    def rotated(self, delta: float) -> "GaussianPort":
        """Rotate the mode phase: gamma -> gamma e^{i delta}, chi -> chi e^{2i delta}."""
        disp = Coherent(self.displacement.magnitude, self.displacement.phase + delta)
        sqz = Squeeze(self.squeeze.factor, self.squeeze.phase + 2.0 * delta)
        return GaussianPort(disp, sqz)


@dataclass(frozen=True)
class PortMoments:
    """The five single-mode moments every closed-form formula consumes.

    mean_a   = <a>
    mean_a2  = <a^2>
    mean_n   = <n>
    var_n    = <n^2> - <n>^2
    corr_na  = <n a> - <n><a>
    """

    mean_a: complex
    mean_a2: complex
    mean_n: float
    var_n: float
    corr_na: complex

    def rotated(self, delta: float) -> "PortMoments":
        """Moments of the phase-rotated mode e^{i delta n} (a -> a e^{i delta})."""
        ph = cmath.exp(1j * delta)
        return PortMoments(
            mean_a=self.mean_a * ph,
            mean_a2=self.mean_a2 * ph * ph,
            mean_n=self.mean_n,
            var_n=self.var_n,
            corr_na=self.corr_na * ph,
        )


def port_moments(port: GaussianPort) -> PortMoments:
    """Moments of the squeezed-coherent state D(gamma) S(chi) |0>."""
    from .upsilon import upsilon_minus

    gamma = port.displacement.value
    s = port.squeeze.factor
    sq_ph = cmath.exp(1j * port.squeeze.phase)
    sh2 = math.sinh(s) ** 2
    sh_2s = math.sinh(2.0 * s)

    mean_a = gamma
    mean_a2 = gamma * gamma - 0.5 * sh_2s * sq_ph
    mean_n = abs(gamma) ** 2 + sh2
    var_n = 0.5 * sh_2s ** 2 + upsilon_minus(port.displacement, port.squeeze)
    corr_na = gamma * sh2 - 0.5 * gamma.conjugate() * sh_2s * sq_ph
    return PortMoments(mean_a, mean_a2, mean_n, var_n, corr_na)
