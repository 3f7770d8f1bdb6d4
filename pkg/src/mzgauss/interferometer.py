"""Mach-Zehnder scenario container and beam-splitter conventions.

Two balanced 50/50 conventions are supported.  They differ by reflection
phases only, which remaps optimal input phase relations but leaves every
attainable optimum unchanged.  ``mode_map`` returns the input->output
annihilation-operator coefficients for the full interferometer at total
internal phase shift phi; global output phases are dropped.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidEfficiency
from .states import GaussianPort

# phase rotation applied to input port 0 that turns the cube convention into
# the symmetric one (up to an unmeasurable phase on output port 5)
CUBE_PORT0_ROTATION = -0.5 * math.pi


class BsConvention(enum.Enum):
    SYMMETRIC = "symmetric"
    CUBE = "cube"


@dataclass(frozen=True)
class MziScenario:
    """Two input ports, BS convention, total internal phase and detector efficiency.

    ``port1`` is the mode carrying the primary coherent source; ``port0`` the
    other input.  ``phase`` is the total internal shift (unknown part plus the
    experimentally controlled part); only the total enters any formula.
    """

    port1: GaussianPort
    port0: GaussianPort
    convention: BsConvention = BsConvention.SYMMETRIC
    phase: float = 0.0
    efficiency: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise InvalidEfficiency(f"efficiency must be in (0, 1], got {self.efficiency}")

    def with_phase(self, phase: float) -> "MziScenario":
        return MziScenario(self.port1, self.port0, self.convention, phase, self.efficiency)

    def with_efficiency(self, efficiency: float) -> "MziScenario":
        return MziScenario(self.port1, self.port0, self.convention, self.phase, efficiency)


def mode_map(convention: BsConvention, phi: float) -> np.ndarray:
    """2x2 coefficient table c with a_out[i] = c[i, 0] a_0 + c[i, 1] a_1.

    Row 0 is output port 4, row 1 is output port 5; columns are input ports
    0 and 1.  The table is unitary for every phi.
    """
    half = 0.5 * phi
    s, c = math.sin(half), math.cos(half)
    if convention is BsConvention.SYMMETRIC:
        return np.array([[-s, c], [c, s]], dtype=complex)
    return np.array([[1j * s, c], [c, 1j * s]], dtype=complex)
