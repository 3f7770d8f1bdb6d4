"""The two squeeze-modulated fluctuation factors."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mzgauss.interferometer import MziScenario
from mzgauss.oracle import evolve, measure_stats, prepare
from mzgauss.states import Coherent, GaussianPort, Squeeze
from mzgauss.upsilon import upsilon_minus, upsilon_plus

from conftest import relerr


def test_aligned_phase_extremes():
    # 2*theta_gamma - vartheta = 0 pins the exponential envelope values
    gamma, chi = Coherent(1.5, 0.3), Squeeze(0.7, 0.6)
    assert upsilon_plus(gamma, chi) == pytest.approx(1.5 ** 2 * math.exp(1.4))
    assert upsilon_minus(gamma, chi) == pytest.approx(1.5 ** 2 * math.exp(-1.4))


def test_no_squeezing_reduces_to_magnitude_squared():
    assert upsilon_plus(Coherent(2.0, 1.0), Squeeze(0.0)) == pytest.approx(4.0)
    assert upsilon_minus(Coherent(0.0), Squeeze(1.0, 0.4)) == 0.0


def test_orthogonal_phase_kills_sinh_term():
    # cos(pi/2) = 0: only the cosh part survives
    val = upsilon_plus(Coherent(1.0, math.pi / 4), Squeeze(0.3, 0.0))
    assert val == pytest.approx(math.cosh(0.6), rel=1e-14)


def test_antialigned_squeeze_flips_sign():
    val = upsilon_minus(Coherent(2.0, 0.0), Squeeze(1.0, math.pi))
    assert val == pytest.approx(4.0 * math.exp(2.0), rel=1e-14)


@given(mag=st.floats(0.0, 3.0), th=st.floats(0.0, 2 * math.pi),
       s=st.floats(0.0, 3.0), vt=st.floats(0.0, 2 * math.pi))
def test_sum_identity_and_product_bound(mag, th, s, vt):
    gamma, chi = Coherent(mag, th), Squeeze(s, vt)
    up, um = upsilon_plus(gamma, chi), upsilon_minus(gamma, chi)
    total = 2.0 * mag ** 2 * math.cosh(2.0 * s)
    assert abs(up + um - total) <= 1e-12 * max(total, 1.0)
    # the product bound is exact in math; in floats the cancellation in
    # cosh^2 - sinh^2 cos^2 is conditioned by cosh^2(2s) ulps
    slack = 1e-13 * math.cosh(2.0 * s) ** 2 + 1e-12
    assert up * um >= mag ** 4 * (1.0 - slack)
    assert mag ** 2 * math.exp(-2 * s) - 1e-9 <= up <= mag ** 2 * math.exp(2 * s) + 1e-9


@given(delta=st.floats(-7.0, 7.0), mag=st.floats(0.1, 2.0),
       th=st.floats(0.0, 2 * math.pi), s=st.floats(0.0, 2.0),
       vt=st.floats(0.0, 2 * math.pi))
def test_joint_rotation_invariance(delta, mag, th, s, vt):
    before = upsilon_plus(Coherent(mag, th), Squeeze(s, vt))
    after = upsilon_plus(Coherent(mag, th + delta), Squeeze(s, vt + 2 * delta))
    assert before == pytest.approx(after, rel=1e-10, abs=1e-10)


def test_quadrature_identity_against_oracle(rng):
    """Upsilon+- equal 4|gamma|^2 times a squeezed-vacuum quadrature variance.

    Measuring along the coherent amplitude direction theta_gamma picks up the
    -cos(2 theta_gamma - vartheta) fluctuation combination (upsilon-minus); the
    perpendicular axis picks up the + combination.  The interferometer at
    phi = 0 routes input port 1 straight to output 4, so the port-4 quadrature
    measurement reads the input mode directly; displacement does not change a
    quadrature variance, so the undisplaced state suffices.
    """
    for _ in range(5):
        mag = rng.uniform(0.2, 1.5)
        th = rng.uniform(0.0, 2 * math.pi)
        s = rng.uniform(0.05, 0.7)
        vt = rng.uniform(0.0, 2 * math.pi)
        state = prepare(MziScenario(
            GaussianPort.from_params(0.0, 0.0, s, vt), GaussianPort.vacuum()), 60)
        out = evolve(state, 0.0)
        for ups, angle in ((upsilon_minus, th), (upsilon_plus, th + 0.5 * math.pi)):
            var = (measure_stats(out, "quad_sq", angle)
                   - measure_stats(out, "quad", angle) ** 2)
            closed = ups(Coherent(mag, th), Squeeze(s, vt))
            assert relerr(closed, 4.0 * mag ** 2 * var) < 1e-8
