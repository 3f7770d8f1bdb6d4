"""The truncated Fock simulator itself: preparation, evolution, measurement, Fisher."""

import math

import numpy as np
import pytest

from mzgauss.errors import TruncationError
from mzgauss.fisher import fisher_matrix, qfi, qfi_closed_form
from mzgauss.interferometer import BsConvention, MziScenario
from mzgauss.oracle import (FockVector, apply_first_bs, evolve, measure_stats,
                            numerical_fisher, prepare, single_mode_moments)
from mzgauss.pmc import PmcSet, apply_pmc
from mzgauss.states import GaussianPort

from conftest import relerr


def _vac():
    return GaussianPort.vacuum()


def test_prepare_vacuum():
    state = prepare(MziScenario(_vac(), _vac()), 20)
    assert state.amplitudes[0, 0] == pytest.approx(1.0)
    assert np.sum(np.abs(state.amplitudes) ** 2) == pytest.approx(1.0, abs=1e-14)
    assert abs(state.amplitudes[1:, :]).max() == 0.0


def test_prepare_coherent_poisson_amplitudes():
    state = prepare(MziScenario(GaussianPort.from_params(1.0), _vac()), 40)
    col = state.amplitudes[0, :]  # port 1 lives on axis 1
    for n in range(8):
        expected = math.exp(-0.5) / math.sqrt(math.factorial(n))
        assert col[n].real == pytest.approx(expected, rel=1e-12)
        assert abs(col[n].imag) < 1e-14


def test_prepare_squeezed_vacuum_amplitudes():
    """Even-number amplitudes follow the tanh/cosh decomposition."""
    s, phase = 0.5, 0.9
    state = prepare(MziScenario(_vac(), GaussianPort.from_params(0, 0, s, phase)), 60)
    col = state.amplitudes[:, 0]  # port 0 lives on axis 0
    tau = -np.exp(1j * phase) * math.tanh(s)
    for n in range(0, 12, 2):
        k = n // 2
        expected = ((tau / 2.0) ** k * math.sqrt(math.factorial(n)) / math.factorial(k)
                    / math.sqrt(math.cosh(s)))
        assert col[n] == pytest.approx(expected, rel=1e-10)
        assert abs(col[n + 1]) < 1e-14
    moments = single_mode_moments(GaussianPort.from_params(0, 0, s, phase), 60)
    assert relerr(moments.mean_n, math.sinh(s) ** 2) < 1e-10


def test_truncation_error_raised_outside_remit():
    with pytest.raises(TruncationError) as info:
        prepare(MziScenario(GaussianPort.from_params(5.0), _vac()), 60)
    assert info.value.tail >= 1e-10


def test_evolve_preserves_norm_and_energy(rng):
    port1 = GaussianPort.from_params(1.1, 0.4, 0.5, 1.3)
    port0 = GaussianPort.from_params(0.7, 2.0, 0.4, 0.6)
    state = prepare(MziScenario(port1, port0), 60)
    energy_in = measure_stats(evolve(state, 0.0), "n4") + measure_stats(evolve(state, 0.0), "n5")
    for conv in BsConvention:
        for phi in rng.uniform(0, 2 * math.pi, 3):
            out = evolve(state, float(phi), conv)
            assert abs(out.norm() - 1.0) < 1e-12
            energy = measure_stats(out, "n4") + measure_stats(out, "n5")
            assert abs(energy - energy_in) < 1e-10


def test_zero_phase_swaps_modes():
    port1 = GaussianPort.from_params(0.9, 0.0, 0.3, 0.0)
    state = prepare(MziScenario(port1, _vac()), 50)
    out = evolve(state, 0.0)
    n1_in = 0.9 ** 2 + math.sinh(0.3) ** 2
    assert measure_stats(out, "n4") == pytest.approx(n1_in, rel=1e-12)
    assert measure_stats(out, "n5") == pytest.approx(0.0, abs=1e-12)


def test_single_photon_interference():
    amps = np.zeros((12, 12), dtype=complex)
    amps[0, 1] = 1.0
    state = FockVector(amps, 11)
    for phi in (0.0, 0.7, math.pi / 2, 2.5):
        out = evolve(state, phi)
        assert measure_stats(out, "n4") == pytest.approx(math.cos(phi / 2) ** 2, abs=1e-12)


def test_vacuum_quadrature_variance():
    state = prepare(MziScenario(_vac(), _vac()), 20)
    out = evolve(state, 1.0)
    assert measure_stats(out, "quad") == pytest.approx(0.0, abs=1e-14)
    assert measure_stats(out, "quad_sq") == pytest.approx(0.25, abs=1e-12)
    for obs in ("n4", "n5", "n_diff", "n4_sq", "n_diff_sq"):
        assert measure_stats(out, obs) == pytest.approx(0.0, abs=1e-14)


def test_unknown_observable_rejected():
    state = prepare(MziScenario(_vac(), _vac()), 10)
    with pytest.raises(ValueError):
        measure_stats(state, "parity")


def test_opposite_squeezers_pass_the_first_bs_unattenuated():
    """zeta = -xi turns into two equal-and-opposite squeezed vacuums inside."""
    r, theta = 0.6, 0.8
    port0 = GaussianPort.from_params(0, 0, r, theta)
    port1 = GaussianPort.from_params(0, 0, r, theta + math.pi)
    state = prepare(MziScenario(port1, port0), 60)
    inside = apply_first_bs(state)

    v_plus = prepare(MziScenario(_vac(), GaussianPort.from_params(0, 0, r, theta)), 60)
    v_minus = prepare(MziScenario(GaussianPort.from_params(0, 0, r, theta + math.pi), _vac()), 60)
    target = FockVector(np.outer(v_plus.amplitudes[:, 0], v_minus.amplitudes[0, :]), 60)
    assert inside.fidelity(target) >= 1.0 - 1e-8


def test_equal_squeezers_remove_all_phase_dependence():
    port = GaussianPort.from_params(0, 0, 0.5, 1.1)
    state = prepare(MziScenario(port, port), 60)
    values = [measure_stats(evolve(state, phi), "n_diff")
              for phi in np.linspace(0.0, 2 * math.pi, 17)]
    assert max(values) - min(values) < 1e-9
    # central finite differences of the mean vanish everywhere
    h = 1e-3
    for phi in (0.3, 1.2, 2.9, 4.4):
        slope = (measure_stats(evolve(state, phi + h), "n_diff")
                 - measure_stats(evolve(state, phi - h), "n_diff")) / (2 * h)
        assert abs(slope) < 1e-9


def test_general_scenario_mean_matches_closed_form():
    port1 = GaussianPort.from_params(1.0, 0.0, 0.4, 0.0)
    port0 = GaussianPort.from_params(0.5, 0.0, 0.5, 0.0)
    out = evolve(prepare(MziScenario(port1, port0), 50), 1.0)
    assert relerr(measure_stats(out, "n_diff"), -0.491799675253796) < 1e-8


def test_numerical_fisher_examples():
    sc = MziScenario(GaussianPort.from_params(1.0), _vac())
    fm = numerical_fisher(sc, 40)
    assert abs(fm.f_dd - 1.0) < 1e-4

    port1 = GaussianPort.from_params(1.0, 0.0, 0.4, math.pi)
    port0 = GaussianPort.from_params(0.0, 0.0, 0.5, 0.0)
    fm = numerical_fisher(MziScenario(port1, port0), 60)
    assert relerr(fm.f_dd, math.e + math.sinh(0.9) ** 2) < 1e-6
    assert abs(fm.f_sd) < 1e-8

    port1, port0 = apply_pmc(PmcSet.PMC3, 0.0, 0.8, 0.5, 0.5, 0.4)
    sc3 = MziScenario(port1, port0)
    fd = numerical_fisher(sc3, 60)
    closed = fisher_matrix(sc3)
    assert relerr(qfi(fd), qfi(closed)) < 1e-4
    assert relerr(qfi(fd), 2.123472941) < 1e-4
    assert relerr(abs(fd.f_sd), abs(closed.f_sd)) < 1e-4  # sign is convention bound


def test_numerical_fisher_cube_convention():
    port1, port0 = apply_pmc(PmcSet.PMC3, 0.0, 0.8, 0.5, 0.5, 0.4, BsConvention.CUBE)
    sc = MziScenario(port1, port0, BsConvention.CUBE)
    fd = numerical_fisher(sc, 60)
    closed = fisher_matrix(sc)
    assert relerr(qfi(fd), qfi(closed)) < 1e-4
    assert relerr(qfi(fd), qfi_closed_form(0.8, 0.5, 0.5, 0.4, pmc=PmcSet.PMC3)) < 1e-4


def test_numerical_fisher_step_validation():
    sc = MziScenario(GaussianPort.from_params(0.5), _vac())
    with pytest.raises(ValueError):
        numerical_fisher(sc, 40, h=1e-6)
    with pytest.raises(ValueError):
        numerical_fisher(sc, 40, h=1e-2)
    # a step at the coarse end still passes the Richardson consistency check
    coarse = numerical_fisher(sc, 40, h=1e-3)
    fine = numerical_fisher(sc, 40, h=2e-5)
    assert relerr(coarse.f_dd, fine.f_dd, floor=1e-6) < 1e-5
