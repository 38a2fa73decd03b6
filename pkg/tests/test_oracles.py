import cmath
import math

import pytest

from lambshift.kernel import PhiKernel
from lambshift.oracles import (
    kernel_via_spectral_series,
    shift_via_eps_real_axis,
)
from lambshift.shifts import QuantumState, lamb_shift


class TestSpectralSeries:
    def test_rejects_short_truncation(self):
        with pytest.raises(ValueError):
            kernel_via_spectral_series(3, 0, 1.0, 1.0, 12)

    def test_zero_phi_is_single_term(self):
        for n_max in (15, 60):
            got = kernel_via_spectral_series(4, 1, 1.3, 0.0, n_max).value
            want = math.sin(0.65) ** 2 * cmath.exp(-4j * 1.3)
            assert got == pytest.approx(want, rel=1e-14)

    def test_zero_time_vanishes(self):
        assert kernel_via_spectral_series(2, 0, 0.0, 0.9, 50).value == 0.0

    def test_truncation_monitor_decreases(self):
        prev = None
        for n_max in (20, 40, 80, 160):
            r = kernel_via_spectral_series(2, 0, 1.0, 0.5, n_max, imaginary_time=True)
            if prev is not None:
                assert r.last_term < prev
            prev = r.last_term

    def test_imaginary_time_matches_closed_form(self):
        got = kernel_via_spectral_series(2, 0, 1.0, 0.5, 200, imaginary_time=True).value
        want = PhiKernel(2, 0, 0.5).q_imag_time(1.0)
        assert got.real == pytest.approx(want, rel=1e-10)
        assert abs(got.imag) < 1e-15


class TestEpsilonAxis:
    def test_rejects_bad_inputs(self):
        state = QuantumState(N=1, L=0)
        with pytest.raises(ValueError):
            shift_via_eps_real_axis(state, 0.0)
        with pytest.raises(ValueError):
            shift_via_eps_real_axis(state, 0.05, t_max=10.0)

    def test_single_eps_near_primary(self):
        # one finite-damping point lands within O(eps) of the converged shift
        state = QuantumState(N=1, L=0)
        value = shift_via_eps_real_axis(state, 0.05)
        primary = lamb_shift(state).lamb_shift_MHz
        assert value.real == pytest.approx(primary, rel=0.02)
        # ground state: no decay channel, imaginary part is O(eps) only
        assert abs(value.imag) < 0.1 * abs(value.real)

    def test_imag_part_tracks_decay_rate(self):
        # at finite eps the imaginary part approximates -Gamma/(4 pi) in MHz
        state = QuantumState(N=2, L=1)
        value = shift_via_eps_real_axis(state, 0.05)
        result = lamb_shift(state)
        expected = -result.total_rate / (4.0 * math.pi)
        assert value.imag == pytest.approx(expected, rel=0.1)
