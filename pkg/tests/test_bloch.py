import numpy as np
import pytest

from conslaw.bloch import (
    assemble_bloch,
    bloch_spectrum,
    constant_symbol,
    critical_curve_array,
    critical_curves,
    critical_modes,
)
from conslaw.errors import GapViolation, OutOfRange
from conslaw.fourier import SpectralGrid, derivative
from conslaw.rolls import RollParameters, solve_roll, zero_roll

GRID = SpectralGrid(16)


class TestConstantSymbol:
    def test_critical_mode(self):
        assert constant_symbol(1, 0.0) == 0.0

    def test_conserved_mode_near_zero(self):
        assert constant_symbol(0, 0.1) == pytest.approx(-0.01 * 0.99**2)

    def test_second_harmonic(self):
        assert constant_symbol(2, 0.0) == pytest.approx(-36.0)

    def test_quarter_zone(self):
        assert constant_symbol(0, 0.25) == pytest.approx(-0.0549316, abs=1e-7)


class TestAssembly:
    def test_sigma_range_enforced(self):
        roll = zero_roll(RollParameters(0.0, 0.0, 0.0), GRID)
        with pytest.raises(OutOfRange):
            assemble_bloch(roll, 0.6)

    def test_zero_roll_reduces_to_diagonal_symbol(self):
        roll = zero_roll(RollParameters(0.0, 0.0, 0.0), GRID)
        op = assemble_bloch(roll, 0.3)
        off = op.matrix - np.diag(np.diag(op.matrix))
        assert np.max(np.abs(off)) == 0.0
        expect = [constant_symbol(m, 0.3) for m in GRID.modes]
        assert np.max(np.abs(np.diag(op.matrix) - expect)) < 1e-12

    def test_conserved_row_is_zero_at_sigma_zero(self):
        roll = solve_roll(RollParameters(0.05, 0.1, 0.8), GRID)
        op = assemble_bloch(roll, 0.0)
        assert np.max(np.abs(op.matrix[GRID.n_modes, :])) == 0.0

    def test_translation_mode_in_kernel(self):
        # d/dxi of the stationary profile is annihilated at sigma = 0
        roll = solve_roll(RollParameters(0.08, 0.2, 1.0), GRID)
        op = assemble_bloch(roll, 0.0)
        v = derivative(roll.profile).coeffs
        assert np.max(np.abs(op.matrix @ v)) < 1e-9

    def test_df_field_content(self):
        roll = solve_roll(RollParameters(0.05, 0.0, 1.0), GRID)
        op = assemble_bloch(roll, 0.1)
        vals = op.df_field.values()
        u = roll.profile.values(op.df_field.grid.n_points)
        expect = roll.params.eps**2 - 2.0 * roll.params.s * u - 3.0 * u**2
        assert np.max(np.abs(vals - expect)) < 1e-13


class TestSpectrum:
    def test_threshold_state_triple(self):
        roll = zero_roll(RollParameters(0.0, 0.0, 0.0), GRID)
        spec = bloch_spectrum(assemble_bloch(roll, 0.0))
        crit = np.sort(np.abs(spec.critical_values()))
        assert np.max(crit) < 1e-12
        others = np.delete(spec.eigenvalues.real, list(spec.critical))
        assert others.max() == pytest.approx(-36.0, abs=1e-9)

    def test_co_periodic_triple_small_eps(self):
        roll = solve_roll(RollParameters(0.05, 0.0, 0.5), GRID)
        spec = bloch_spectrum(assemble_bloch(roll, 0.0))
        cv = np.sort(spec.critical_values().real)
        assert abs(cv[0] + 2.0 * 0.05**2) < 5.0 * 0.05**3
        assert np.max(np.abs(cv[1:])) < 1e-9

    def test_zero_amplitude_off_center(self):
        roll = zero_roll(RollParameters(0.0, 0.0, 0.0), GRID)
        spec = bloch_spectrum(assemble_bloch(roll, 0.25))
        nearest = spec.critical_values()[np.argmax(spec.critical_values().real)]
        assert nearest.real == pytest.approx(-0.0549316, abs=1e-7)

    def test_spectrum_real_at_sigma_zero(self):
        roll = solve_roll(RollParameters(0.05, 0.25, 1.0), GRID)
        spec = bloch_spectrum(assemble_bloch(roll, 0.0))
        assert np.max(np.abs(spec.eigenvalues.imag)) < 1e-9

    def test_gap_certificate(self):
        for sigma in (0.0, 0.05, 0.1):
            roll = solve_roll(RollParameters(0.05, 0.1, 0.8), GRID)
            spec = bloch_spectrum(assemble_bloch(roll, sigma))
            others = np.delete(spec.eigenvalues.real, list(spec.critical))
            assert others.max() < -3.0

    def test_gap_violation_reported(self):
        roll = solve_roll(RollParameters(0.05, 0.0, 0.5), GRID)
        with pytest.raises(GapViolation):
            bloch_spectrum(assemble_bloch(roll, 0.0), delta=50.0)

    def test_truncation_convergence(self):
        p = RollParameters(0.05, 0.25, 1.0)
        vals = []
        for modes in (12, 24):
            roll = solve_roll(p, SpectralGrid(modes))
            v, _ = critical_modes(assemble_bloch(roll, 0.1))
            vals.append(np.sort(v.real))
        assert np.max(np.abs(vals[0] - vals[1])) < 1e-10

    def test_conjugation_symmetry(self):
        grid = SpectralGrid(8)
        roll = solve_roll(RollParameters(0.03, 0.25, 1.0), grid)
        for sigma in (0.1, 0.31):
            plus = np.sort_complex(bloch_spectrum(assemble_bloch(roll, sigma)).eigenvalues)
            minus = np.sort_complex(bloch_spectrum(assemble_bloch(roll, -sigma)).eigenvalues)
            assert np.max(np.abs(minus - np.conj(plus))) < 1e-9

    def test_critical_eigenvectors_are_eigenvectors(self):
        roll = solve_roll(RollParameters(0.05, 0.1, 0.8), GRID)
        op = assemble_bloch(roll, 0.2)
        vals, vecs = critical_modes(op)
        for j in range(3):
            resid = op.matrix @ vecs[:, j] - vals[j] * vecs[:, j]
            assert np.max(np.abs(resid)) < 1e-8


class TestCurves:
    def test_zero_roll_branches_match_symbol(self):
        roll = zero_roll(RollParameters(0.0, 0.0, 0.0), GRID)
        sigmas = np.linspace(0.0, 0.3, 7)
        curves = critical_curve_array(critical_curves(roll, sigmas)).real
        for i, sig in enumerate(sigmas):
            expect = np.sort([constant_symbol(m, sig) for m in (-1, 0, 1)])
            assert np.max(np.abs(np.sort(curves[:, i]) - expect)) < 1e-12

    def test_two_exact_zeros_at_origin(self):
        roll = solve_roll(RollParameters(0.04, 0.1, 0.6), GRID)
        spec = critical_curves(roll, [0.0, 0.02])[0]
        cv = np.sort(np.abs(spec.critical_values().real))
        assert cv[1] < 1e-9  # conservation + translation modes

    def test_matched_curves_are_continuous(self):
        roll = solve_roll(RollParameters(0.05, 0.2, 0.8), GRID)
        sigmas = np.linspace(0.05, 0.3, 26)
        curves = critical_curve_array(critical_curves(roll, sigmas)).real
        jumps = np.max(np.abs(np.diff(curves, axis=1)))
        assert jumps < 0.1
