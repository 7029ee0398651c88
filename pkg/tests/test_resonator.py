"""Waveguide geometry, the pi/2 matching check, and the spectral window."""

import math

import numpy as np
import pytest

from cloudlattice.constants import CONSTANTS
from cloudlattice.errors import EmptyWindowError, InvalidParameterError
from cloudlattice.resonator import (ResonatorGeometry, check_geometry,
                                    earth_path_lengths, harmonic_lengths,
                                    spectral_window, travel_times)


class TestPathLengths:
    @pytest.mark.parametrize("radius", [1.0, 6.371e6, 42.0])
    def test_ratio_is_half_pi_for_any_radius(self, radius):
        lengths = earth_path_lengths(radius)
        assert lengths.ratio == math.pi / 2.0

    def test_unit_radius(self):
        lengths = earth_path_lengths(1.0)
        assert lengths.L_tan == pytest.approx(2 * math.pi)
        assert lengths.L_rad == 4.0

    def test_planet_surface_length(self):
        lengths = earth_path_lengths(6.371e6)
        # oracle: plain 2*pi*R arithmetic
        assert lengths.L_tan == pytest.approx(2 * math.pi * 6.371e6, rel=1e-15)
        assert lengths.L_tan == pytest.approx(4.00e7, rel=0.01)

    def test_rejects_non_positive(self):
        with pytest.raises(InvalidParameterError):
            earth_path_lengths(0.0)


class TestTravelTimes:
    def test_planet_values(self):
        lengths = earth_path_lengths(CONSTANTS.R_earth)
        t_tan, t_rad = travel_times(lengths.L_tan, lengths.L_rad, CONSTANTS.c)
        assert t_tan == pytest.approx(0.13, rel=0.05)
        assert t_rad == pytest.approx(0.09, rel=0.10)

    def test_unit(self):
        assert travel_times(CONSTANTS.c, CONSTANTS.c, CONSTANTS.c) == (1.0, 1.0)

    def test_rejects_non_positive(self):
        with pytest.raises(InvalidParameterError):
            travel_times(1.0, -1.0, CONSTANTS.c)


class TestGeometryCheck:
    def test_tabletop_dimensions_pass(self):
        result = check_geometry(0.20, 0.127, tolerance=0.01)
        assert result.passed
        assert result.deviation == pytest.approx(0.0026, abs=5e-4)

    def test_exact_ratio_zero_deviation(self):
        h = 2.0
        result = check_geometry(math.pi / 2.0 * h, h, tolerance=0.01)
        assert result.passed
        assert result.deviation < 1e-15

    def test_square_section_fails(self):
        result = check_geometry(1.0, 1.0, tolerance=0.01)
        assert not result.passed
        oracle = abs(1.0 - math.pi / 2.0) / (math.pi / 2.0)
        assert result.deviation == pytest.approx(oracle, rel=1e-12)
        assert result.deviation == pytest.approx(0.363, abs=1e-3)

    @pytest.mark.parametrize("tol", [0.0, 1.0, -0.2, 1.5])
    def test_invalid_tolerance(self, tol):
        with pytest.raises(InvalidParameterError):
            check_geometry(0.2, 0.127, tolerance=tol)

    def test_deviation_always_reported(self):
        result = check_geometry(0.31, 0.20, tolerance=0.05)
        assert result.deviation >= 0.0
        assert result.ratio == pytest.approx(0.31 / 0.20)


class TestSpectralWindow:
    def test_reference_bounds(self):
        window = spectral_window(1e13, 0.12)
        assert window.lambda_min == pytest.approx(30e-6, rel=0.01)
        assert window.nu_min == pytest.approx(2.5e9, rel=0.01)
        assert window.lambda_max == 0.12
        assert window.nu_max == pytest.approx(1e13, rel=1e-12)

    def test_reciprocity(self):
        window = spectral_window(1e13, 0.12)
        np.testing.assert_allclose(window.nu_min * window.lambda_max,
                                   CONSTANTS.c, rtol=1e-12)
        np.testing.assert_allclose(window.nu_max * window.lambda_min,
                                   CONSTANTS.c, rtol=1e-12)

    def test_empty_window(self):
        with pytest.raises(EmptyWindowError):
            spectral_window(1e13, 1e-6)

    def test_rejects_non_positive(self):
        with pytest.raises(InvalidParameterError):
            spectral_window(-1e13, 0.12)


class TestHarmonics:
    def test_ratio_invariant(self):
        base = ResonatorGeometry(0.20, 0.127)
        for n, lt, lr in harmonic_lengths(base, 6):
            assert lt / lr == pytest.approx(base.ratio, rel=1e-15)

    def test_second_harmonic(self):
        base = ResonatorGeometry(0.20, 0.127)
        n, lt, lr = harmonic_lengths(base, 2)[1]
        assert (n, lt, lr) == (2, 0.10, 0.0635)

    def test_first_harmonic_is_base(self):
        base = ResonatorGeometry(0.20, 0.127)
        n, lt, lr = harmonic_lengths(base, 1)[0]
        assert (n, lt, lr) == (1, base.l_tan, base.l_rad)

    def test_planet_fourth_harmonic(self):
        lengths = earth_path_lengths(CONSTANTS.R_earth)
        base = ResonatorGeometry(lengths.L_tan, lengths.L_rad)
        n, lt, lr = harmonic_lengths(base, 4)[3]
        assert lt == lengths.L_tan / 4  # oracle: plain division
        assert lr == lengths.L_rad / 4

    def test_rejects_zero(self):
        with pytest.raises(InvalidParameterError):
            harmonic_lengths(ResonatorGeometry(0.2, 0.127), 0)
