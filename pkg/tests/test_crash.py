#!/usr/bin/env python3
"""
Tests for the lumped-parameter crash model and least-squares identification.
"""

import math

import numpy as np
import pytest

from escs.crash import (
    CrashModel,
    ForceDeformationSample,
    collision_energy,
    compare_with_reference,
    discrepancy,
    exceeds_designed_deformation,
    kinetic_energy,
    lls_fit,
    load_samples,
    lpm_closed_form,
    lpm_peak_deformation,
    lpm_simulate,
)
from escs.errors import SingularFitError
from escs.published import (
    FE_REFERENCE,
    PUBLISHED_LPM_DURATION,
    PUBLISHED_LPM_ENERGY,
    PUBLISHED_LPM_PEAK_DEFORMATION,
)


@pytest.fixture
def reference_model():
    """Unladen sedan of the finite-element test"""
    return CrashModel(mass=1247.0)


# =============================================================================
# Closed Form
# =============================================================================

class TestClosedForm:
    """Tests for the analytic quarter-cycle outcome"""

    def test_finite_element_case(self, reference_model):
        """1247 kg at 15.6464 m/s reproduces the published model outputs"""
        outcome = lpm_closed_form(reference_model, FE_REFERENCE.impact_velocity)
        assert outcome.peak_deformation == pytest.approx(PUBLISHED_LPM_PEAK_DEFORMATION, abs=5e-4)
        assert outcome.collision_energy == pytest.approx(PUBLISHED_LPM_ENERGY, abs=300.0)
        assert outcome.collision_duration == pytest.approx(PUBLISHED_LPM_DURATION, abs=1e-3)
        assert outcome.peak_acceleration == pytest.approx(419.0, abs=1.0)

    def test_discrepancy_against_reference(self, reference_model):
        peak = lpm_peak_deformation(reference_model, FE_REFERENCE.impact_velocity)
        assert discrepancy(FE_REFERENCE.peak_deformation, peak) == pytest.approx(0.0386, abs=5e-4)

    @pytest.mark.parametrize("mass", [900.0, 1247.0, 1407.0, 2200.0])
    @pytest.mark.parametrize("v", [0.5, 6.0, 17.32, 40.0])
    def test_energy_conservation(self, mass, v):
        """0.5 m v^2 = 0.5 k delta^2 at peak deformation"""
        model = CrashModel(mass=mass)
        peak = lpm_peak_deformation(model, v)
        assert collision_energy(model, peak) == pytest.approx(kinetic_energy(mass, v), rel=1e-9)

    def test_zero_velocity(self, reference_model):
        outcome = lpm_closed_form(reference_model, 0.0)
        assert outcome.peak_deformation == 0.0
        assert outcome.collision_duration == 0.0
        assert outcome.collision_energy == 0.0

    def test_failure_point_energy_term(self):
        """Including fp adds fp * delta to the spring energy"""
        with_fp = CrashModel(mass=1247.0, include_failure_point_in_energy=True)
        peak = lpm_peak_deformation(with_fp, FE_REFERENCE.impact_velocity)
        energy = collision_energy(with_fp, peak)
        assert energy == pytest.approx(0.5 * 894.3e3 * peak ** 2 + 1410.0 * peak)
        assert energy == pytest.approx(153.46e3, abs=100.0)

    def test_worked_example_deformation(self):
        """1407 kg striking the barrier at sqrt(300) m/s"""
        model = CrashModel(mass=1407.0)
        assert lpm_peak_deformation(model, math.sqrt(300.0)) == pytest.approx(0.687, abs=1e-3)

    def test_peak_acceleration_in_g(self, reference_model):
        outcome = lpm_closed_form(reference_model, FE_REFERENCE.impact_velocity)
        assert outcome.peak_acceleration_g == pytest.approx(outcome.peak_acceleration / 9.80665)

    def test_invalid_model(self):
        with pytest.raises(ValueError, match="mass"):
            CrashModel(mass=-1.0)
        with pytest.raises(ValueError, match="stiffness_k"):
            CrashModel(mass=1247.0, stiffness_k=0.0)
        with pytest.raises(ValueError, match="impact_v"):
            lpm_peak_deformation(CrashModel(mass=1247.0), -1.0)

    def test_peak_monotonic_in_inputs(self, rng):
        """Peak deformation rises with speed and mass, falls with stiffness"""
        for _ in range(200):
            v, m, k = rng.uniform(1.0, 40.0), rng.uniform(800.0, 2500.0), rng.uniform(2e5, 2e6)
            base = lpm_peak_deformation(CrashModel(mass=m, stiffness_k=k), v)
            assert lpm_peak_deformation(CrashModel(mass=m, stiffness_k=k), v * 1.01) > base
            assert lpm_peak_deformation(CrashModel(mass=m * 1.01, stiffness_k=k), v) > base
            assert lpm_peak_deformation(CrashModel(mass=m, stiffness_k=k * 1.01), v) < base


# =============================================================================
# Time Integration
# =============================================================================

class TestSimulation:
    """Tests for the integrated mass-spring model"""

    def test_matches_closed_form(self, reference_model):
        v = FE_REFERENCE.impact_velocity
        simulated = lpm_simulate(reference_model, v, dt=1e-5)
        analytic = lpm_closed_form(reference_model, v)
        assert simulated.peak_deformation == pytest.approx(analytic.peak_deformation, rel=1e-6)
        assert simulated.collision_duration == pytest.approx(analytic.collision_duration, rel=1e-3)
        assert simulated.peak_acceleration == pytest.approx(analytic.peak_acceleration, rel=1e-3)

    def test_series_shape(self, reference_model):
        outcome = lpm_simulate(reference_model, 10.0, dt=1e-4)
        series = outcome.series
        assert series.shape[1] == 3
        assert series[0, 1] == 0.0
        assert np.all(np.diff(series[:, 1]) > 0)
        assert np.all(series[1:, 2] < 0)

    def test_rejects_zero_velocity(self, reference_model):
        with pytest.raises(ValueError, match="impact_v"):
            lpm_simulate(reference_model, 0.0)


# =============================================================================
# Reference Comparison
# =============================================================================

class TestReferenceComparison:
    """Tests for the finite-element comparison table"""

    def test_rows(self, reference_model):
        rows = {row.quantity: row for row in compare_with_reference(reference_model)}
        assert set(rows) == {'peak_deformation', 'collision_energy_with_failure_point',
                             'collision_energy', 'collision_duration'}
        assert rows['peak_deformation'].model == pytest.approx(0.5843, abs=5e-4)
        assert rows['peak_deformation'].discrepancy == pytest.approx(0.0386, abs=5e-4)
        assert rows['collision_energy'].model == pytest.approx(152.6e3, abs=300.0)
        assert rows['collision_energy_with_failure_point'].model == pytest.approx(153.46e3, abs=100)
        assert rows['collision_duration'].reference == 0.0522

    def test_discrepancy_requires_nonzero_reference(self):
        with pytest.raises(ValueError, match="non-zero"):
            discrepancy(0.0, 1.0)

    def test_designed_deformation(self):
        assert not exceeds_designed_deformation(0.5842)
        assert exceeds_designed_deformation(0.687)
        assert exceeds_designed_deformation(0.5, designed=0.45)


# =============================================================================
# Least Squares
# =============================================================================

class TestLeastSquaresFit:
    """Tests for identification of stiffness and failure point"""

    def test_exact_recovery(self, rng):
        """Noiseless affine data is recovered to 1e-6 relative"""
        deformation = np.sort(rng.uniform(0.0, 0.6, size=50))
        force = 1410.0 + 894.3e3 * deformation
        samples = [ForceDeformationSample(d, f) for d, f in zip(deformation, force)]
        fit = lls_fit(samples)
        assert fit.stiffness_k == pytest.approx(894.3e3, rel=1e-6)
        assert fit.failure_point_fp == pytest.approx(1410.0, rel=1e-6)
        assert np.max(np.abs(fit.residuals)) < 1e-6 * 894.3e3

    def test_fitted_energy_is_area_under_line(self):
        samples = [ForceDeformationSample(d, 1000.0 + 2000.0 * d) for d in (0.0, 0.5, 1.0)]
        fit = lls_fit(samples)
        assert fit.fitted_energy == pytest.approx(1000.0 + 0.5 * 2000.0)
        assert fit.predict([0.25]) == pytest.approx([1500.0])

    def test_noisy_data(self, rng):
        deformation = np.linspace(0.0, 0.56, 200)
        force = 1410.0 + 894.3e3 * deformation + rng.normal(0.0, 2000.0, deformation.size)
        fit = lls_fit([ForceDeformationSample(d, f) for d, f in zip(deformation, force)])
        assert fit.stiffness_k == pytest.approx(894.3e3, rel=0.02)

    def test_residuals_orthogonal_to_regressors(self, rng):
        """Normal equations: phi^T r = 0 up to roundoff"""
        deformation = rng.uniform(0.0, 0.6, size=300)
        force = 1410.0 + 894.3e3 * deformation + rng.normal(0.0, 5000.0, deformation.size)
        fit = lls_fit([ForceDeformationSample(d, f) for d, f in zip(deformation, force)])
        phi = np.column_stack([np.ones_like(deformation), deformation])
        scale = np.linalg.norm(phi, axis=0) * np.linalg.norm(force)
        assert np.all(np.abs(phi.T @ fit.residuals) <= 1e-10 * scale)
        assert np.any(np.abs(fit.residuals) > 100.0)

    def test_singular_design_matrix(self):
        samples = [ForceDeformationSample(0.3, f) for f in (1.0, 2.0, 3.0)]
        with pytest.raises(SingularFitError):
            lls_fit(samples)

    def test_too_few_samples(self):
        with pytest.raises(ValueError, match="at least 2"):
            lls_fit([ForceDeformationSample(0.1, 1.0)])

    def test_negative_deformation(self):
        with pytest.raises(ValueError, match="deformation"):
            ForceDeformationSample(-0.1, 1.0)


class TestLoadSamples:
    """Tests for reading force/deformation CSV files"""

    def test_load(self, tmp_path):
        path = tmp_path / 'curve.csv'
        path.write_text("deformation_m,force_N\n0.0,1410\n0.1,90840\n0.2,180270\n")
        samples = load_samples(path)
        assert len(samples) == 3
        assert samples[1] == ForceDeformationSample(0.1, 90840.0)

    def test_bad_header(self, tmp_path):
        path = tmp_path / 'curve.csv'
        path.write_text("x,y\n0.0,1\n")
        with pytest.raises(ValueError, match="expected header"):
            load_samples(path)

    def test_bad_value_names_line(self, tmp_path):
        path = tmp_path / 'curve.csv'
        path.write_text("deformation_m,force_N\n0.0,1\nabc,2\n")
        with pytest.raises(ValueError, match=":3:"):
            load_samples(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_samples(tmp_path / 'missing.csv')
