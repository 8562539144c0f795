import numpy as np
import pytest

from miwave import (
    Scenario,
    SpectralDensity,
    UnboundedAllocationError,
    design_mi,
    detection_metric,
    esd_for_lambda,
    integrate,
    make_grid,
    solve_lambda,
)

from conftest import d2_rows, random_feasible_esd


def test_flat_case_closed_form_lambda(flat_unit_scenario):
    # flat P_n = P_h = 1 over a unit-measure band with E = 1:
    # the allocation sqrt(1/lam) - 1 equals 1 at lam = 1/4
    lam = solve_lambda(flat_unit_scenario, tol=1e-9)
    assert lam == pytest.approx(0.25, abs=1e-8)


def test_flat_scenario_gives_flat_esd(flat_unit_scenario):
    design = design_mi(flat_unit_scenario)
    v = design.esd.values
    np.testing.assert_allclose(v, v[0], rtol=1e-12)
    assert design.achieved_energy == pytest.approx(1.0, rel=1e-6)


def test_energy_constraint_on_suite(scenario_suite):
    for base in scenario_suite:
        for e in (0.5, 1.0, 4.0):
            sc = base.with_energy(e)
            design = design_mi(sc)
            assert abs(integrate(design.esd) - e) <= 1e-6 * e


def test_notch_scenario_peaks_at_dc(notch_scenario):
    design = design_mi(notch_scenario)
    assert np.argmax(design.esd.values) == notch_scenario.grid.half_order


def test_allocation_decreasing_in_lambda(notch_scenario):
    lams = np.geomspace(1e-3, np.max(1.0 / notch_scenario.noise_psd.values), 30)
    allocs = [
        integrate(esd_for_lambda(notch_scenario, lam)) for lam in lams
    ]
    diffs = np.diff(allocs)
    assert np.all(diffs[np.array(allocs[:-1]) > 0] < 0)


def test_active_set_nondecreasing_in_energy(notch_scenario):
    prev: set = set()
    for e in (1.0, 2.0, 5.0, 10.0):
        design = design_mi(notch_scenario.with_energy(e))
        active = set(design.active_set.tolist())
        assert prev <= active
        prev = active


def test_scale_covariance(notch_scenario):
    # scaling both PSDs by c leaves the ESD unchanged at fixed E
    c = 3.7
    scaled = Scenario(
        notch_scenario.noise_psd.scaled(c),
        notch_scenario.channel_psd.scaled(c),
        notch_scenario.target_variance,
        notch_scenario.energy,
    )
    d1 = design_mi(notch_scenario, tol=1e-9)
    d2 = design_mi(scaled, tol=1e-9)
    np.testing.assert_allclose(d2.esd.values, d1.esd.values, atol=1e-9)


def test_zero_channel_error_and_floor(small_grid):
    noise = SpectralDensity(small_grid, np.ones(small_grid.num_bins))
    vals = np.ones(small_grid.num_bins)
    vals[small_grid.half_order] = 0.0
    sc = Scenario(noise, SpectralDensity(small_grid, vals), 1.0, 1.0)
    with pytest.raises(UnboundedAllocationError):
        design_mi(sc)
    # the floor substitution keeps the allocation finite (if enormous)
    with pytest.warns(UserWarning, match="floor"):
        esd = esd_for_lambda(sc, 0.5, zero_channel_floor=True)
    assert np.all(np.isfinite(esd.values))
    assert np.argmax(esd.values) == small_grid.half_order


def test_lambda_positive_required(notch_scenario):
    with pytest.raises(ValueError):
        esd_for_lambda(notch_scenario, 0.0)


def test_better_than_random_feasible(scenario_suite):
    rng = np.random.default_rng(42)
    for base in scenario_suite[:4]:
        sc = base.with_energy(2.0)
        design = design_mi(sc)
        d2_star = detection_metric(design.esd, sc)
        q = random_feasible_esd(rng, sc, 200)
        assert np.all(d2_rows(q, sc) <= d2_star + 1e-9)
