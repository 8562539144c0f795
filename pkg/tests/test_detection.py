import numpy as np
import pytest

from miwave import (
    Scenario,
    SpectralDensity,
    analytic_roc,
    detection_metric,
    make_grid,
    monte_carlo_roc,
    np_statistic,
)


def _flat_scenario(grid, noise_level=1.0, clutter_level=0.0, var_a=1.0, energy=1.0):
    noise = SpectralDensity(grid, np.full(grid.num_bins, noise_level))
    clutter = SpectralDensity(grid, np.full(grid.num_bins, clutter_level))
    return Scenario(noise, clutter, var_a, energy)


class TestDetectionMetric:
    def test_flat_clutter_free(self):
        # flat ESD E/W over the covered band, no clutter: d^2 = sigma_A^2*E/n0
        grid = make_grid(10.0, 1.0)
        sc = _flat_scenario(grid, noise_level=0.5, energy=3.0)
        covered = grid.num_bins * grid.spacing
        esd = SpectralDensity(grid, np.full(grid.num_bins, 3.0 / covered))
        assert detection_metric(esd, sc) == pytest.approx(3.0 / 0.5, rel=1e-12)

    def test_zero_esd(self):
        grid = make_grid(10.0, 1.0)
        sc = _flat_scenario(grid)
        esd = SpectralDensity(grid, np.zeros(grid.num_bins))
        assert detection_metric(esd, sc) == 0.0

    def test_clutter_saturation(self):
        # huge energy with clutter h0: d^2 -> sigma_A^2 * covered_band / h0
        grid = make_grid(10.0, 1.0)
        h0 = 0.25
        sc = _flat_scenario(grid, clutter_level=h0, energy=1e6)
        covered = grid.num_bins * grid.spacing
        esd = SpectralDensity(grid, np.full(grid.num_bins, 1e6 / covered))
        assert detection_metric(esd, sc) == pytest.approx(covered / h0, rel=0.01)

    def test_monotone_in_esd_without_clutter(self):
        grid = make_grid(10.0, 1.0)
        sc = _flat_scenario(grid)
        rng = np.random.default_rng(5)
        v = rng.uniform(0, 1, grid.num_bins)
        lo = detection_metric(SpectralDensity(grid, v), sc)
        hi = detection_metric(SpectralDensity(grid, v + 0.3), sc)
        assert hi > lo

    def test_grid_mismatch(self):
        sc = _flat_scenario(make_grid(10.0, 1.0))
        other = make_grid(12.0, 1.0)
        with pytest.raises(ValueError):
            detection_metric(SpectralDensity(other, np.ones(other.num_bins)), sc)


class TestAnalyticRoc:
    def test_no_discrimination(self):
        assert analytic_roc(0.0, [0.1]) == [(0.1, pytest.approx(0.1))]

    def test_unit_metric(self):
        assert analytic_roc(1.0, [0.01])[0][1] == pytest.approx(0.1)

    def test_perfect_limit(self):
        assert analytic_roc(1e6, [0.01])[0][1] == pytest.approx(1.0, abs=1e-4)

    def test_monotone_in_p_fa_and_d2(self):
        pairs = analytic_roc(2.0, [0.001, 0.01, 0.1, 0.5])
        p_d = [p for _, p in pairs]
        assert p_d == sorted(p_d)
        better = analytic_roc(5.0, [0.01])[0][1]
        assert better > analytic_roc(2.0, [0.01])[0][1]

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            analytic_roc(-1.0, [0.1])
        with pytest.raises(ValueError):
            analytic_roc(1.0, [0.0])


class TestNpStatistic:
    def test_self_match_unit_denominator(self):
        grid = make_grid(4.0, 1.0)
        noise = SpectralDensity(grid, np.ones(grid.num_bins))
        clutter = SpectralDensity(grid, np.zeros(grid.num_bins))
        sc = Scenario(noise, clutter, 1.0, 1.0)
        s = np.arange(1, grid.num_bins + 1, dtype=complex)
        expect = float(np.sum(np.abs(s) ** 2)) ** 2
        assert np_statistic(s, s, sc) == pytest.approx(expect, rel=1e-12)

    def test_zero_observation(self):
        grid = make_grid(4.0, 1.0)
        sc = _flat_scenario(grid)
        s = np.ones(grid.num_bins, dtype=complex)
        assert np_statistic(np.zeros(grid.num_bins), s, sc) == 0.0

    def test_matches_scalar_loop(self):
        # independent reimplementation with plain Python complex arithmetic
        grid = make_grid(6.0, 1.0)
        rng = np.random.default_rng(17)
        noise = SpectralDensity(grid, rng.uniform(0.5, 2.0, grid.num_bins))
        clutter = SpectralDensity(grid, rng.uniform(0.0, 1.0, grid.num_bins))
        sc = Scenario(noise, clutter, 1.0, 1.0)
        x = rng.standard_normal(grid.num_bins) + 1j * rng.standard_normal(grid.num_bins)
        s = rng.standard_normal(grid.num_bins) + 1j * rng.standard_normal(grid.num_bins)
        acc = complex(0)
        for m in range(grid.num_bins):
            denom = (
                sc.channel_psd.values[m] * abs(complex(s[m])) ** 2
                + sc.noise_psd.values[m]
            )
            acc = acc + complex(x[m]) * complex(s[m]).conjugate() / denom
        assert np_statistic(x, s, sc) == abs(acc) ** 2


class TestMonteCarlo:
    def test_rejects_small_trials(self):
        grid = make_grid(4.0, 1.0)
        sc = _flat_scenario(grid)
        with pytest.raises(ValueError):
            monte_carlo_roc(np.ones(grid.num_bins), sc, 10, 0)

    def test_null_target_matches_diagonal(self):
        # sigma_A^2 = 0 makes H1 identical to H0 in distribution
        grid = make_grid(8.0, 1.0)
        sc = _flat_scenario(grid, var_a=0.0)
        s = np.full(grid.num_bins, np.sqrt(1.0 / grid.num_bins), dtype=complex)
        mc = monte_carlo_roc(s, sc, 20000, 3, p_fa_grid=(0.05, 0.2))
        for p_fa, p_d in zip(mc.p_fa, mc.p_d):
            se = np.sqrt(p_fa * (1 - p_fa) / mc.trials)
            assert abs(p_d - p_fa) <= 3 * se + 1e-12

    def test_deterministic_for_seed(self):
        grid = make_grid(8.0, 1.0)
        sc = _flat_scenario(grid)
        s = np.ones(grid.num_bins, dtype=complex)
        a = monte_carlo_roc(s, sc, 2000, 9)
        b = monte_carlo_roc(s, sc, 2000, 9)
        np.testing.assert_array_equal(a.p_d, b.p_d)
        np.testing.assert_array_equal(a.thresholds, b.thresholds)

    def test_stronger_target_detects_more(self):
        grid = make_grid(8.0, 1.0)
        s = np.ones(grid.num_bins, dtype=complex)
        weak = monte_carlo_roc(s, _flat_scenario(grid, var_a=0.5), 20000, 4)
        strong = monte_carlo_roc(s, _flat_scenario(grid, var_a=4.0), 20000, 4)
        assert np.all(strong.p_d >= weak.p_d)

    def test_matches_analytic_roc_with_clutter(self):
        # colored case at a nontrivial duration: exponent 1/(1+d^2) still holds
        grid = make_grid(5.0, 2.0)
        noise = SpectralDensity(grid, np.full(grid.num_bins, 0.5))
        clutter = SpectralDensity(grid, np.full(grid.num_bins, 0.3))
        sc = Scenario(noise, clutter, 1.0, 4.0)
        esd = np.full(grid.num_bins, 4.0 / (grid.num_bins * grid.spacing))
        d2 = detection_metric(SpectralDensity(grid, esd), sc)
        mc = monte_carlo_roc(np.sqrt(esd), sc, 100000, 0, p_fa_grid=(0.01, 0.1))
        for (p_fa, p_d), p_hat in zip(analytic_roc(d2, (0.01, 0.1)), mc.p_d):
            se = np.sqrt(p_d * (1 - p_d) / mc.trials)
            assert abs(p_hat - p_d) <= 3 * se
