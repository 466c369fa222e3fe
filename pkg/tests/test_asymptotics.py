"""Tests for the normal CDF, TV predictions, and moment/normality checks."""

import math

import numpy as np
import pytest

import plantedbins as pb
from plantedbins.mc import Dist
from plantedbins.stats import StatisticKind

# Reference Phi values from a 50-digit Maclaurin erf series
# (independent of the rational approximation under test).
PHI_TABLE = [
    (-8.0, 6.2209605742717841e-16),
    (-5.0, 2.8665157187919391e-7),
    (-3.5, 0.00023262907903552504),
    (-2.5, 0.0062096653257761352),
    (-2.0, 0.022750131948179207),
    (-1.5, 0.066807201268858066),
    (-1.0, 0.15865525393145705),
    (-0.75, 0.2266273523768682),
    (-0.5, 0.3085375387259869),
    (-0.25, 0.40129367431707628),
    (0.0, 0.5),
    (0.25, 0.59870632568292372),
    (0.5, 0.6914624612740131),
    (0.75, 0.7733726476231318),
    (1.0, 0.84134474606854295),
    (1.5, 0.93319279873114193),
    (2.0, 0.97724986805182079),
    (2.5, 0.99379033467422386),
    (3.5, 0.99976737092096447),
    (5.0, 0.99999971334842812),
]


class TestNormalCdf:
    def test_reference_points(self):
        for x, expected in PHI_TABLE:
            assert abs(pb.std_normal_cdf(x) - expected) < 1e-7

    def test_half_at_zero(self):
        assert pb.std_normal_cdf(0.0) == 0.5

    def test_symmetry(self):
        for x in (0.5, 1.0, 2.0, 5.0):
            total = pb.std_normal_cdf(-x) + pb.std_normal_cdf(x)
            assert total == pytest.approx(1.0, abs=1e-7)

    def test_one_sigma(self):
        assert pb.std_normal_cdf(1.0) == pytest.approx(0.8413447, abs=1e-7)

    def test_array_input(self):
        xs = np.array([x for x, _ in PHI_TABLE])
        expected = np.array([v for _, v in PHI_TABLE])
        assert np.max(np.abs(pb.std_normal_cdf(xs) - expected)) < 1e-7

    def test_extreme_tails(self):
        assert pb.std_normal_cdf(-40.0) == 0.0
        assert pb.std_normal_cdf(40.0) == 1.0


class TestPredictedTv:
    def test_reference_values(self):
        flat = pb.RegimeSpec(regime=pb.Regime.FLAT, c=1.0)
        assert pb.predicted_tv(flat) == pytest.approx(0.27632639016823693,
                                                      abs=1e-7)
        hilly = pb.RegimeSpec(regime=pb.Regime.HILLY, c=1.0)
        assert pb.predicted_tv(hilly) == pytest.approx(0.38292492254802621,
                                                       abs=1e-7)

    def test_intermediate_with_zero_lambda_matches_flat(self):
        for c in np.arange(0.1, 5.05, 0.1):
            inter = pb.RegimeSpec(regime=pb.Regime.INTERMEDIATE, c=float(c),
                                  lam=0.0)
            flat = pb.RegimeSpec(regime=pb.Regime.FLAT, c=float(c))
            assert abs(pb.predicted_tv(inter)
                       - pb.predicted_tv(flat)) < 1e-10

    def test_strictly_decreasing_in_c(self):
        for regime, lam in ((pb.Regime.FLAT, 0.0), (pb.Regime.HILLY, 0.0),
                            (pb.Regime.INTERMEDIATE, 2.0)):
            values = [
                pb.predicted_tv(pb.RegimeSpec(regime=regime, c=float(c),
                                              lam=lam))
                for c in np.arange(0.1, 5.05, 0.1)
            ]
            assert all(hi > lo for hi, lo in zip(values, values[1:]))

    def test_limits(self):
        for regime in pb.Regime:
            spec = pb.RegimeSpec(regime=regime, c=1e8, lam=1.0)
            assert pb.predicted_tv(spec) < 1e-4
            spec = pb.RegimeSpec(regime=regime, c=1e-8, lam=1.0)
            assert pb.predicted_tv(spec) > 1 - 1e-7

    def test_rejects_bad_scale(self):
        with pytest.raises(pb.InvalidScale):
            pb.predicted_tv(pb.RegimeSpec(regime=pb.Regime.FLAT, c=0.0))
        with pytest.raises(pb.InvalidScale):
            pb.predicted_tv(pb.RegimeSpec(regime=pb.Regime.FLAT))


class TestPredictedMoments:
    def test_linear_statistic(self):
        p = pb.make_planting([3, 1, 0, 0])
        v, n, m = pb.planting_variance(p), 4, 20
        mean, var = pb.predicted_moments(p, m, 1, Dist.ST)
        assert mean == 0.0
        assert var == pytest.approx(v * n * n / m)
        mean_pl, var_pl = pb.predicted_moments(p, m, 1, Dist.PL)
        assert mean_pl == pytest.approx(v * n * n / m)
        assert var_pl == pytest.approx(v * n * n / m)

    def test_quadratic_statistic(self):
        p = pb.make_planting([1, 1, 1, 1])
        n = k = 4
        m = 12
        mean, var = pb.predicted_moments(p, m, 2, Dist.ST)
        assert mean == pytest.approx(k * n / m)
        assert var == pytest.approx(2 * k * k * n / (m * m))
        mean_pl, _ = pb.predicted_moments(p, m, 2, Dist.PL)
        assert mean_pl == pytest.approx(k * n / m - k * k * n / (m * m))

    def test_higher_powers_have_vanishing_variance(self):
        p = pb.make_planting([2, 0])
        n, k, m = 2, 2, 9
        mean3, var3 = pb.predicted_moments(p, m, 3, Dist.ST)
        assert mean3 == pytest.approx(k * n * n / (m * m))
        assert var3 == 0.0
        mean4, _ = pb.predicted_moments(p, m, 4, Dist.PL)
        assert mean4 == pytest.approx(3 * k * n * n / (m * m))

    def test_flat_planted_linear_mean_is_zero(self):
        p = pb.make_planting([1, 1, 1])
        mean, _ = pb.predicted_moments(p, 9, 1, Dist.PL)
        assert mean == 0.0

    def test_validation(self):
        p = pb.make_planting([2, 0])
        with pytest.raises(pb.UnsupportedPower):
            pb.predicted_moments(p, 5, 5, Dist.ST)
        with pytest.raises(pb.NotEnoughBalls):
            pb.predicted_moments(p, 1, 1, Dist.PL)


class TestEmpiricalMoments:
    def test_degenerate_two_sample_run(self):
        p = pb.make_planting([1, 0])
        report = pb.empirical_moments(p, 4, 1, Dist.ST, samples=2, seed=0)
        assert report.samples == 2
        assert math.isfinite(report.empirical_mean)
        assert report.empirical_var >= 0.0

    def test_linear_mean_under_st(self):
        # E sum a_i q_i = 0 under the standard throw for any planting
        p = pb.make_planting([6, 3, 0, 0, 0, 0])
        report = pb.empirical_moments(p, 400, 1, Dist.ST, samples=20000,
                                      seed=5)
        assert abs(report.empirical_mean) <= 4 * report.mean_stderr

    def test_quadratic_mean_at_flat_scale(self):
        n = 400
        p = pb.make_planting([1] * n)
        m = round(n ** 1.5)
        report = pb.empirical_moments(p, m, 2, Dist.ST, samples=4000, seed=6)
        assert report.empirical_mean == pytest.approx(
            report.predicted_mean, abs=4 * report.mean_stderr + 0.01)
        assert report.empirical_var == pytest.approx(report.predicted_var,
                                                     rel=0.2)

    def test_higher_power_variance_decays(self):
        reports = {}
        for n in (400, 3600):
            p = pb.make_planting([1] * n)
            m = round(n ** 1.5)
            reports[n] = pb.empirical_moments(p, m, 3, Dist.ST,
                                              samples=500, seed=7)
        assert reports[3600].empirical_var < reports[400].empirical_var


class TestKs:
    def test_calibration_on_true_normals(self):
        passes = 0
        for seed in range(12):
            g = np.random.default_rng(seed)
            sample = g.standard_normal(10000)
            d = pb.ks_distance_to_normal(sample)
            passes += d < 1.36 / math.sqrt(10000)
        assert passes >= 10

    def test_detects_shift(self):
        g = np.random.default_rng(3)
        d = pb.ks_distance_to_normal(g.standard_normal(10000) + 0.2)
        assert d > 0.05

    def test_hilly_linear_statistic_is_normal(self):
        p = pb.make_planting([50] + [0] * 199)
        m = 497500
        for dist in (Dist.ST, Dist.PL):
            d, ok = pb.ks_normality(p, m, StatisticKind.HILLY_H, dist,
                                    samples=2000, seed=9, threshold=0.05)
            assert ok, (dist, d)

    def test_degenerate_variance_rejected(self):
        flat = pb.make_planting([1, 1, 1, 1])  # V = 0, linear stat constant
        with pytest.raises(pb.DegenerateStandardization):
            pb.ks_normality(flat, 12, StatisticKind.HILLY_H, Dist.ST,
                            samples=200, seed=0)

    def test_needs_enough_samples(self):
        p = pb.make_planting([2, 0])
        with pytest.raises(ValueError):
            pb.ks_normality(p, 8, StatisticKind.HILLY_H, Dist.ST,
                            samples=50, seed=0)
