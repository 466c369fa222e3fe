"""Tests for the distinguishing statistics and decision thresholds."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import plantedbins as pb
from plantedbins.stats import StatisticKind, statistic_value


def config(z):
    return pb.make_configuration(z)


configs = st.lists(st.integers(min_value=0, max_value=60), min_size=1,
                   max_size=30).filter(lambda z: sum(z) > 0)


class TestDeviations:
    def test_balanced_is_zero(self):
        assert np.allclose(pb.bin_deviations(config([2, 2])), [0.0, 0.0])

    def test_example(self):
        assert np.allclose(pb.bin_deviations(config([4, 0])), [1.0, -1.0])

    def test_empty_rejected(self):
        with pytest.raises(pb.UndefinedForEmpty):
            pb.bin_deviations(pb.Configuration(z=(0, 0), m=0))

    @given(configs)
    def test_deviations_sum_to_zero(self, z):
        q = pb.bin_deviations(config(z))
        assert abs(q.sum()) <= 1e-12 * len(z)


class TestPairCount:
    def test_examples(self):
        assert pb.pair_count(config([1, 1, 1])) == 0
        assert pb.pair_count(config([4, 0])) == 6

    @given(configs)
    def test_scaled_deviation_identity(self, z):
        # pair count == (m^2/2n^2) sum q^2 + m^2/2n - m/2
        cfg = config(z)
        n, m = cfg.n, cfg.m
        q = pb.bin_deviations(cfg)
        rhs = (m * m / (2 * n * n)) * float(q @ q) + m * m / (2 * n) - m / 2
        assert pb.pair_count(cfg) == pytest.approx(rhs, rel=1e-9, abs=1e-9)

    def test_identity_across_scales(self):
        g = np.random.default_rng(5)
        cases = 0
        for n in (2, 5, 50):
            for m in (n, 10 * n, n * n):
                for _ in range(112):
                    z = g.multinomial(m, [1 / n] * n)
                    cfg = config(z)
                    q = pb.bin_deviations(cfg)
                    rhs = ((m * m / (2 * n * n)) * float(q @ q)
                           + m * m / (2 * n) - m / 2)
                    assert pb.pair_count(cfg) == pytest.approx(
                        rhs, rel=1e-9, abs=1e-9)
                    cases += 1
        assert cases >= 1000


class TestWeightedStats:
    def test_flat_stat_examples(self):
        assert pb.flat_stat(pb.make_planting([1, 1]), config([4, 0])) == 2.0
        assert pb.flat_stat(pb.make_planting([0, 0]), config([4, 0])) == 0.0
        assert pb.flat_stat(pb.make_planting([1, 1]), config([2, 2])) == 0.0

    def test_hilly_stat_examples(self):
        # all-ones weights make the linear statistic vanish
        p = pb.make_planting([1, 1, 1])
        assert pb.hilly_stat(p, config([3, 2, 1])) == pytest.approx(0, abs=1e-12)
        p = pb.make_planting([2, 0])
        assert pb.hilly_stat(p, config([3, 1])) == pytest.approx(1.0)

    def test_single_bin_closed_form(self):
        # with all k balls in bin 0: (k n / m) z_0 - k
        p = pb.make_planting([7, 0, 0])
        for z in ([5, 1, 0], [2, 2, 2], [0, 3, 3]):
            cfg = config(z)
            expected = p.k * cfg.n / cfg.m * z[0] - p.k
            assert pb.hilly_stat(p, cfg) == pytest.approx(
                expected, rel=1e-12, abs=1e-12)

    def test_intermediate_examples(self):
        p = pb.make_planting([1, 1])
        assert pb.intermediate_stat(p, config([4, 0])) == -1.0
        assert pb.intermediate_stat(p, config([2, 2])) == 0.0

    def test_intermediate_is_exact_combination(self):
        g = np.random.default_rng(8)
        for _ in range(100):
            n = int(g.integers(2, 12))
            a = g.integers(0, 5, n)
            z = g.multinomial(int(g.integers(1, 50)), [1 / n] * n)
            p, cfg = pb.make_planting(a), config(z)
            combo = pb.hilly_stat(p, cfg) - pb.flat_stat(p, cfg) / 2
            assert pb.intermediate_stat(p, cfg) == pytest.approx(
                combo, rel=1e-12, abs=1e-12)

    def test_power_stat(self):
        p, cfg = pb.make_planting([2, 0]), config([4, 0])
        assert pb.power_stat(p, cfg, 1) == pb.hilly_stat(p, cfg)
        assert pb.power_stat(p, cfg, 2) == pb.flat_stat(p, cfg)
        assert pb.power_stat(p, cfg, 3) == pytest.approx(2.0)  # q=(1,-1)
        with pytest.raises(pb.UnsupportedPower):
            pb.power_stat(p, cfg, 5)

    def test_balanced_vanishes_for_all_powers(self):
        p = pb.make_planting([3, 1, 0])
        for power in (1, 2, 3, 4):
            assert pb.power_stat(p, config([2, 2, 2]), power) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(pb.DimensionMismatch):
            pb.flat_stat(pb.make_planting([1, 1, 1]), config([1, 1]))

    def test_empty_configuration(self):
        with pytest.raises(pb.UndefinedForEmpty):
            pb.flat_stat(pb.make_planting([1, 1]),
                         pb.Configuration(z=(0, 0), m=0))

    @given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 20)),
                    min_size=1, max_size=20).filter(
                        lambda pairs: sum(z for _, z in pairs) > 0),
           st.randoms(use_true_random=False))
    def test_permutation_invariance(self, pairs, pyrandom):
        a = [x for x, _ in pairs]
        z = [x for _, x in pairs]
        order = list(range(len(pairs)))
        pyrandom.shuffle(order)
        p1, c1 = pb.make_planting(a), config(z)
        p2 = pb.make_planting([a[i] for i in order])
        c2 = config([z[i] for i in order])
        for kind in (StatisticKind.FLAT_F, StatisticKind.HILLY_H,
                     StatisticKind.INTERMEDIATE_I, StatisticKind.PAIRS):
            v1 = statistic_value(p1, c1, kind)
            v2 = statistic_value(p2, c2, kind)
            assert v1 == pytest.approx(v2, rel=1e-9, abs=1e-9)


class TestThresholds:
    def test_flat_cutoff_value(self):
        # k=4, n=4, m=8: kn/m - k^2 n/(2 m^2) = 2 - 0.5
        spec = pb.decision_threshold(pb.make_planting([1] * 4), 8,
                                     StatisticKind.FLAT_F)
        assert spec.mu == 1.5
        assert spec.direction is pb.Direction.CHOOSE_ST_IF_AT_LEAST

    def test_hilly_cutoff_value(self):
        spec = pb.decision_threshold(pb.make_planting([2, 0]), 4,
                                     StatisticKind.HILLY_H)
        assert spec.mu == 0.5
        assert spec.direction is pb.Direction.CHOOSE_PL_IF_AT_LEAST

    def test_intermediate_cutoff_drops_v_term(self):
        p = pb.make_planting([1, 1])  # V = 0
        k, n, m = 2, 2, 5
        spec = pb.decision_threshold(p, m, StatisticKind.INTERMEDIATE_I)
        assert spec.mu == pytest.approx(-k * n / (2 * m)
                                        + k * k * n / (4 * m * m))
        assert spec.direction is pb.Direction.CHOOSE_PL_IF_AT_LEAST

    def test_pairs_has_no_threshold(self):
        with pytest.raises(pb.NoThresholdDefined):
            pb.decision_threshold(pb.make_planting([1, 1]), 4,
                                  StatisticKind.PAIRS)

    def test_decide_directions(self):
        f = pb.decision_threshold(pb.make_planting([1] * 4), 8,
                                  StatisticKind.FLAT_F)
        assert pb.decide(f.mu + 1, f) is pb.Decision.ST
        assert pb.decide(f.mu - 1, f) is pb.Decision.PL
        h = pb.decision_threshold(pb.make_planting([2, 0]), 4,
                                  StatisticKind.HILLY_H)
        assert pb.decide(h.mu - 1, h) is pb.Decision.ST
        assert pb.decide(h.mu + 1, h) is pb.Decision.PL

    def test_ties_go_to_at_least_side(self):
        f = pb.decision_threshold(pb.make_planting([1] * 4), 8,
                                  StatisticKind.FLAT_F)
        assert pb.decide(f.mu, f) is pb.Decision.ST
        h = pb.decision_threshold(pb.make_planting([2, 0]), 4,
                                  StatisticKind.HILLY_H)
        assert pb.decide(h.mu, h) is pb.Decision.PL
