"""Monte Carlo estimators: reproducibility, coupling, and report contracts."""

import math

import pytest

from slekit import mc

X, EPS = 1.0, 2.0 ** -0.5
FAST = dict(n_samples=400, steps=400, seed=5, T=4.0)


class TestReproducibility:
    def test_same_config_same_numbers(self):
        a = mc.estimate_avoidance(X, EPS, **FAST)
        b = mc.estimate_avoidance(X, EPS, **FAST)
        assert a.mean == b.mean
        assert a.stderr == b.stderr
        assert a.config_digest == b.config_digest

    def test_thread_count_does_not_change_values(self):
        a = mc.estimate_avoidance(X, EPS, **FAST)
        c = mc.estimate_avoidance(X, EPS, threads=3, **FAST)
        d = mc.estimate_avoidance(X, EPS, threads=7, **FAST)
        assert a.mean == c.mean == d.mean

    def test_seed_changes_values(self):
        a = mc.estimate_avoidance(X, EPS, **FAST)
        b = mc.estimate_avoidance(X, EPS, n_samples=400, steps=400, seed=6,
                                  T=4.0)
        assert a.config_digest != b.config_digest
        assert a.mean != b.mean

    def test_prefix_stability_in_sample_count(self):
        # replica streams are keyed per column, so growing n only appends
        small = mc.estimate_avoidance(X, EPS, n_samples=200, steps=300,
                                      seed=9, T=4.0)
        large = mc.estimate_avoidance(X, EPS, n_samples=400, steps=300,
                                      seed=9, T=4.0)
        n_small = round(small.mean * 200)
        # the first 200 replicas of the larger run decided identically
        partial = mc.estimate_avoidance(X, EPS, n_samples=200, steps=300,
                                        seed=9, T=4.0)
        assert round(partial.mean * 200) == n_small
        assert large.n_samples == 400


class TestComplementarity:
    def test_avoidance_plus_hitting_is_one(self):
        a = mc.estimate_avoidance(X, EPS, **FAST)
        h = mc.estimate_hitting([(X, EPS)], **FAST)
        assert abs(a.mean + h.mean - 1.0) < 1e-12
        assert a.stderr == h.stderr

    def test_theory_values_complementary(self):
        a = mc.estimate_avoidance(X, EPS, **FAST)
        h = mc.estimate_hitting([(X, EPS)], **FAST)
        assert a.theory == pytest.approx(2.0 ** -0.3125)
        assert h.theory == pytest.approx(1.0 - 2.0 ** -0.3125)

    def test_theory_absent_off_restriction_kappa(self):
        a = mc.estimate_avoidance(X, EPS, kappa=2.0, **FAST)
        assert a.theory is None
        assert a.deviation() is None


class TestEstimatorContracts:
    def test_stderr_contracts_with_n(self):
        small = mc.estimate_avoidance(X, EPS, n_samples=300, steps=300,
                                      seed=3, T=4.0)
        big = mc.estimate_avoidance(X, EPS, n_samples=1200, steps=300,
                                    seed=3, T=4.0)
        ratio = small.stderr / big.stderr
        assert 1.6 < ratio < 2.4

    def test_empty_slit_family(self):
        h = mc.estimate_hitting([], n_samples=100, seed=0)
        assert h.mean == 1.0
        assert h.stderr == 0.0
        assert h.theory == 1.0

    def test_multi_slit_joint_hit_no_larger_than_single(self):
        single = mc.estimate_hitting([(X, EPS)], **FAST)
        joint = mc.estimate_hitting([(X, EPS), (-1.5, 0.4)], **FAST)
        assert joint.mean <= single.mean + 1e-12
        assert joint.theory is None

    def test_kappa_zero_avoids_offaxis_slit(self):
        a = mc.estimate_avoidance(X, EPS, kappa=0.0, n_samples=50,
                                  steps=200, seed=0, T=1.0)
        assert a.mean == 1.0

    def test_horizon_resolution_returns_multiple_of_base(self):
        a = mc.estimate_avoidance(X, EPS, n_samples=300, steps=300, seed=2)
        base = 4.0
        assert a.horizon >= base
        assert math.log2(a.horizon / base) == round(
            math.log2(a.horizon / base))

    def test_coupled_nested_slits_order(self):
        # same seed and horizon: the thinner slit is hit on a subset of paths
        wide = mc.estimate_hitting([(X, EPS)], **FAST)
        thin = mc.estimate_hitting([(X, EPS / 2)], **FAST)
        assert thin.mean <= wide.mean + 1e-12


class TestMartingale:
    def test_report_contract(self):
        rep = mc.martingale_check_Yt(X, EPS, n_samples=300, steps=400,
                                     seed=7, times=(0.1, 0.25))
        assert rep.times == (0.1, 0.25)
        assert rep.initial_value == pytest.approx(2.0 ** -0.3125)
        assert rep.max_value <= 1.0 + 1e-6
        assert rep.n_discarded <= 6
        assert rep.n_samples + rep.n_discarded == 300
        for e in rep.estimates:
            assert abs(e.mean - rep.initial_value) <= 5.0 * e.stderr

    def test_rejects_offgrid_time(self):
        with pytest.raises(ValueError):
            mc.martingale_check_Yt(X, EPS, n_samples=10, steps=100,
                                   times=(0.1, 0.3), seed=0)
        with pytest.raises(ValueError):
            mc.martingale_check_Yt(X, EPS, n_samples=10, steps=100,
                                   times=(), seed=0)

    def test_within_reflects_tolerance(self):
        rep = mc.martingale_check_Yt(X, EPS, n_samples=400, steps=400,
                                     seed=11, times=(0.25,))
        assert rep.within(1e9)
        e = rep.estimates[0]
        gap = abs(e.mean - rep.initial_value)
        if gap > 0:
            assert not rep.within(gap / e.stderr * 0.5)


class TestDrift:
    def test_first_order_convergence(self):
        rep = mc.drift_check_t0(X, EPS)
        assert max(rep.rel_errors) < 0.05
        assert 0.7 < rep.order < 1.3
        assert rep.slit == (X, EPS)
        assert len(rep.lhs) == len(rep.dts)

    def test_second_geometry(self):
        rep = mc.drift_check_t0(-2.0, 0.4)
        assert max(rep.rel_errors) < 0.05
        assert 0.7 < rep.order < 1.3


class TestDimension:
    def test_report_fields_and_rough_value(self):
        rep = mc.estimate_dimension(8.0 / 3.0, n_paths=3, steps=1500, seed=4)
        assert rep.target == pytest.approx(4.0 / 3.0)
        assert len(rep.box_sizes) == len(rep.counts)
        assert all(c > 0 for c in rep.counts)
        # counts grow as boxes shrink
        assert rep.counts[-1] > rep.counts[0]
        assert 1.0 < rep.estimate < 1.8

    def test_deterministic(self):
        a = mc.estimate_dimension(2.0, n_paths=2, steps=800, seed=1)
        b = mc.estimate_dimension(2.0, n_paths=2, steps=800, seed=1)
        assert a.estimate == b.estimate


class TestDrivingVariance:
    def test_ratio_near_one(self):
        ratio = mc.driving_variance_ratio(2.0, n_samples=3000, seed=13)
        assert abs(ratio - 1.0) < 0.1

    def test_rejects_nonpositive_kappa(self):
        with pytest.raises(ValueError):
            mc.driving_variance_ratio(0.0)


class TestConfigDigest:
    def test_key_order_invariant(self):
        assert mc.config_digest({"a": 1, "b": 2}) \
            == mc.config_digest({"b": 2, "a": 1})

    def test_value_sensitivity(self):
        assert mc.config_digest({"a": 1}) != mc.config_digest({"a": 2})
