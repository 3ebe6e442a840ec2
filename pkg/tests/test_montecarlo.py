"""Experiment harness: determinism, KS machinery, density, diagnostics."""

import json
import math

import numpy as np
import pytest
import scipy.stats

import ongraph as og
from ongraph import montecarlo


class TestDeterminism:
    def test_worker_count_invariance_ong(self):
        base = dict(kind="ong_total", replications=10_000, master_seed=42,
                    n=50, alpha=1.0, variant="plain", bins=20)
        r1 = og.run_experiment(og.ExperimentConfig(**base, worker_count=1))
        r2 = og.run_experiment(og.ExperimentConfig(**base, worker_count=4))
        assert r1.to_json() == r2.to_json()

    def test_worker_count_invariance_rde(self):
        base = dict(kind="rde", replications=9_000, master_seed=43,
                    alpha=1.0, family="G", tol=1e-3)
        r1 = og.run_experiment(og.ExperimentConfig(**base, worker_count=1))
        r2 = og.run_experiment(og.ExperimentConfig(**base, worker_count=3))
        assert r1.to_json() == r2.to_json()

    def test_repeat_run_identical(self):
        cfg = og.ExperimentConfig(kind="nn_total", replications=20_000,
                                  master_seed=7, n=10, alpha=1.0)
        assert og.run_experiment(cfg).to_json() == og.run_experiment(cfg).to_json()

    def test_config_echo_excludes_hints(self):
        cfg = og.ExperimentConfig(kind="nn_total", replications=100,
                                  master_seed=7, n=5, alpha=1.0,
                                  worker_count=3)
        assert "worker_count" not in og.run_experiment(cfg).config


class TestReports:
    def test_moment_fields(self):
        rep = og.run_experiment(og.ExperimentConfig(
            kind="ong_total", replications=50_000, master_seed=3, n=2))
        assert rep.count == 50_000
        assert abs(rep.mean - 1.0 / 3.0) < 3.0 * rep.se_mean
        assert abs(rep.se_mean - math.sqrt(rep.variance / rep.count)) < 1e-15
        payload = json.loads(rep.to_json())
        assert payload["config"]["kind"] == "ong_total"

    def test_histogram_counts(self):
        rep = og.run_experiment(og.ExperimentConfig(
            kind="nn_total", replications=5_000, master_seed=5, n=6, bins=12))
        assert sum(rep.histogram["counts"]) == 5_000
        assert len(rep.histogram["bin_edges"]) == 13

    def test_moment_merge_matches_direct(self):
        # block-merged moments equal a direct whole-sample computation
        cfg = og.ExperimentConfig(kind="nn_total", replications=10_000,
                                  master_seed=11, n=8, alpha=2.0, retain=True)
        rep = og.run_experiment(cfg)
        x = rep.samples
        assert abs(rep.mean - x.mean()) < 1e-12
        assert abs(rep.variance - x.var(ddof=1)) < 1e-12
        c = x - x.mean()
        assert abs(rep.third_central_moment - np.mean(c ** 3)) < 1e-12

    def test_nn_total_mean_matches_exact(self):
        rep = og.run_experiment(og.ExperimentConfig(
            kind="nn_total", replications=100_000, master_seed=6, n=10))
        assert abs(rep.mean - og.expected_nn_weight(10, 1.0)) < 3.0 * rep.se_mean

    def test_resource_cap(self):
        cfg = og.ExperimentConfig(kind="nn_total", replications=10_000,
                                  master_seed=1, n=4, resource_cap=5_000)
        with pytest.raises(og.ResourceCapError) as exc:
            og.run_experiment(cfg)
        assert exc.value.completed == 4096

    def test_validation(self):
        with pytest.raises(og.DomainError):
            og.ExperimentConfig(kind="bogus", replications=10).validate()
        with pytest.raises(og.DomainError):
            og.ExperimentConfig(kind="nn_total", replications=10, n=1).validate()
        with pytest.raises(og.DomainError):
            og.ExperimentConfig(kind="ong_total", replications=10, n=5,
                                d=2, variant="rooted0").validate()
        with pytest.raises(og.DomainError):
            og.ExperimentConfig(kind="rde", replications=10, alpha=0.4).validate()


class TestCentredSample:
    def test_exact_centring_variance(self, ong_centred_100k):
        samples, info, _ = ong_centred_100k
        assert info["centring"] == "exact"
        assert not info["empirical_mean_flag"]
        se = samples.std() / math.sqrt(samples.size)
        assert abs(samples.mean()) < 3.0 * se
        # the n = 1000 simulation lands near the reported sample variance
        assert abs(samples.var(ddof=1) - 0.0425) < 1e-3

    def test_degenerate_single_point(self):
        samples, info = og.centred_ong_sample(1, 1.0, "plain", 500, 9)
        expect = og.expected_ong_weight(1, 1.0, "plain").value
        assert np.allclose(samples, -expect, atol=1e-12)

    def test_empirical_flagged(self):
        samples, info = og.centred_ong_sample(20, 1.0, "plain", 2000, 9,
                                              centring="empirical")
        assert info["empirical_mean_flag"]
        assert abs(samples.mean()) < 1e-12

    def test_asymptotic_centring(self):
        samples, info = og.centred_ong_sample(1000, 1.0, "plain", 2000, 9,
                                              centring="asymptotic")
        ref = 0.5 * math.log(1000) + og.EULER_GAMMA / 2.0 - 0.25
        assert abs(info["subtracted_mean"] - ref) < 1e-12

    def test_exact_centring_needs_d1(self):
        with pytest.raises(og.DomainError):
            og.centred_ong_sample(10, 1.0, "plain", 100, 1, d=2)


class TestKs:
    def test_two_sample_self_zero(self):
        x = np.linspace(0.0, 1.0, 101)
        assert og.ks_statistic(x, x.copy()).statistic == 0.0

    def test_against_scipy(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=1500)
        y = rng.normal(0.1, 1.0, size=900)
        ours = og.ks_statistic(x, y)
        ref = scipy.stats.ks_2samp(x, y, method="asymp")
        assert abs(ours.statistic - ref.statistic) < 1e-12
        ours1 = og.ks_statistic(x, scipy.stats.norm.cdf)
        ref1 = scipy.stats.kstest(x, "norm")
        assert abs(ours1.statistic - ref1.statistic) < 1e-12

    def test_critical_value(self):
        # 99.9% one-sample coefficient is sqrt(-log(0.0005)/2) ~ 1.9495
        assert abs(og.ks_critical_value(10**5) - 1.9494754/math.sqrt(10**5)) < 1e-7
        assert abs(og.ks_critical_value(100, 400)
                   - 1.9494754 * math.sqrt(500.0 / 40000.0)) < 1e-7

    def test_empty_rejected(self):
        with pytest.raises(og.DomainError):
            og.ks_statistic([], lambda t: t)


class TestDensity:
    def test_standard_normal(self):
        rng = np.random.default_rng(12)
        est = og.estimate_density(rng.normal(size=100_000), bins=150)
        at0 = float(np.interp(0.0, est.grid, est.curve))
        assert abs(at0 - 0.3989) < 0.01
        assert abs(est.curve_integral() - 1.0) < 1e-3

    def test_g_draw_density_shape(self, g_draws_100k):
        values, _, _ = g_draws_100k
        est = og.estimate_density(values, bins=200)
        # unimodal smooth curve with mode near 0
        mode = est.grid[np.argmax(est.curve)]
        assert abs(mode) < 0.1
        assert abs(est.curve_integral() - 1.0) < 1e-3
        assert sum(est.counts) == values.size

    def test_constant_samples(self):
        est = og.estimate_density(np.full(500, 0.7), bins=11)
        assert np.count_nonzero(est.counts) == 1

    def test_too_few(self):
        with pytest.raises(og.DomainError):
            og.estimate_density(np.arange(50.0), bins=5)


class TestDiagnostics:
    def test_alpha1_identically_zero(self):
        rows = og.appendix_diagnostics([10, 100], 1.0, 20_000, 17)
        assert all(r.binomial_remainder_l3 == 0.0 for r in rows)

    def test_decreasing_small_grid(self):
        rows = og.appendix_diagnostics([50, 500], 0.75, 30_000, 18)
        assert rows[0].binomial_remainder_l3 > rows[1].binomial_remainder_l3
        assert rows[0].log_moment_gap > rows[1].log_moment_gap

    def test_domain(self):
        with pytest.raises(og.DomainError):
            og.appendix_diagnostics([10], 1.5, 100, 1)
        with pytest.raises(og.DomainError):
            og.appendix_diagnostics([1], 0.5, 100, 1)


class TestPathwiseMonotone:
    def test_totals_nondecreasing_in_n(self):
        # per-path totals are prefix sums of nonnegative increment powers
        pts = np.random.default_rng(3).random((300, 1))
        tr = og.increments(pts, "plain")
        totals = np.cumsum(tr.values ** 2.0)
        assert np.all(np.diff(totals) >= 0.0)
