import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from hkcluster import (
    ApproxDistribution,
    Distribution,
    HkprParams,
    degree_seed_dist,
    default_sample_count,
    default_walk_cap,
    hkpr_approx_seed,
    hkpr_exact,
    is_eps_approximate,
    pagerank_exact,
    poisson_weights,
    random_walk,
    sample_walk_length,
    sample_walk_lengths,
)
from hkcluster.rng import derive_seed, substream

# closed forms on the two smallest complete graphs; both follow from the
# 2x2 / 3x3 walk-matrix eigendecompositions
K2_T1 = (1.0 + math.exp(-2.0)) / 2.0
K3_T2 = 1.0 / 3.0 + (2.0 / 3.0) * math.exp(-3.0)


class TestPoissonWeights:
    def test_matches_scipy_pmf(self):
        w = poisson_weights(5.0, 30)
        ref = stats.poisson.pmf(np.arange(31), 5.0)
        assert np.allclose(w, ref, rtol=1e-12, atol=0)

    def test_t_zero(self):
        w = poisson_weights(0.0, 4)
        assert w[0] == 1.0
        assert w[1:].sum() == 0.0

    def test_large_t_no_overflow(self):
        w = poisson_weights(5000.0, 6000)
        assert np.all(np.isfinite(w))
        assert w.sum() == pytest.approx(1.0, abs=1e-9)

    def test_errors(self):
        with pytest.raises(ValueError):
            poisson_weights(-1.0, 3)
        with pytest.raises(ValueError):
            poisson_weights(1.0, -1)

    @given(t=st.floats(0.01, 200.0), k_max=st.integers(0, 400))
    @settings(max_examples=60, deadline=None)
    def test_partial_sums_bounded(self, t, k_max):
        w = poisson_weights(t, k_max)
        assert np.all(w >= 0.0)
        assert w.sum() <= 1.0 + 1e-12


class TestWalkLengthSampling:
    def test_t_zero_all_zero(self):
        rng = substream(0)
        assert not sample_walk_lengths(0.0, 100, rng).any()

    def test_deterministic(self):
        a = sample_walk_lengths(7.5, 50, substream(3))
        b = sample_walk_lengths(7.5, 50, substream(3))
        assert (a == b).all()

    @pytest.mark.parametrize("t", [0.5, 7.5, 29.0, 84.9, 300.0])
    def test_moments(self, t):
        # mean of Poisson(t) is t, variance is t; allow 4 sigma on each
        n = 100_000
        x = sample_walk_lengths(t, n, substream(11))
        assert abs(x.mean() - t) < 4.0 * math.sqrt(t / n)
        assert abs(x.var() - t) < 0.05 * t + 4.0 * t * math.sqrt(2.0 / n)

    @pytest.mark.parametrize("t", [40.0, 84.9])
    def test_rejection_region_distribution(self, t):
        # two-sided exact binomial check on P(X <= t): compare the empirical
        # CDF at the mean against scipy's
        n = 200_000
        x = sample_walk_lengths(t, n, substream(5))
        p = stats.poisson.cdf(math.floor(t), t)
        hits = int((x <= math.floor(t)).sum())
        ci = stats.binomtest(hits, n, p).pvalue
        assert ci > 1e-4

    def test_scalar_helper(self):
        assert sample_walk_length(0.0, substream(1)) == 0
        assert isinstance(sample_walk_length(3.0, substream(1)), int)


def test_random_walk_stays_on_graph(bridge):
    rng = substream(9)
    for _ in range(50):
        end = random_walk(bridge, 0, 4, rng)
        assert 0 <= end < bridge.n


def test_random_walk_zero_steps(bridge):
    assert random_walk(bridge, 2, 0, substream(0)) == 2


class TestHkprExact:
    def test_k2_closed_form(self, k2):
        rho = hkpr_exact(k2, Distribution.indicator(2, 0), 1.0, tol=1e-13)
        assert rho.value(0) == pytest.approx(K2_T1, abs=1e-12)

    def test_k3_closed_form(self, k3):
        rho = hkpr_exact(k3, Distribution.indicator(3, 0), 2.0, tol=1e-13)
        assert rho.value(0) == pytest.approx(K3_T2, abs=1e-12)

    def test_t_zero_is_seed(self, bridge):
        rho = hkpr_exact(bridge, Distribution.indicator(bridge.n, 3), 0.0)
        assert rho.value(3) == 1.0

    def test_mass_conserved(self, two_pods):
        rho = hkpr_exact(two_pods, Distribution.indicator(two_pods.n, 0), 12.0, tol=1e-11)
        assert rho.values.sum() == pytest.approx(1.0, abs=1e-10)

    def test_semigroup(self, bridge):
        # e^{-(s+t)L} f = e^{-sL} (e^{-tL} f)
        f = Distribution.indicator(bridge.n, 1)
        tol = 1e-12
        once = hkpr_exact(bridge, f, 5.0, tol)
        twice = hkpr_exact(bridge, hkpr_exact(bridge, f, 2.0, tol), 3.0, tol)
        assert np.abs(once.values - twice.values).max() < 10 * tol

    def test_heat_equation_residual(self, bridge):
        # d/dt rho = -rho (I - P); finite differences should converge at
        # first order in h
        f = Distribution.indicator(bridge.n, 0)
        t = 2.0
        A = bridge.adjacency_matrix()
        rho = hkpr_exact(bridge, f, t, 1e-13).values
        drho = -(rho - (rho / bridge.degree) @ A)
        errs = []
        for h in (1e-3, 1e-4):
            ahead = hkpr_exact(bridge, f, t + h, 1e-13).values
            errs.append(np.abs((ahead - rho) / h - drho).max())
        assert errs[0] < 1e-2
        assert errs[1] < errs[0] / 5.0

    def test_general_seed_distribution(self, bridge):
        f = degree_seed_dist(bridge, {0, 1, 2})
        rho = hkpr_exact(bridge, f, 1.0)
        # linearity: same as the weighted sum of per-seed vectors
        parts = sum(
            f.value(v) * hkpr_exact(bridge, Distribution.indicator(bridge.n, v), 1.0).values
            for v in (0, 1, 2)
        )
        assert np.allclose(rho.values, parts, atol=1e-9)

    def test_rejects_bad_input(self, bridge):
        with pytest.raises(ValueError):
            hkpr_exact(bridge, np.ones(bridge.n), 1.0)  # not a distribution


class TestPagerankExact:
    def test_k2_alpha_half(self, k2):
        pr = pagerank_exact(k2, Distribution.indicator(2, 0), 0.5)
        assert pr.value(0) == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert pr.value(1) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_sums_to_one(self, two_pods):
        pr = pagerank_exact(two_pods, Distribution.indicator(two_pods.n, 5), 1e-3)
        assert pr.values.sum() == pytest.approx(1.0, abs=1e-9)

    def test_geometric_series_limit(self, bridge):
        # alpha sum_k (1-alpha)^k f P^k, truncated far out
        alpha = 0.2
        f = Distribution.indicator(bridge.n, 0)
        A = bridge.adjacency_matrix()
        cur = f.values.copy()
        acc = np.zeros(bridge.n)
        for _ in range(200):
            acc += alpha * cur
            cur = (1 - alpha) * ((cur / bridge.degree) @ A)
        pr = pagerank_exact(bridge, f, alpha)
        assert np.allclose(pr.values, acc, atol=1e-12)

    def test_alpha_range(self, k2):
        with pytest.raises(ValueError):
            pagerank_exact(k2, Distribution.indicator(2, 0), 0.0)
        with pytest.raises(ValueError):
            pagerank_exact(k2, Distribution.indicator(2, 0), 1.5)


class TestDefaults:
    def test_sample_count_frozen(self):
        assert default_sample_count(0.1, 100) == 73683
        assert default_sample_count(0.1, 62) == 66035

    def test_walk_cap_frozen(self):
        assert default_walk_cap(0.1) == 12
        assert default_walk_cap(0.2) == 14  # ln(1/eps) close to 1 inflates the ratio

    def test_walk_cap_small_x(self):
        assert default_walk_cap(0.5) == 1

    def test_params_resolution(self):
        p = HkprParams(t=2.0, eps=0.1).resolved(100)
        assert (p.r, p.K) == (73683, 12)
        with pytest.raises(ValueError):
            HkprParams(t=-1.0, eps=0.1).resolved(10)
        with pytest.raises(ValueError):
            HkprParams(t=1.0, eps=1.5).resolved(10)
        with pytest.raises(ValueError):
            HkprParams(t=1.0, eps=0.1, r=0).resolved(10)


class TestApproxSeed:
    def test_counts_sum_to_r(self, k3):
        nu = hkpr_approx_seed(k3, 1.0, 0, 0.3, HkprParams(t=1.0, eps=0.3, rng_seed=4))
        assert sum(nu.counts.values()) == nu.r
        assert nu.to_dense().sum() == pytest.approx(1.0)

    def test_deterministic(self, bridge):
        p = HkprParams(t=3.0, eps=0.2, rng_seed=17)
        a = hkpr_approx_seed(bridge, 3.0, 0, 0.2, p)
        b = hkpr_approx_seed(bridge, 3.0, 0, 0.2, p)
        assert a.counts == b.counts

    def test_worker_count_invariant(self, two_pods):
        p = HkprParams(t=10.0, eps=0.2, r=20000, rng_seed=8)
        serial = hkpr_approx_seed(two_pods, 10.0, 0, 0.2, p, workers=1)
        pooled = hkpr_approx_seed(two_pods, 10.0, 0, 0.2, p, workers=4)
        assert serial.counts == pooled.counts
        assert serial.walk_steps == pooled.walk_steps

    def test_walk_cap_limits_work(self, k3):
        p = HkprParams(t=50.0, eps=0.5, r=500, K=3, rng_seed=0)
        nu = hkpr_approx_seed(k3, 50.0, 0, 0.5, p)
        assert nu.walk_steps <= 500 * 3

    def test_k_zero_is_seed_indicator(self, bridge):
        p = HkprParams(t=5.0, eps=0.5, r=200, K=0, rng_seed=1)
        nu = hkpr_approx_seed(bridge, 5.0, 2, 0.5, p)
        assert nu.counts == {2: 200}

    def test_converges_to_closed_form(self, k2):
        nu = hkpr_approx_seed(k2, 1.0, 0, 0.1, HkprParams(t=1.0, eps=0.1, rng_seed=2))
        assert nu.value(0) == pytest.approx(K2_T1, abs=0.01)

    def test_sample_error_shrinks_with_r(self, bridge):
        # average over independent repetitions: 16x the walks should give
        # roughly 4x less L1 error; assert at least 2x to keep flake out
        exact = hkpr_exact(bridge, Distribution.indicator(bridge.n, 0), 4.0, 1e-12)

        def mean_l1(r, base):
            tot = 0.0
            for i in range(12):
                nu = hkpr_approx_seed(
                    bridge, 4.0, 0, 0.2,
                    HkprParams(t=4.0, eps=0.2, r=r, K=40, rng_seed=derive_seed(base, i)),
                )
                tot += np.abs(exact.values - nu.to_dense()).mean()
            return tot / 12

        assert mean_l1(16_000, 100) < mean_l1(1_000, 200) / 2.0

    def test_isolated_seed_rejected(self):
        from hkcluster import Graph

        G = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(ValueError, match="isolated"):
            hkpr_approx_seed(G, 1.0, 2, 0.2)


class TestIsEpsApproximate:
    def test_exactly_at_bounds_passes(self):
        rho = Distribution(np.array([0.6, 0.4]))
        # nu exactly (1+eps) rho on one coordinate, (1-eps) rho - eps on none
        nu = ApproxDistribution({0: 66, 1: 34}, r=100, n=2, walk_steps=0)
        ok, viol = is_eps_approximate(rho, nu, 0.1)
        assert ok and viol == []

    def test_above_flagged(self):
        rho = Distribution(np.array([0.5, 0.5]))
        nu = ApproxDistribution({0: 70, 1: 30}, r=100, n=2, walk_steps=0)
        ok, viol = is_eps_approximate(rho, nu, 0.1)
        assert not ok
        kinds = {v.kind for v in viol}
        assert "above" in kinds

    def test_below_with_additive_slack(self):
        # the lower bound has an extra -eps, so moderate undershoot passes
        rho = Distribution(np.array([0.5, 0.5]))
        nu = ApproxDistribution({0: 60, 1: 40}, r=100, n=2, walk_steps=0)
        ok, _ = is_eps_approximate(rho, nu, 0.2)
        assert ok

    def test_off_support_mass_limit(self):
        rho = Distribution(np.array([0.05, 0.8, 0.15]))
        nu = ApproxDistribution({1: 84, 2: 16}, r=100, n=3, walk_steps=0)
        ok, _ = is_eps_approximate(rho, nu, 0.1)
        assert ok  # rho(0) = 0.05 <= eps
        ok2, viol2 = is_eps_approximate(rho, nu, 0.01)
        assert not ok2
        assert any(v.kind == "off_support" and v.vertex == 0 for v in viol2)

    def test_dimension_mismatch(self):
        rho = Distribution(np.array([1.0]))
        nu = ApproxDistribution({0: 1}, r=1, n=2, walk_steps=0)
        with pytest.raises(ValueError):
            is_eps_approximate(rho, nu, 0.1)


class TestSubstreams:
    def test_substream_reproducible(self):
        assert substream(42, 1).integers(1 << 30) == substream(42, 1).integers(1 << 30)

    def test_keys_separate_streams(self):
        a = substream(42, 1).integers(1 << 62)
        b = substream(42, 2).integers(1 << 62)
        assert a != b

    def test_derive_seed_stable(self):
        assert derive_seed(5, 0, 3) == derive_seed(5, 0, 3)
        assert derive_seed(5, 0, 3) != derive_seed(5, 1, 3)
