"""Determinantal sampling: window validation, correlation functions, the
inclusion-exclusion oracle, and statistical agreement of the sampler."""

import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from qtail import (
    DomainError,
    SampleConfig,
    Window,
    correlation,
    elliptic_kernel,
    exact_outcome_probabilities,
    kernel_matrix,
    rho1_star_profile,
    sample_window,
)


@pytest.fixture
def kern(ctx, pair):
    def k(x, y):
        return elliptic_kernel(x, y, pair, ctx).value
    return k


@pytest.fixture
def window4(ctx):
    return Window((ctx.point(1, 0), ctx.point(1, 1), ctx.point(-1, 0), ctx.point(-1, 1)))


class TestWindow:
    def test_rejects_empty(self):
        with pytest.raises(DomainError):
            Window(())

    def test_rejects_duplicates(self, ctx):
        with pytest.raises(DomainError):
            Window((ctx.point(1, 0), ctx.point(1, 0)))

    def test_rejects_oversize(self, ctx):
        pts = tuple(ctx.point(1, k) for k in range(65))
        with pytest.raises(DomainError):
            Window(pts)


class TestSampleConfig:
    def test_rejects_nonpositive_draws(self):
        with pytest.raises(DomainError):
            SampleConfig(n_samples=0, seed=1)


class TestCorrelations:
    def test_single_point_in_unit_interval(self, ctx, kern):
        for sign in (1, -1):
            r = correlation([ctx.point(sign, 0)], kern)
            assert 0.0 < r < 1.0

    def test_matrix_hermitian_with_eigs_in_unit_interval(self, window4, kern):
        K = kernel_matrix(window4.points, kern)
        assert np.max(np.abs(K - K.conj().T)) < 1e-10
        lam = np.linalg.eigvalsh(0.5 * (K + K.conj().T))
        assert lam.min() > -1e-10 and lam.max() < 1.0 + 1e-10

    def test_two_point_negative_association(self, ctx, kern):
        # determinantal processes are negatively associated:
        # rho_2(x, y) <= rho_1(x) rho_1(y)
        x, y = ctx.point(1, 0), ctx.point(1, 1)
        r2 = correlation([x, y], kern)
        assert r2 <= correlation([x], kern) * correlation([y], kern) + 1e-12

    def test_rho1_star_profile_positive(self, window4, kern):
        prof = rho1_star_profile(window4.points, kern)
        assert len(prof) == 4
        assert all(0.0 < v <= 0.5 for v in prof)


class TestExactOracle:
    def test_probabilities_sum_to_one(self, window4, kern):
        probs = exact_outcome_probabilities(window4.points, kern)
        assert len(probs) == 16
        assert sum(probs.values()) == pytest.approx(1.0, abs=1e-10)
        assert all(p > -1e-12 for p in probs.values())

    def test_marginals_recover_correlations(self, window4, kern):
        probs = exact_outcome_probabilities(window4.points, kern)
        for i in range(4):
            marg = sum(p for S, p in probs.items() if i in S)
            assert marg == pytest.approx(correlation([window4.points[i]], kern), abs=1e-10)

    def test_rejects_large_window(self, ctx, kern):
        pts = [ctx.point(1, k) for k in range(13)]
        with pytest.raises(DomainError):
            exact_outcome_probabilities(pts, kern)


class TestSampler:
    def test_reproducible_per_seed(self, window4, kern):
        a = sample_window(window4, kern, SampleConfig(50, seed=9))
        b = sample_window(window4, kern, SampleConfig(50, seed=9))
        assert a == b
        c = sample_window(window4, kern, SampleConfig(50, seed=10))
        assert a != c

    def test_sample_prefix_stable_in_count(self, window4, kern):
        # sample s depends only on (seed, s), so growing the count keeps
        # the earlier samples
        a = sample_window(window4, kern, SampleConfig(20, seed=3))
        b = sample_window(window4, kern, SampleConfig(40, seed=3))
        assert b[:20] == a

    def test_outcome_frequencies_match_oracle(self, window4, kern):
        n = 20000
        samples = sample_window(window4, kern, SampleConfig(n, seed=12345))
        counts = Counter(samples)
        probs = exact_outcome_probabilities(window4.points, kern)
        # chi-squared over the 16 outcomes, pooling tiny cells
        obs, exp = [], []
        pool_o = pool_e = 0.0
        for S, p in sorted(probs.items()):
            e = n * max(p, 0.0)
            o = counts.get(S, 0)
            if e < 5.0:
                pool_o += o
                pool_e += e
            else:
                obs.append(o)
                exp.append(e)
        if pool_e > 0:
            obs.append(pool_o)
            exp.append(pool_e)
        exp = np.array(exp) * (n / sum(exp))
        chi2 = float(np.sum((np.array(obs) - exp) ** 2 / exp))
        pval = stats.chi2.sf(chi2, df=len(exp) - 1)
        assert pval > 0.001

    def test_first_moment_within_three_sigma(self, window4, kern):
        n = 20000
        samples = sample_window(window4, kern, SampleConfig(n, seed=777))
        for i, pt in enumerate(window4.points):
            p = correlation([pt], kern)
            freq = sum(1 for s in samples if i in s) / n
            sigma = math.sqrt(p * (1 - p) / n)
            assert abs(freq - p) < 4.0 * sigma

    def test_rejects_non_hermitian_kernel(self, window4):
        with pytest.raises(ArithmeticError):
            sample_window(window4, lambda x, y: complex(x.k - y.k), SampleConfig(1, seed=0))
