"""Fourier matrix of the gauged theta kernel: three evaluation routes,
projection structure, and the truncation-order estimate."""

import math

import numpy as np
import pytest

from qtail import (
    Matrix2C,
    QContext,
    QParam,
    fourier_closed,
    fourier_lemma_form,
    fourier_series,
    projection_report,
    validate_pair,
)
from qtail.fourier import truncation_order
from qtail.verify import draw_context, draw_pair

ETAS = [0.0, 0.7, -1.9, math.pi - 0.01, 2.4]


class TestMatrix2C:
    def test_entry_indexing(self):
        M = Matrix2C(1, 2, 3, 4)
        assert M.entry(1, 1) == 1 and M.entry(1, -1) == 2
        assert M.entry(-1, 1) == 3 and M.entry(-1, -1) == 4

    def test_as_array_layout(self):
        A = Matrix2C(1, 2, 3, 4).as_array()
        assert A[0, 1] == 2 and A[1, 0] == 3

    def test_max_abs_diff(self):
        a = Matrix2C(1, 0, 0, 1)
        b = Matrix2C(1, 0.5, 0, 1)
        assert a.max_abs_diff(b) == pytest.approx(0.5)


class TestTruncationOrder:
    def test_grows_with_tightness(self, ctx, pair):
        assert truncation_order(pair, ctx, 1e-16) > truncation_order(pair, ctx, 1e-6)

    def test_geometric_bound_sanity(self, ctx, pair):
        M = truncation_order(pair, ctx, 1e-13)
        q = ctx.q.q
        r = abs(pair.gamma / pair.delta)
        rho = max(math.sqrt(q), math.sqrt(q * r), math.sqrt(q / r))
        assert rho ** (M - 10) <= 1e-13


class TestThreeRoutes:
    @pytest.mark.parametrize("eta", ETAS)
    def test_reference_pair(self, ctx, pair, eta):
        S = fourier_series(eta, pair, ctx)
        C = fourier_closed(eta, pair, ctx)
        L = fourier_lemma_form(eta, pair, ctx)
        assert S.max_abs_diff(C) < 1e-10
        assert S.max_abs_diff(L) < 1e-10

    @pytest.mark.parametrize("eta", [0.3, -2.1])
    def test_principal_pair(self, ctx, principal_pair, eta):
        S = fourier_series(eta, principal_pair, ctx)
        C = fourier_closed(eta, principal_pair, ctx)
        L = fourier_lemma_form(eta, principal_pair, ctx)
        assert S.max_abs_diff(C) < 1e-10
        assert S.max_abs_diff(L) < 1e-10

    def test_random_pairs(self, rng):
        for _ in range(8):
            ctx = draw_context(rng, q_range=(0.3, 0.85))
            pair = draw_pair(rng, ctx)
            eta = float(rng.uniform(-math.pi, math.pi))
            S = fourier_series(eta, pair, ctx)
            C = fourier_closed(eta, pair, ctx)
            scale = max(1.0, float(np.max(np.abs(S.as_array()))))
            assert S.max_abs_diff(C) < 1e-9 * scale


class TestProjection:
    @pytest.mark.parametrize("eta", ETAS)
    def test_rank_one_projection(self, ctx, pair, eta):
        rep = projection_report(eta, pair, ctx)
        assert rep["hermitian_residual"] < 1e-11
        assert rep["det_residual"] < 1e-11
        assert rep["trace_residual"] < 1e-11
        assert rep["idempotent_residual"] < 1e-10

    def test_eigenvalues_are_zero_and_one(self, ctx, pair):
        M = fourier_closed(0.9, pair, ctx).as_array()
        lam = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
        assert lam[0] == pytest.approx(0.0, abs=1e-10)
        assert lam[1] == pytest.approx(1.0, abs=1e-10)

    def test_diagonal_entries_in_unit_interval(self, ctx, pair):
        for eta in ETAS:
            M = fourier_closed(eta, pair, ctx)
            assert -1e-12 < M.pp.real < 1.0 + 1e-12
            assert -1e-12 < M.mm.real < 1.0 + 1e-12
