"""Lattice kernels: validation of pairs/quadruples, closed forms against the
direct quotient, contour diagonals against the log-derivative diagonals,
gauge structure, and the equal-parameter continuation."""

import cmath
import math

import numpy as np
import pytest

from qtail import (
    DEFAULT_TOL,
    DomainError,
    LatticePoint,
    QContext,
    QParam,
    basic_kernel,
    closed_diag,
    elliptic_diag_contour,
    elliptic_kernel,
    elliptic_kernel_equal,
    frak_F,
    frak_F_transformed,
    gauge_eps,
    gauge_nu,
    hat_kernel,
    tilde_kernel,
    validate_pair,
    validate_quadruple,
)
from qtail.kernels import _elliptic_direct

from conftest import DELTA_REF, GAMMA_REF


class TestLatticeTypes:
    def test_context_requires_sign_ordering(self):
        with pytest.raises(DomainError):
            QContext(QParam(0.5), -1.0, -2.0)
        with pytest.raises(DomainError):
            QContext(QParam(0.5), 1.0, 2.0)

    def test_point_value(self, ctx):
        assert ctx.point(1, 3).value(ctx) == pytest.approx(1.3 * 0.5 ** 3)
        assert ctx.point(-1, -2).value(ctx) == pytest.approx(-0.55 * 0.5 ** -2)

    def test_point_rejects_bad_sign(self):
        with pytest.raises(DomainError):
            LatticePoint(0, 1)

    def test_exponent_clamp(self):
        with pytest.raises(DomainError):
            LatticePoint(1, 401)

    def test_shift(self):
        assert LatticePoint(1, 2).shift(3) == LatticePoint(1, 5)


class TestValidation:
    def test_complementary_pair(self, ctx, pair):
        assert pair.series == "complementary"
        assert not pair.equal

    def test_principal_pair(self, ctx):
        g = 0.7 * cmath.exp(0.9j)
        p = validate_pair(g, g.conjugate(), ctx)
        assert p.series == "principal"

    def test_rejects_non_conjugate_complex(self, ctx):
        with pytest.raises(DomainError):
            validate_pair(0.7 * cmath.exp(0.9j), 0.7 * cmath.exp(0.5j), ctx)

    def test_rejects_opposite_sign_reals(self, ctx):
        with pytest.raises(DomainError):
            validate_pair(0.3, -0.3, ctx)

    def test_rejects_different_q_intervals(self, ctx):
        # reciprocals land in different q-intervals of the positive branch
        g = 0.5 ** 0.3 / ctx.zeta_plus
        d = 0.5 ** 1.4 / ctx.zeta_plus
        with pytest.raises(DomainError):
            validate_pair(g, d, ctx)

    def test_rejects_reciprocal_lattice_point(self, ctx):
        with pytest.raises(DomainError):
            validate_pair(0.5 ** 2 / ctx.zeta_plus, 0.5 ** 2.5 / ctx.zeta_plus, ctx)

    def test_quadruple_product_constraint(self, ctx):
        with pytest.raises(DomainError):
            validate_quadruple(GAMMA_REF * 0.9, DELTA_REF * 0.9,
                               GAMMA_REF, DELTA_REF, ctx)

    def test_quadruple_pair_property(self, quad):
        p = quad.pair
        assert p.gamma == quad.gamma and p.delta == quad.delta


class TestEllipticClosedForms:
    POINTS = [(1, 0), (1, 3), (1, -2), (-1, 0), (-1, 2), (-1, -1)]

    def test_closed_matches_direct_quotient(self, ctx, pair):
        for sx, kx in self.POINTS:
            for sy, ky in self.POINTS:
                if (sx, kx) == (sy, ky):
                    continue
                x, y = ctx.point(sx, kx), ctx.point(sy, ky)
                closed = elliptic_kernel(x, y, pair, ctx).value
                direct = _elliptic_direct(x.value(ctx), y.value(ctx), pair, ctx,
                                          DEFAULT_TOL)
                assert abs(closed - direct) <= 1e-11 * max(1.0, abs(closed))

    def test_symmetry(self, ctx, pair):
        x, y = ctx.point(1, 2), ctx.point(-1, -1)
        assert elliptic_kernel(x, y, pair, ctx).value == pytest.approx(
            elliptic_kernel(y, x, pair, ctx).value, rel=1e-12)

    def test_diag_translation_invariant(self, ctx, pair):
        base = elliptic_kernel(ctx.point(1, 0), ctx.point(1, 0), pair, ctx).value
        for k in (-5, 3, 17):
            v = elliptic_kernel(ctx.point(1, k), ctx.point(1, k), pair, ctx).value
            assert v == pytest.approx(base, rel=1e-12)

    def test_diag_trace_is_one(self, ctx, pair):
        dp = closed_diag(1, pair, ctx).value
        dm = closed_diag(-1, pair, ctx).value
        assert (dp + dm).real == pytest.approx(1.0, abs=1e-12)
        assert 0.0 < dp.real < 1.0 and 0.0 < dm.real < 1.0

    def test_contour_diag_matches_closed(self, ctx, pair):
        for sign in (1, -1):
            x = ctx.point(sign, 0)
            cont = elliptic_diag_contour(x, pair, ctx).value
            closed = closed_diag(sign, pair, ctx).value
            assert abs(cont - closed) <= 1e-10 * max(1.0, abs(closed))

    def test_principal_pair_values_real_on_lattice(self, ctx, principal_pair):
        for (sx, kx), (sy, ky) in [((1, 0), (1, 1)), ((1, 0), (-1, 0)), ((-1, 1), (-1, -1))]:
            v = elliptic_kernel(ctx.point(sx, kx), ctx.point(sy, ky),
                                principal_pair, ctx).value
            assert abs(v.imag) <= 1e-12 * max(1.0, abs(v))

    def test_off_lattice_diagonal_raises(self, ctx, pair):
        with pytest.raises(DomainError):
            elliptic_kernel(0.77, 0.77, pair, ctx)


class TestEqualParameters:
    def test_is_limit_of_distinct_pairs(self, ctx):
        g = GAMMA_REF
        eps = 1e-6
        points = [(1, 0), (1, 2), (-1, 0), (-1, 1)]
        for i, a in enumerate(points):
            for b in points[i:]:
                x, y = ctx.point(*a), ctx.point(*b)
                equal = elliptic_kernel_equal(x, y, g, ctx).value
                perturbed = elliptic_kernel(
                    x, y, validate_pair(g, g * (1.0 + eps), ctx), ctx).value
                assert abs(equal - perturbed) <= 1e-4 * max(1.0, abs(equal))

    def test_dispatch_from_elliptic_kernel(self, ctx):
        g = GAMMA_REF
        pair = validate_pair(g, g, ctx)
        assert pair.equal
        x, y = ctx.point(1, 0), ctx.point(1, 1)
        assert elliptic_kernel(x, y, pair, ctx).value == pytest.approx(
            elliptic_kernel_equal(x, y, g, ctx).value, rel=1e-12)


class TestGauges:
    def test_gauge_values(self):
        assert gauge_eps(LatticePoint(1, 7)) == 1
        assert gauge_eps(LatticePoint(-1, 3)) == -1
        assert gauge_eps(LatticePoint(-1, 4)) == 1
        assert gauge_nu(LatticePoint(1, 3)) == -1
        assert gauge_nu(LatticePoint(-1, 3)) == 1

    def test_tilde_translation_invariance(self, ctx, pair):
        for (sx, kx), (sy, ky) in [((1, 0), (1, 2)), ((1, 1), (-1, 0)), ((-1, 0), (-1, 3))]:
            base = tilde_kernel(ctx.point(sx, kx), ctx.point(sy, ky), pair, ctx).value
            for dm in (1, 4, -3):
                v = tilde_kernel(ctx.point(sx, kx + dm), ctx.point(sy, ky + dm),
                                 pair, ctx).value
                assert v == pytest.approx(base, rel=1e-11)

    def test_hat_diagonal_is_complementary(self, ctx, pair):
        # particle-hole involution on the plus branch: 1 - K there
        raw = elliptic_kernel(ctx.point(1, 0), ctx.point(1, 0), pair, ctx).value
        hat = hat_kernel(ctx.point(1, 0), ctx.point(1, 0), pair, ctx).value
        assert hat == pytest.approx(1.0 - raw, rel=1e-12)
        raw_m = elliptic_kernel(ctx.point(-1, 0), ctx.point(-1, 0), pair, ctx).value
        hat_m = hat_kernel(ctx.point(-1, 0), ctx.point(-1, 0), pair, ctx).value
        assert hat_m == pytest.approx(raw_m, rel=1e-12)

    def test_hat_cross_blocks_antisymmetric(self, ctx, pair):
        x, y = ctx.point(1, 2), ctx.point(-1, 1)
        assert hat_kernel(x, y, pair, ctx).value == pytest.approx(
            -hat_kernel(y, x, pair, ctx).value, rel=1e-12)


class TestBasicKernel:
    def test_building_function_two_routes_agree(self, ctx, quad):
        for x in (1.3 * 0.5 ** 2, -0.55 * 0.5, 1.3 * 0.5 ** 5):
            for r in (0, 1):
                d = frak_F(x, r, quad, ctx).value
                t = frak_F_transformed(x, r, quad, ctx).value
                assert abs(d - t) <= 1e-10 * max(abs(d), abs(t), 1e-30)

    def test_symmetry(self, ctx, quad):
        x, y = ctx.point(1, 1), ctx.point(-1, 0)
        assert basic_kernel(x, y, quad, ctx).value == pytest.approx(
            basic_kernel(y, x, quad, ctx).value, rel=1e-10)

    def test_values_real_and_bounded(self, ctx, quad):
        for (sx, kx), (sy, ky) in [((1, 0), (1, 1)), ((1, 2), (-1, 0)), ((-1, 0), (-1, 1))]:
            v = basic_kernel(ctx.point(sx, kx), ctx.point(sy, ky), quad, ctx).value
            assert abs(v.imag) <= 1e-10 * max(1.0, abs(v))
            assert abs(v) < 10.0

    def test_diagonal_contour_in_unit_interval(self, ctx, quad):
        for sign, k in [(1, 0), (1, 3), (-1, 1)]:
            v = basic_kernel(ctx.point(sign, k), ctx.point(sign, k), quad, ctx).value
            assert 0.0 < v.real < 1.0
            assert abs(v.imag) <= 1e-9

    def test_deep_exponent_stability(self, ctx, quad):
        # the meromorphic parts individually overflow the double range near
        # k ~ 30-40; the log-space assembly must keep the kernel O(1)
        v = basic_kernel(ctx.point(1, 40), ctx.point(1, 41), quad, ctx).value
        assert math.isfinite(v.real) and abs(v) < 10.0

    def test_deep_diagonal_approaches_theta_kernel(self, ctx, quad, pair):
        deep = basic_kernel(ctx.point(1, 40), ctx.point(1, 40), quad, ctx).value
        target = elliptic_kernel(ctx.point(1, 0), ctx.point(1, 0), pair, ctx).value
        assert abs(deep - target) < 1e-5
