"""Identity checks with independent left/right evaluations.

Every operation evaluates both sides of an identity by unrelated routes
(series vs. product, sum vs. theta quotient) and reports the relative
residual

    |lhs - rhs| / max(|lhs|, |rhs|, 1e-30).

The module also hosts the seeded random parameter draws used by the test
suite and the command-line ``verify`` command, so that every randomized
check is reproducible from its seed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .fourier import fourier_closed, fourier_lemma_form, fourier_series
from .kernels import (
    AdmissiblePair,
    AdmissibleQuadruple,
    QContext,
    validate_pair,
    validate_quadruple,
)
from .qspecial import (
    DEFAULT_TOL,
    DomainError,
    QParam,
    Tolerance,
    qpoch_inf,
    theta,
    theta_logderiv,
    theta_multi,
)

__all__ = [
    "IdentityReport",
    "weierstrass_residual",
    "ramanujan_sum_residual",
    "logderiv_sum_residual",
    "trace_identity_residual",
    "fourier_equality_residual",
    "diagonal_identity_residual",
    "draw_context",
    "draw_pair",
    "draw_quadruple",
]

RESIDUAL_FLOOR = 1e-30


@dataclass(frozen=True)
class IdentityReport:
    identity_name: str
    lhs: complex
    rhs: complex
    rel_residual: float
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return math.isfinite(self.rel_residual)


def _report(name: str, lhs: complex, rhs: complex, params: dict,
            scale: float = 0.0) -> IdentityReport:
    """The residual is normalized by the natural scale of the identity
    (largest constituent term) when given, so that cancellation between
    large terms is not mistaken for disagreement."""
    res = abs(lhs - rhs) / max(abs(lhs), abs(rhs), scale, RESIDUAL_FLOOR)
    return IdentityReport(name, lhs, rhs, res, params)


def weierstrass_residual(X: complex, Y: complex, Z: complex, W: complex, q: QParam,
                         tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """Three-term theta relation in four free variables:

        th(qYZ, Z/Y, qXW, W/X) - th(qYW, W/Y, qXZ, Z/X)
            = -(Z/Y) th(qXY, Y/X, qZW, W/Z).

    One product is kept on each side (the third moves to the right), so
    the relative residual is conditioned on the size of the products
    rather than on their possibly tiny difference.
    """
    qq = q.q
    t1 = theta_multi([qq * Y * Z, Z / Y, qq * X * W, W / X], q, tol).value
    t2 = theta_multi([qq * Y * W, W / Y, qq * X * Z, Z / X], q, tol).value
    t3 = -(Z / Y) * theta_multi([qq * X * Y, Y / X, qq * Z * W, W / Z], q, tol).value
    return _report("weierstrass_three_term", t1, t2 + t3,
                   {"X": X, "Y": Y, "Z": Z, "W": W, "q": qq},
                   scale=max(abs(t1), abs(t2), abs(t3)))


def ramanujan_sum_residual(a: complex, z: complex, p: float,
                           tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """Bilateral sum sum_m a^m / (z p^m + z^{-1} p^{-m}) against its theta
    quotient; converges for p < |a| < 1/p."""
    if not 0.0 < p < 1.0:
        raise DomainError("p must lie in (0, 1)")
    if not p < abs(a) < 1.0 / p:
        raise DomainError("need p < |a| < 1/p for convergence")
    q2 = QParam(p * p)
    lhs = 0.0 + 0.0j
    for m in _bilateral_range(max(abs(a) * p, p / abs(a)), tol):
        lhs += a ** m / (z * p ** m + p ** (-m) / z)
    tp1 = -(qpoch_inf(p * p, q2, tol).value ** 2)  # theta'_{p^2}(1)
    rhs = (
        -z * theta(-a * p * z * z, q2, tol).value * tp1
        / (theta(-z * z, q2, tol).value * theta(a * p, q2, tol).value)
    )
    return _report("bilateral_secant_sum", lhs, rhs, {"a": a, "z": z, "p": p})


def logderiv_sum_residual(z: complex, p: float,
                          tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """sum_{m != 0} z^m / (p^{-m} - p^m) against -p z theta'(pz)/theta(pz)
    in base p^2; converges for p < |z| < 1/p."""
    if not 0.0 < p < 1.0:
        raise DomainError("p must lie in (0, 1)")
    if not p < abs(z) < 1.0 / p:
        raise DomainError("need p < |z| < 1/p for convergence")
    q2 = QParam(p * p)
    lhs = 0.0 + 0.0j
    for m in _bilateral_range(max(abs(z) * p, p / abs(z)), tol):
        if m != 0:
            lhs += z ** m / (p ** (-m) - p ** m)
    rhs = -p * z * theta_logderiv(p * z, q2, tol)
    return _report("bilateral_logderiv_sum", lhs, rhs, {"z": z, "p": p})


def _bilateral_range(rho: float, tol: Tolerance):
    M = int(math.ceil(math.log(tol.cut) / math.log(rho))) + 5
    return range(-M, M + 1)


def trace_identity_residual(eta: float, pair: AdmissiblePair, ctx: QContext,
                            tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """Trace of the closed-form Fourier matrix against 1 (a disguised
    instance of the three-term theta relation)."""
    M = fourier_closed(eta, pair, ctx, tol)
    lhs = M.pp + M.mm
    return _report("fourier_trace_one", lhs, 1.0 + 0.0j,
                   {"eta": eta, "gamma": pair.gamma, "delta": pair.delta})


def fourier_equality_residual(eta: float, pair: AdmissiblePair, ctx: QContext,
                              tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """Worst entrywise disagreement among the three evaluation routes of
    the Fourier matrix (lattice sum, product form, log-derivative form)."""
    S = fourier_series(eta, pair, ctx, tol).as_array()
    C = fourier_closed(eta, pair, ctx, tol).as_array()
    L = fourier_lemma_form(eta, pair, ctx, tol).as_array()
    scale = float(max(np.max(np.abs(S)), np.max(np.abs(C)), np.max(np.abs(L))))
    worst = (-1.0, complex(S[0, 0]), complex(C[0, 0]))
    for A, B in ((S, C), (S, L)):
        for i in range(2):
            for j in range(2):
                d = abs(A[i, j] - B[i, j])
                if d > worst[0]:
                    worst = (d, complex(A[i, j]), complex(B[i, j]))
    _, lhs, rhs = worst
    return _report("fourier_three_route_equality", lhs, rhs,
                   {"eta": eta, "gamma": pair.gamma, "delta": pair.delta},
                   scale=scale)


def diagonal_identity_residual(c: float, d: float, ctx: QContext,
                               tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """Log-derivative combination against the closed theta-product ratio:

        l(c,d) = d^2 zp th'(d^2 zp)/th(d^2 zp) - c^2 zp th'(c^2 zp)/th(c^2 zp)
                 + (sq c/d) th'(sq c/d)/th(sq c/d) - (sq d/c) th'(sq d/c)/th(sq d/c)
        r(c,d) = q (q;q)^2 / (zp d^2)
                 * th(d/c, -d/c, -sq d/c) th(zp c d / sq)^2
                 / th(c^2 zp, d^2 zp, sq d/c)

    with sq = sqrt(q), zp = zeta_plus.
    """
    q = ctx.q
    zp = ctx.zeta_plus
    sq = math.sqrt(q.q)

    def LD(z: complex) -> complex:
        return z * theta_logderiv(z, q, tol)

    lhs = LD(d * d * zp) - LD(c * c * zp) + LD(sq * c / d) - LD(sq * d / c)
    pq = qpoch_inf(q.q, q, tol).value
    rhs = (
        q.q * pq * pq / (zp * d * d)
        * theta_multi([d / c, -d / c, -sq * d / c], q, tol).value
        * theta(zp * c * d / sq, q, tol).value ** 2
        / theta_multi([c * c * zp, d * d * zp, sq * d / c], q, tol).value
    )
    return _report("diagonal_logderiv_product", lhs, rhs, {"c": c, "d": d, "q": q.q})


# ---------------------------------------------------------------------------
# seeded parameter draws
# ---------------------------------------------------------------------------


def draw_context(rng: np.random.Generator, q: float | None = None,
                 q_range: tuple[float, float] = (0.3, 0.9)) -> QContext:
    if q is None:
        q = float(rng.uniform(*q_range))
    zp = float(rng.uniform(0.5, 2.0))
    zm = -float(rng.uniform(0.5, 2.0))
    return QContext(QParam(q), zp, zm)


def draw_pair(rng: np.random.Generator, ctx: QContext,
              series: str | None = None) -> AdmissiblePair:
    """A random admissible pair: conjugate off the real axis, or two reals
    strictly inside one q-interval of a reciprocal-branch lattice."""
    if series is None:
        series = "principal" if rng.random() < 0.5 else "complementary"
    q = ctx.q.q
    if series == "principal":
        rho = float(rng.uniform(0.3, 1.5))
        phi = float(rng.uniform(0.15, math.pi - 0.15))
        g = rho * cmath.exp(1j * phi)
        return validate_pair(g, g.conjugate(), ctx)
    sign = 1 if rng.random() < 0.5 else -1
    anchor = ctx.zeta_plus if sign > 0 else ctx.zeta_minus
    m = int(rng.integers(-2, 3))
    t1, t2 = sorted(rng.uniform(0.05, 0.95, size=2))
    if t2 - t1 < 0.02:
        t2 = min(0.97, t1 + 0.02)
    g = q ** (m + t1) / anchor
    d = q ** (m + t2) / anchor
    return validate_pair(g, d, ctx)


def draw_quadruple(rng: np.random.Generator, ctx: QContext) -> AdmissibleQuadruple:
    """A random admissible quadruple: two real same-interval pairs with
    alpha beta < q^2 gamma delta."""
    pair = draw_pair(rng, ctx, "complementary")
    g, d = pair.gamma.real, pair.delta.real
    q = ctx.q.q
    # push alpha, beta at least three q-steps deeper so the product
    # constraint holds with margin
    shift = int(rng.integers(3, 6))
    a = g * q ** shift
    b = d * q ** shift
    return validate_quadruple(a, b, g, d, ctx)
