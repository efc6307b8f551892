"""Fourier transform of the gauge-fixed theta kernel over one period.

The eps-gauged kernel is invariant under a simultaneous q-shift of both
arguments, so it descends to a function of (branch pair, exponent
difference); its Fourier series in the exponent

    hat K_{e1 e2}(eta) = sum_m e^{i eta m} tilde K(zeta_{e1} q^m, zeta_{e2})

is a 2x2 matrix-valued function on the circle.  Three independent
evaluation routes are provided: the truncated lattice sum, a closed
product-of-thetas form, and a theta log-derivative form.  The matrix is a
rank-one orthogonal projection for every eta; ``projection_report``
quantifies how closely a computed matrix satisfies that.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .kernels import (
    AdmissiblePair,
    QContext,
    C_elliptic,
    _sinh_ratio,
    closed_diag,
    log_C_elliptic,
)
from .qspecial import (
    DEFAULT_TOL,
    Tolerance,
    log_theta,
    qpoch_inf,
    theta,
    theta_logderiv,
    theta_multi,
)

__all__ = [
    "Matrix2C",
    "truncation_order",
    "fourier_series",
    "fourier_closed",
    "fourier_lemma_form",
    "projection_report",
]


@dataclass(frozen=True)
class Matrix2C:
    """2x2 complex matrix indexed by branch signs (+, -)."""

    pp: complex
    pm: complex
    mp: complex
    mm: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.pp, self.pm], [self.mp, self.mm]], dtype=complex)

    def entry(self, e1: int, e2: int) -> complex:
        if e1 > 0:
            return self.pp if e2 > 0 else self.pm
        return self.mp if e2 > 0 else self.mm

    def max_abs_diff(self, other: "Matrix2C") -> float:
        return float(np.max(np.abs(self.as_array() - other.as_array())))


def truncation_order(pair: AdmissiblePair, ctx: QContext, tol: float) -> int:
    """Number of lattice terms needed: the summand decays like rho^|m| with
    rho = max(sqrt(q), |sqrt(q gamma/delta)|, |sqrt(q delta/gamma)|)."""
    q = ctx.q.q
    r = abs(pair.gamma / pair.delta)
    rho = max(math.sqrt(q), math.sqrt(q * r), math.sqrt(q / r))
    if rho >= 1.0:
        raise ValueError("summand does not decay; pair outside admissible range")
    return int(math.ceil(math.log(tol) / math.log(rho))) + 10


def fourier_series(eta: float, pair: AdmissiblePair, ctx: QContext,
                   tol: Tolerance = DEFAULT_TOL, series_tol: float = 1e-13) -> Matrix2C:
    """Truncated lattice sum, entry by entry.

    Uses the q-shift-invariant closed-form values of the gauged kernel
    with all m-independent pieces cached, so a large truncation order is
    cheap.
    """
    M = truncation_order(pair, ctx, series_tol)
    q = ctx.q
    g, d = pair.gamma, pair.delta
    zp, zm = ctx.zeta_plus, ctx.zeta_minus
    lq = math.log(q.q)
    C = C_elliptic(pair, ctx, tol).value
    s = math.sqrt((g * d).real)
    w = cmath.log(g / s)

    # same-branch entries: diagonal term plus e^{i eta m} times the
    # theta-power ratio (the gauge is trivial on the plus branch and
    # cancels the (-1)^m on the minus branch)
    pp = closed_diag(1, pair, ctx, tol).value
    mm = closed_diag(-1, pair, ctx, tol).value
    for m in range(1, M + 1):
        sr = _sinh_ratio(m * w, 0.5 * m * lq)
        e_p = cmath.exp(1j * eta * m) + cmath.exp(-1j * eta * m)
        pp += e_p * C * (-1) ** m * sr
        mm += e_p * (-1) ** m * (-C) * sr

    # cross entries: the log-space closed form with cached constants
    logC = log_C_elliptic(pair, ctx, tol)
    lg, ld = cmath.log(g), cmath.log(d)
    half_theta4 = 0.5 * sum(
        log_theta(z, q, tol) for z in (g * zm, d * zm, g * zp, d * zp)
    ).real
    c1 = log_theta(zm * g, q, tol) + log_theta(zp * d, q, tol)
    c2 = log_theta(zm * d, q, tol) + log_theta(zp * g, q, tol)
    half_lr = 0.5 * math.log(abs(zp / zm))
    lgd = math.log((g * d).real)

    def cross(m: int, n: int) -> complex:
        t1 = m * lg + n * ld + c1
        t2 = n * lg + m * ld + c2
        flip = 1.0
        if t1.real < t2.real:
            t1, t2, flip = t2, t1, -1.0
        log_denom = float(np.logaddexp(half_lr + 0.5 * (m - n) * lq,
                                       -half_lr + 0.5 * (n - m) * lq))
        L = logC + 1j * math.pi * m - 0.5 * (m + n) * lgd - half_theta4 + t1 - log_denom
        return flip * cmath.exp(L) * (1.0 - cmath.exp(t2 - t1))

    pm = 0.0 + 0.0j
    mp = 0.0 + 0.0j
    for m in range(-M, M + 1):
        e = cmath.exp(1j * eta * m)
        pm += e * cross(m, 0)
        mp += e * (-1) ** m * cross(0, m)
    return Matrix2C(pp, pm, mp, mm)


def fourier_closed(eta: float, pair: AdmissiblePair, ctx: QContext,
                   tol: Tolerance = DEFAULT_TOL) -> Matrix2C:
    """Closed product form: each entry is a ratio of theta products in
    e^{i eta} times an eta-independent prefactor."""
    q = ctx.q
    qv = q.q
    g, d = pair.gamma, pair.delta
    zp, zm = ctx.zeta_plus, ctx.zeta_minus
    s = math.sqrt((g * d).real / qv)        # sqrt(gamma delta / q), positive root
    e = cmath.exp(1j * eta)
    ec = cmath.exp(-1j * eta)
    den = theta_multi([-e * qv * s / g, -e * qv * s / d], q, tol).value
    base = theta_multi([zm / zp, g * d * zm * zp], q, tol).value
    Theta = theta_multi([g * zm, d * zm, g * zp, d * zp], q, tol).value.real
    sqTheta = math.sqrt(Theta)              # positive root

    pp = (
        qv * theta_multi([g * zm, d * zm], q, tol).value
        / (g * d * zp * zp * base)
        * theta_multi([-e * zp * s, -ec * zp * s], q, tol).value / den
    )
    mm = (
        qv * theta_multi([g * zp, d * zp], q, tol).value
        / (g * d * abs(zm * zp) * base)
        * theta_multi([-e * zm * s, -ec * zm * s], q, tol).value / den
    )
    cross_pref = -qv * sqTheta / (g * d * zp * math.sqrt(abs(zm * zp)) * base)
    pm = cross_pref * theta_multi([-e * zp * s, -ec * zm * s], q, tol).value / den
    mp = cross_pref * theta_multi([-e * zm * s, -ec * zp * s], q, tol).value / den
    return Matrix2C(pp, pm, mp, mm)


def fourier_lemma_form(eta: float, pair: AdmissiblePair, ctx: QContext,
                       tol: Tolerance = DEFAULT_TOL) -> Matrix2C:
    """Theta log-derivative form of the same matrix (summed term by term
    via the two classical bilateral summation formulas)."""
    q = ctx.q
    qv = q.q
    g, d = pair.gamma, pair.delta
    zp, zm = ctx.zeta_plus, ctx.zeta_minus
    C = C_elliptic(pair, ctx, tol).value
    sq = math.sqrt(qv * (g * d).real)       # sqrt(q gamma delta), positive root
    e = cmath.exp(1j * eta)

    def LD(z: complex) -> complex:
        return z * theta_logderiv(z, q, tol)

    # the eta terms enter as +e^{i eta}(s/gamma) theta'/theta at
    # -e^{i eta} s/gamma, i.e. with sign opposite to z theta'(z)/theta(z)
    pp = C * (
        LD(d * zp) - LD(g * zp)
        - LD(-e * sq / g) + LD(-e * sq / d)
    )
    mm = C * (
        LD(g * zm) - LD(d * zm)
        - LD(-e * sq / d) + LD(-e * sq / g)
    )

    Theta = theta_multi([g * zm, d * zm, g * zp, d * zp], q, tol).value.real
    sqTheta = math.sqrt(Theta)
    tprime1 = -(qpoch_inf(qv, q, tol).value ** 2)  # theta'(1)
    r_pm = math.sqrt(abs(zp / zm))

    pm = (
        C * r_pm / sqTheta * tprime1 / theta(zp / zm, q, tol).value
        * (
            theta_multi([g * zp, d * zm], q, tol).value
            * theta(e * r_pm * r_pm * sq / g, q, tol).value
            / theta(-e * sq / g, q, tol).value
            - theta_multi([d * zp, g * zm], q, tol).value
            * theta(e * r_pm * r_pm * sq / d, q, tol).value
            / theta(-e * sq / d, q, tol).value
        )
    )
    r_mp = 1.0 / r_pm
    mp = (
        C * r_mp / sqTheta * tprime1 / theta(zm / zp, q, tol).value
        * (
            theta_multi([g * zp, d * zm], q, tol).value
            * theta(e * r_mp * r_mp * sq / d, q, tol).value
            / theta(-e * sq / d, q, tol).value
            - theta_multi([d * zp, g * zm], q, tol).value
            * theta(e * r_mp * r_mp * sq / g, q, tol).value
            / theta(-e * sq / g, q, tol).value
        )
    )
    return Matrix2C(pp, pm, mp, mm)


def projection_report(eta: float, pair: AdmissiblePair, ctx: QContext,
                      tol: Tolerance = DEFAULT_TOL) -> dict:
    """How far the closed-form matrix is from a rank-one orthogonal
    projection: Hermitian defect, |det|, |trace - 1|, and ||M^2 - M||."""
    M = fourier_closed(eta, pair, ctx, tol).as_array()
    herm = float(np.max(np.abs(M - M.conj().T)))
    det = abs(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    tr = abs(M[0, 0] + M[1, 1] - 1.0)
    idem = float(np.max(np.abs(M @ M - M)))
    return {
        "hermitian_residual": herm,
        "det_residual": float(det),
        "trace_residual": float(tr),
        "idempotent_residual": idem,
    }
