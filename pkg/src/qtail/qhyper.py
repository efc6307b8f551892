"""The basic hypergeometric function 2phi1.

Series evaluation on the unit disk, analytic continuation through the
three-term q-difference equation

    (b - a1 a2 q z) F(q^2 z) + (-b - q + (a1 + a2) q z) F(q z) + q (1 - z) F(z) = 0,

and the Heine / Watson transformation right-hand sides used by the kernel
module.  The continuation has simple poles at z = q^{-k}, k >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .backend import phi21_raw
from .qspecial import DEFAULT_TOL, DomainError, EvalResult, QParam, Tolerance, qpoch_multi

__all__ = [
    "Phi21Params",
    "PoleError",
    "DegeneracyError",
    "phi21_series",
    "phi21",
    "heine_rhs",
    "watson_rhs",
    "qdiff_residual",
]

CONT_RADIUS = 0.75
POLE_EXCLUSION = 1e-6
MAX_TERMS = 100_000


class PoleError(ArithmeticError):
    """Evaluation requested at (or too close to) a continuation pole."""


class DegeneracyError(ArithmeticError):
    """A transformation formula degenerates for these parameters."""


@dataclass(frozen=True)
class Phi21Params:
    a1: complex
    a2: complex
    b: complex
    q: QParam

    def __post_init__(self):
        if _in_q_power_set(self.b, self.q.q, nonpositive=True):
            raise DomainError("b in q^{Z<=0} is a pole of the 2phi1 series")


def _in_q_power_set(v: complex, q: float, nonpositive: bool = False, eps: float = 1e-12) -> bool:
    """Is v within relative eps of some q^n (n <= 0 if nonpositive)?"""
    v = complex(v)
    if v == 0 or abs(v.imag) > eps * abs(v) or v.real <= 0:
        return False
    t = math.log(v.real) / math.log(q)
    n = round(t)
    if nonpositive and n > 0:
        return False
    return abs(t - n) < eps


def phi21_series(p: Phi21Params, z: complex, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """Direct partial sums; requires |z| < 1."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"2phi1 series requires |z| < 1, got |z| = {abs(z):.3g}")
    val, tail, n = phi21_raw(p.a1, p.a2, p.b, z, p.q.q, tol.cut, MAX_TERMS)
    if n >= MAX_TERMS:
        raise ArithmeticError("2phi1 series did not converge")
    return EvalResult(val, tail)


def phi21(p: Phi21Params, z: complex, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """2phi1 continued to the plane minus the poles q^{-k}, k >= 0.

    For |z| < 0.75 the series is used directly; otherwise the q-difference
    equation is iterated upward from series values at q^K z, q^{K+1} z.
    """
    z = complex(z)
    q = p.q.q
    if abs(z) < CONT_RADIUS:
        return phi21_series(p, z, tol)
    # pole exclusion around q^{-k}
    if z.real > 0 and abs(z.imag) < POLE_EXCLUSION * abs(z):
        t = math.log(abs(z)) / math.log(q)
        k = round(-t)
        if k >= 0 and abs(z - q ** (-k)) < POLE_EXCLUSION * q ** (-k):
            raise PoleError(f"z within pole-exclusion radius of q^-{k}")
    K = 0
    w = z
    while abs(w) >= CONT_RADIUS:
        w *= q
        K += 1
    f1 = phi21_series(p, w, tol)          # F(q^K z)
    f2 = phi21_series(p, w * q, tol)      # F(q^{K+1} z)
    err = f1.abs_error_bound + f2.abs_error_bound
    fk, fk1 = f1.value, f2.value          # F at q^k z, q^{k+1} z
    a1, a2, b = p.a1, p.a2, p.b
    for k in range(K - 1, -1, -1):
        zk = z * q ** k
        coeff = q * (1.0 - zk)
        if abs(coeff) < 1e-10:
            raise PoleError("q-difference recursion ill-conditioned near z = q^-k")
        fnew = -((b - a1 * a2 * q * zk) * fk1 + (-b - q + (a1 + a2) * q * zk) * fk) / coeff
        scale = max(abs(b - a1 * a2 * q * zk), abs(b + q - (a1 + a2) * q * zk)) / abs(coeff)
        err = err * max(scale, 1.0)
        fk1, fk = fk, fnew
    return EvalResult(fk, err)


def heine_rhs(p: Phi21Params, z: complex, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """Heine-transformed representation of 2phi1(a1, a2; b | z).

    Equals (a2, a1 z; q)_inf / (b, z; q)_inf * 2phi1(b/a2, z; a1 z | a2).
    The degenerate a2 = 0 case is taken as the termwise limit.
    """
    z = complex(z)
    A, B, C = p.a1, p.a2, p.b
    q = p.q
    num = qpoch_multi([B, A * z], q, tol)
    den = qpoch_multi([C, z], q, tol)
    if den.value == 0:
        raise PoleError("Heine prefactor denominator vanishes")
    if abs(B) < 1e-14:
        inner = _phi21_b_zero_limit(C, z, A * z, q, tol)
    else:
        inner = phi21(Phi21Params(C / B, z, A * z, q), B, tol)
    val = num.value / den.value * inner.value
    rel = (
        num.abs_error_bound / max(abs(num.value), tol.abs_floor)
        + den.abs_error_bound / max(abs(den.value), tol.abs_floor)
        + inner.abs_error_bound / max(abs(inner.value), tol.abs_floor)
    )
    return EvalResult(val, abs(val) * rel)


def _phi21_b_zero_limit(C, z, b, q: QParam, tol: Tolerance) -> EvalResult:
    """lim_{B->0} 2phi1(C/B, z; b | B) = sum_n (-C)^n q^{n(n-1)/2} (z;q)_n / ((b;q)_n (q;q)_n)."""
    total = complex(1.0)
    term = complex(1.0)
    qq = q.q
    qn = 1.0
    for n in range(MAX_TERMS):
        term *= (-C) * qn * (1.0 - z * qn) / ((1.0 - b * qn) * (1.0 - qq * qn))
        qn *= qq
        total += term
        if abs(term) < tol.cut and n > 2:
            break
    return EvalResult(total, abs(term))


def watson_rhs(p: Phi21Params, z: complex, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """Watson's two-term transformation of 2phi1(a1, a2; b | z).

    Degenerates (vanishing (a1/a2; q)_inf-type denominators) when a1/a2 is
    in q^Z; that case raises instead of taking a limit.
    """
    z = complex(z)
    A, B, C = p.a1, p.a2, p.b
    q = p.q
    if z == 0:
        raise DomainError("Watson's formula requires z != 0 (q/z factors)")
    if B != 0 and (_in_q_power_set(A / B, q.q) or _in_q_power_set(B / A, q.q)):
        raise DegeneracyError("Watson split degenerates for a1/a2 in q^Z")

    def one_term(A, B):
        num = qpoch_multi([B, C / A, A * z, q.q / (A * z)], q, tol)
        den = qpoch_multi([C, B / A, z, q.q / z], q, tol)
        if den.value == 0:
            raise PoleError("Watson prefactor denominator vanishes")
        inner = phi21(Phi21Params(A, A * q.q / C, A * q.q / B, q), C * q.q / (A * B * z), tol)
        val = num.value / den.value * inner.value
        rel = (
            num.abs_error_bound / max(abs(num.value), tol.abs_floor)
            + den.abs_error_bound / max(abs(den.value), tol.abs_floor)
            + inner.abs_error_bound / max(abs(inner.value), tol.abs_floor)
        )
        return val, abs(val) * rel

    v1, e1 = one_term(A, B)
    v2, e2 = one_term(B, A)
    return EvalResult(v1 + v2, e1 + e2)


def qdiff_residual(p: Phi21Params, z: complex, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float]:
    """Residual of the q-difference equation at z, and the term scale.

    Returns (|LHS|, max term magnitude); |LHS| / scale should vanish for a
    correct continuation.
    """
    z = complex(z)
    a1, a2, b, q = p.a1, p.a2, p.b, p.q.q
    t1 = (b - a1 * a2 * q * z) * phi21(p, q * q * z, tol).value
    t2 = (-b - q + (a1 + a2) * q * z) * phi21(p, q * z, tol).value
    t3 = q * (1.0 - z) * phi21(p, z, tol).value
    scale = max(abs(t1), abs(t2), abs(t3))
    return abs(t1 + t2 + t3), scale
