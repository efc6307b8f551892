"""q-Pochhammer symbols, theta functions and their q->1 asymptotic estimates.

Conventions (fixed throughout the package):

    (z; q)_inf   = prod_{i>=1} (1 - z q^{i-1})
    theta_q(z)   = (z, q/z; q)_inf,  zeros exactly on q^Z
    theta3(z; q) = sum_{n in Z} z^n q^{n^2/2}

Note theta3 uses nome parameter q^{1/2} relative to the textbook convention.
All evaluations carry a truncation-tail bound in the returned EvalResult.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .backend import logqpoch_raw, qpoch_raw, theta3_raw, theta_logderiv_raw

__all__ = [
    "QParam",
    "Tolerance",
    "EvalResult",
    "qpoch_inf",
    "qpoch_multi",
    "theta",
    "theta_multi",
    "theta_deriv",
    "theta_logderiv",
    "log_theta",
    "theta3",
    "jacobi_imaginary_rhs",
    "asym_qpoch",
    "asym_theta_pos",
    "asym_theta_neg",
]

PI2 = math.pi * math.pi
TWO_PI_I = 2j * math.pi


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


@dataclass(frozen=True)
class QParam:
    """The base q in (0, 1) together with the cached rate r = -ln q.

    The safe working range for direct (non log-scale) evaluation is roughly
    q in [0.02, 0.995]; the q -> 1 limit scans route extreme magnitudes
    through log_theta.
    """

    q: float
    r: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"q must lie in (0, 1), got {self.q}")
        object.__setattr__(self, "r", -math.log(self.q))


@dataclass(frozen=True)
class Tolerance:
    rel_tol: float = 1e-12
    abs_floor: float = 1e-300

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise DomainError("rel_tol must lie in (0, 1)")

    @property
    def cut(self) -> float:
        # truncation threshold for series/product terms
        return max(self.rel_tol * 1e-3, 1e-17)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class EvalResult:
    """Value of a series/product evaluation plus a truncation tail bound.

    When log_scaled is True, ``value`` holds the (complex) logarithm of the
    quantity instead of the quantity itself; this only happens on the
    explicit log-scale paths (log_theta and friends).
    """

    value: complex
    abs_error_bound: float
    log_scaled: bool = False

    def __complex__(self) -> complex:
        return complex(self.value)


def qpoch_inf(z: complex, q: QParam, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """(z; q)_inf, entire in z."""
    val, err = qpoch_raw(complex(z), q.q, tol.cut)
    return EvalResult(val, err)


def qpoch_multi(zs, q: QParam, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """(z_1, ..., z_m; q)_inf as a product of single symbols.

    Error bounds combine to first order: sum of relative tails times the
    product magnitude.
    """
    prod = complex(1.0)
    rel = 0.0
    for z in zs:
        r = qpoch_inf(z, q, tol)
        prod *= r.value
        rel += r.abs_error_bound / max(abs(r.value), tol.abs_floor)
    return EvalResult(prod, abs(prod) * rel)


def _reduce_to_annulus(z: complex, q: float) -> tuple[complex, int]:
    """Write z = q^n * w with |w| in [sqrt(q), 1/sqrt(q)); returns (w, n)."""
    n = round(math.log(abs(z)) / math.log(q))
    return z * q ** (-n), n


def _is_on_q_lattice(z: complex, q: float, eps: float = 1e-12) -> bool:
    if z.real <= 0.0 or abs(z.imag) > eps * abs(z):
        return False
    t = math.log(z.real) / math.log(q)
    return abs(t - round(t)) < eps


def theta(z: complex, q: QParam, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """theta_q(z) = (z, q/z; q)_inf with argument reduction via
    theta_q(q^n w) = (-1)^n q^{-n(n-1)/2} w^{-n} theta_q(w).

    Points of q^Z return exactly 0 (the zeros are simple and known).
    """
    z = complex(z)
    if z == 0:
        raise DomainError("theta_q is undefined at z = 0")
    if _is_on_q_lattice(z, q.q):
        return EvalResult(0.0, 0.0)
    w, n = _reduce_to_annulus(z, q.q)
    v1, e1 = qpoch_raw(w, q.q, tol.cut)
    v2, e2 = qpoch_raw(q.q / w, q.q, tol.cut)
    base = v1 * v2
    rel = e1 / max(abs(v1), tol.abs_floor) + e2 / max(abs(v2), tol.abs_floor)
    if n == 0:
        return EvalResult(base, abs(base) * rel)
    log_fac = -0.5 * n * (n - 1) * math.log(q.q) - n * cmath.log(w)
    if abs(log_fac.real) > 700.0:
        raise OverflowError("theta prefactor exceeds double range; use log_theta")
    fac = (-1) ** n * cmath.exp(log_fac)
    val = fac * base
    return EvalResult(val, abs(val) * rel)


def theta_multi(zs, q: QParam, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    prod = complex(1.0)
    rel = 0.0
    for z in zs:
        r = theta(z, q, tol)
        if r.value == 0.0:
            return EvalResult(0.0, 0.0)
        prod *= r.value
        rel += r.abs_error_bound / max(abs(r.value), tol.abs_floor)
    return EvalResult(prod, abs(prod) * rel)


def log_theta(z: complex, q: QParam, tol: Tolerance = DEFAULT_TOL) -> complex:
    """Complex logarithm of theta_q(z), defined modulo 2 pi i.

    Overflow-safe: works for any magnitude of theta.  Only differences and
    exponentials of these logs are meaningful.
    """
    z = complex(z)
    if z == 0 or _is_on_q_lattice(z, q.q):
        raise DomainError("log theta undefined at a zero of theta")
    w, n = _reduce_to_annulus(z, q.q)
    l1, _ = logqpoch_raw(w, q.q, tol.cut)
    l2, _ = logqpoch_raw(q.q / w, q.q, tol.cut)
    out = l1 + l2
    if n != 0:
        out += 1j * math.pi * n - 0.5 * n * (n - 1) * math.log(q.q) - n * cmath.log(w)
    return out


def theta_logderiv(z: complex, q: QParam, tol: Tolerance = DEFAULT_TOL) -> complex:
    """theta_q'(z) / theta_q(z) via the product's log-derivative series."""
    z = complex(z)
    if z == 0 or _is_on_q_lattice(z, q.q):
        raise DomainError("theta log-derivative undefined on q^Z and at 0")
    val, _ = theta_logderiv_raw(z, q.q, tol.cut)
    return val


def theta_deriv(z: complex, q: QParam, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """theta_q'(z).

    Generic z: theta_q(z) times the log-derivative series.  At z = 1 (a
    simple zero) the exact closed value -(q; q)_inf^2 is returned.
    """
    z = complex(z)
    if z == 0:
        raise DomainError("theta_q' undefined at z = 0")
    if abs(z - 1.0) < 1e-14:
        r = qpoch_inf(q.q, q, tol)
        val = -r.value * r.value
        return EvalResult(val, 2.0 * abs(r.value) * r.abs_error_bound)
    if _is_on_q_lattice(z, q.q):
        # simple zero at q^n: theta'(q^n) = (-1)^n q^{-n(n+1)/2} theta'(1)
        n = round(math.log(z.real) / math.log(q.q))
        r = qpoch_inf(q.q, q, tol)
        fac = (-1) ** n * q.q ** (-0.5 * n * (n + 1))
        val = -fac * r.value * r.value
        return EvalResult(val, 2.0 * abs(fac * r.value) * r.abs_error_bound)
    th = theta(z, q, tol)
    ld = theta_logderiv(z, q, tol)
    val = th.value * ld
    return EvalResult(val, abs(ld) * th.abs_error_bound)


def theta3(z: complex, q: QParam, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """Jacobi theta_3 with the q^{1/2}-nome convention; entire on C*."""
    z = complex(z)
    if z == 0:
        raise DomainError("theta3 undefined at z = 0")
    val, err = theta3_raw(z, q.q, tol.cut)
    return EvalResult(val, err)


def jacobi_imaginary_rhs(z: complex, q: QParam, tol: Tolerance = DEFAULT_TOL) -> EvalResult:
    """Right-hand side of the imaginary transformation for theta3.

    Equals theta3(z; q); evaluated through the dual nome exp(-4 pi^2 / r),
    which converges fastest when q is close to 1.
    """
    z = complex(z)
    if z == 0 or (z.imag == 0.0 and z.real < 0.0):
        raise DomainError("principal logarithm undefined on the cut R_{<=0}")
    r = q.r
    u = cmath.log(z) / TWO_PI_I
    qdual = math.exp(-4.0 * PI2 / r)
    zdual = cmath.exp(4.0 * PI2 * u / r)
    pref = math.sqrt(2.0 * math.pi / r) * cmath.exp(-2.0 * PI2 * u * u / r)
    val, err = theta3_raw(zdual, qdual, tol.cut)
    return EvalResult(pref * val, abs(pref) * err)


def asym_qpoch(r: float) -> complex:
    """Leading-order (q; q)_inf for q = exp(-r), r -> 0+."""
    if r <= 0:
        raise DomainError("r must be positive")
    return math.sqrt(2.0 * math.pi / r) * math.exp(-PI2 / (6.0 * r))


def asym_theta_pos(z: complex, r: float) -> complex:
    """Leading-order theta_q(z) for z off the negative real axis, r -> 0+.

    Magnitudes exceeding double range are not protected here; callers in
    the near-1 regime should work with the log of the returned expression.
    """
    z = complex(z)
    if z == 0 or (z.imag == 0.0 and z.real < 0.0):
        raise DomainError("requires |arg z| < pi")
    u = cmath.log(z) / TWO_PI_I
    expo = -PI2 / (3.0 * r) - 2.0 * PI2 * u * u / r - 2.0 * PI2 * u / r + 1j * math.pi * u
    return 1j * cmath.exp(expo) * (1.0 - cmath.exp(4.0 * PI2 * u / r))


def asym_theta_neg(z: complex, r: float) -> complex:
    """Leading-order theta_q(z) for z off the positive real axis, r -> 0+."""
    z = complex(z)
    if z == 0 or (z.imag == 0.0 and z.real > 0.0):
        raise DomainError("requires |arg z| > 0")
    v = cmath.log(-z) / TWO_PI_I
    return cmath.exp(PI2 / (6.0 * r) - 2.0 * PI2 * v * v / r + 1j * math.pi * v)
