"""Pure-Python implementations of the hot inner loops.

These mirror the compiled versions in ``_corec.pyx`` exactly; the backend
module picks whichever is available.  All functions are scalar, branch-free
where possible, and return plain tuples so the two backends stay in sync.
"""

import cmath

_MAX_ITER = 2_000_000


def qpoch_raw(z, q, cut):
    """Infinite q-Pochhammer (z; q)_inf.

    Multiplies factors (1 - z q^i) until |z q^i| drops below ``cut``.
    Returns (value, tail_bound) where tail_bound is a first-order bound on
    the absolute error from the dropped factors: |prod| * |w| / (1 - q).
    """
    prod = complex(1.0)
    w = complex(z)
    i = 0
    while abs(w) > cut:
        prod *= 1.0 - w
        w *= q
        i += 1
        if i > _MAX_ITER:
            raise ArithmeticError("q-Pochhammer truncation did not converge")
    return prod, abs(prod) * abs(w) / (1.0 - q)


def logqpoch_raw(z, q, cut):
    """Principal-branch log of (z; q)_inf as a sum of factor logs.

    Overflow-safe replacement for qpoch_raw when the product magnitude
    leaves double range.  Raises on a vanishing factor.
    """
    total = complex(0.0)
    w = complex(z)
    i = 0
    while abs(w) > cut:
        f = 1.0 - w
        if f == 0.0:
            raise ZeroDivisionError("q-Pochhammer factor vanishes: log undefined")
        total += cmath.log(f)
        w *= q
        i += 1
        if i > _MAX_ITER:
            raise ArithmeticError("q-Pochhammer truncation did not converge")
    # first-order tail of the log: sum of remaining -w q^j
    return total - w / (1.0 - q), abs(w) / (1.0 - q)


def theta_logderiv_raw(z, q, cut):
    """Logarithmic derivative d/dz log theta_q(z).

    theta_q(z) = prod_{i>=0} (1 - z q^i) * prod_{i>=1} (1 - q^i / z), so the
    log-derivative is sum_{i>=0} -q^i/(1 - z q^i) + sum_{i>=1} (q^i/z^2)/(1 - q^i/z).
    Not valid at the zeros z in q^Z.
    """
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    total = -1.0 / (1.0 - z)
    p = q
    i = 0
    while p > cut:
        total += -p / (1.0 - z * p) + (p * zinv2) / (1.0 - p * zinv)
        p *= q
        i += 1
        if i > _MAX_ITER:
            raise ArithmeticError("theta log-derivative did not converge")
    return total, p * (abs(zinv2) + 1.0) / (1.0 - q)


def phi21_raw(a1, a2, b, z, q, cut, max_terms):
    """Partial sums of the 2phi1 basic hypergeometric series, |z| < 1.

    Terms follow the ratio recurrence
    t_{n+1}/t_n = z (1 - a1 q^n)(1 - a2 q^n) / ((1 - b q^n)(1 - q^{n+1})).
    Returns (sum, tail_bound, n_terms).
    """
    total = complex(1.0)
    term = complex(1.0)
    qa1 = complex(a1)
    qa2 = complex(a2)
    qb = complex(b)
    qn = 1.0
    n = 0
    az = abs(z)
    while n < max_terms:
        denom = (1.0 - qb * qn) * (1.0 - q * qn)
        if denom == 0.0:
            raise ZeroDivisionError("2phi1 series pole: b in q^{Z<=0}")
        term *= z * (1.0 - qa1 * qn) * (1.0 - qa2 * qn) / denom
        total += term
        qn *= q
        n += 1
        if abs(term) < cut and n > 2:
            break
    tail = abs(term) * az / max(1.0 - az, 1e-16)
    return total, tail, n


def theta3_raw(z, q, cut):
    """Two-sided series sum_{n in Z} z^n q^{n^2/2} (paper-normalized nome)."""
    sq = q ** 0.5
    total = complex(1.0)
    # n > 0 and n < 0 accumulated together; q^{n^2/2} = sq^{n^2}
    zp = complex(1.0)
    zm = complex(1.0)
    w = 1.0  # sq^{n^2}
    n = 0
    while True:
        n += 1
        w *= sq ** (2 * n - 1)
        zp *= z
        zm /= z
        inc = w * (zp + zm)
        total += inc
        if abs(inc) < cut and w < 1e-4:
            break
        if n > 100000:
            raise ArithmeticError("theta3 series did not converge")
    return total, abs(inc)
