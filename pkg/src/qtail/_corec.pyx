# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled hot loops; see _corepy.py for the reference implementation."""

cimport cython
from libc.math cimport sqrt, pow

import cmath

DEF MAX_ITER = 2_000_000


def qpoch_raw(double complex z, double q, double cut):
    cdef double complex prod = 1.0
    cdef double complex w = z
    cdef long i = 0
    while abs(w) > cut:
        prod = prod * (1.0 - w)
        w = w * q
        i += 1
        if i > MAX_ITER:
            raise ArithmeticError("q-Pochhammer truncation did not converge")
    return prod, abs(prod) * abs(w) / (1.0 - q)


def logqpoch_raw(double complex z, double q, double cut):
    cdef double complex total = 0.0
    cdef double complex w = z
    cdef double complex f
    cdef long i = 0
    while abs(w) > cut:
        f = 1.0 - w
        if f == 0.0:
            raise ZeroDivisionError("q-Pochhammer factor vanishes: log undefined")
        total = total + cmath.log(f)
        w = w * q
        i += 1
        if i > MAX_ITER:
            raise ArithmeticError("q-Pochhammer truncation did not converge")
    return total - w / (1.0 - q), abs(w) / (1.0 - q)


def theta_logderiv_raw(double complex z, double q, double cut):
    cdef double complex zinv = 1.0 / z
    cdef double complex zinv2 = zinv * zinv
    cdef double complex total = -1.0 / (1.0 - z)
    cdef double p = q
    cdef long i = 0
    while p > cut:
        total = total - p / (1.0 - z * p) + (p * zinv2) / (1.0 - p * zinv)
        p *= q
        i += 1
        if i > MAX_ITER:
            raise ArithmeticError("theta log-derivative did not converge")
    return total, p * (abs(zinv2) + 1.0) / (1.0 - q)


def phi21_raw(double complex a1, double complex a2, double complex b,
              double complex z, double q, double cut, long max_terms):
    cdef double complex total = 1.0
    cdef double complex term = 1.0
    cdef double complex denom
    cdef double qn = 1.0
    cdef long n = 0
    cdef double az = abs(z)
    cdef double tail
    while n < max_terms:
        denom = (1.0 - b * qn) * (1.0 - q * qn)
        if denom == 0.0:
            raise ZeroDivisionError("2phi1 series pole: b in q^{Z<=0}")
        term = term * z * (1.0 - a1 * qn) * (1.0 - a2 * qn) / denom
        total = total + term
        qn *= q
        n += 1
        if abs(term) < cut and n > 2:
            break
    tail = abs(term) * az / max(1.0 - az, 1e-16)
    return total, tail, n


def theta3_raw(double complex z, double q, double cut):
    cdef double sq = sqrt(q)
    cdef double complex total = 1.0
    cdef double complex zp = 1.0
    cdef double complex zm = 1.0
    cdef double complex inc = 0.0
    cdef double w = 1.0
    cdef long n = 0
    while True:
        n += 1
        w *= pow(sq, 2 * n - 1)
        zp = zp * z
        zm = zm / z
        inc = w * (zp + zm)
        total = total + inc
        if abs(inc) < cut and w < 1e-4:
            break
        if n > 100000:
            raise ArithmeticError("theta3 series did not converge")
    return total, abs(inc)
