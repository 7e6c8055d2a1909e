"""High-precision Gamma-function Taylor data and numeric coercions.

All transcendental evaluation is delegated to mpmath at an explicit decimal
precision; precision is always a parameter, never hidden global state beyond
the scoped ``workdps`` blocks used here.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .cyclotomic import CycNum
from .nilpotent import NilPoly

DEFAULT_DPS = 50
_GUARD = 15


def to_mpf(q, dps: int = DEFAULT_DPS):
    with mpmath.workdps(dps + _GUARD):
        if isinstance(q, Fraction):
            return mpmath.mpf(q.numerator) / q.denominator
        return mpmath.mpf(q)


def to_mpc(x, dps: int = DEFAULT_DPS):
    with mpmath.workdps(dps + _GUARD):
        if isinstance(x, CycNum):
            return x.evaluate(dps + _GUARD)
        if isinstance(x, Fraction):
            return mpmath.mpc(x.numerator) / x.denominator
        return mpmath.mpc(x)


def two_pi_i(dps: int = DEFAULT_DPS):
    with mpmath.workdps(dps + _GUARD):
        return 2 * mpmath.pi * mpmath.mpc(0, 1)


def cpow(base, expo, dps: int = DEFAULT_DPS):
    """Principal-branch power base**expo via exp(expo*log base)."""
    with mpmath.workdps(dps + _GUARD):
        b = to_mpc(base, dps)
        e = to_mpc(expo, dps)
        if e == 0:
            return mpmath.mpc(1)
        return mpmath.exp(e * mpmath.log(b))


def gamma_taylor(offset: Fraction, order: int, precision: int = DEFAULT_DPS) -> list:
    """Taylor coefficients of Gamma(offset + x) at x = 0 through x^order.

    Uses the log-Gamma expansion: ln Gamma(s+x) = ln Gamma(s) + sum_{k>=1}
    psi^(k-1)(s) x^k / k!, exponentiated as a truncated power series.
    Requires 0 < offset (the spec's domain is (0, 1] but any positive offset
    is accepted).
    """
    offset = Fraction(offset)
    if offset <= 0:
        raise ValueError("offset must be positive")
    with mpmath.workdps(precision + _GUARD):
        s = mpmath.mpf(offset.numerator) / offset.denominator
        # log-series coefficients c_k, k >= 1
        log_coeffs = [mpmath.psi(k - 1, s) / mpmath.factorial(k) for k in range(1, order + 1)]
        # exp of the series, times Gamma(s)
        out = [mpmath.mpf(1)] + [mpmath.mpf(0)] * order
        term = [mpmath.mpf(1)] + [mpmath.mpf(0)] * order  # current power of the log-series / n!
        for n in range(1, order + 1):
            # term <- term * logseries / n, truncated
            new = [mpmath.mpf(0)] * (order + 1)
            for i in range(order + 1):
                if term[i] == 0:
                    continue
                for k, c in enumerate(log_coeffs, start=1):
                    if i + k <= order:
                        new[i + k] += term[i] * c
            term = [x / n for x in new]
            if all(x == 0 for x in term):
                break
            out = [a + b for a, b in zip(out, term)]
        g = mpmath.gamma(s)
        return [g * c for c in out]


def gamma_nilpoly(offset: Fraction, cap: int, scale, dps: int = DEFAULT_DPS) -> NilPoly:
    """Gamma(offset + scale*H) as a NilPoly with mpmath coefficients."""
    if cap == 0:
        return NilPoly(0)
    coeffs = gamma_taylor(offset, cap - 1, dps)
    with mpmath.workdps(dps + _GUARD):
        sc = to_mpc(scale, dps) if not isinstance(scale, (int, Fraction)) else to_mpf(Fraction(scale), dps)
        out = NilPoly(cap)
        pw = mpmath.mpf(1)
        for k in range(cap):
            out.coeffs[k] = coeffs[k] * pw
            pw = pw * sc
        return out


def nilpoly_to_numeric(p: NilPoly, dps: int = DEFAULT_DPS) -> NilPoly:
    """Coerce exact coefficients (Fraction/CycNum) to mpc."""
    return p.map_coeffs(lambda c: to_mpc(c, dps))


def nil_exp_numeric(cap: int, a, dps: int = DEFAULT_DPS) -> NilPoly:
    """exp(a*H) with mpc coefficient arithmetic."""
    with mpmath.workdps(dps + _GUARD):
        av = to_mpc(a, dps)
        out = NilPoly(cap)
        if cap == 0:
            return out
        out.coeffs[0] = mpmath.mpc(1)
        term = mpmath.mpc(1)
        for k in range(1, cap):
            term = term * av / k
            out.coeffs[k] = term
        return out
