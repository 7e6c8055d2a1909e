from fractions import Fraction

import mpmath

from lgcy.gammafun import gamma_nilpoly, gamma_taylor


def test_gamma_at_one():
    coeffs = gamma_taylor(Fraction(1), 0, 50)
    with mpmath.workdps(60):
        assert abs(coeffs[0] - 1) < mpmath.mpf(10) ** -45


def test_gamma_prime_at_one_digamma_oracle():
    """Gamma'(1) = -euler_gamma, cross-checked by the digamma recurrence
    psi(2) = psi(1) + 1 at 100 digits."""
    coeffs = gamma_taylor(Fraction(1), 1, 100)
    with mpmath.workdps(110):
        assert abs(coeffs[1] + mpmath.euler) < mpmath.mpf(10) ** -95
        # oracle: psi(2) - psi(1) = 1 with psi(1) read off the series
        psi1 = coeffs[1] / coeffs[0]
        assert abs((mpmath.psi(0, 2) - 1) - psi1) < mpmath.mpf(10) ** -95


def test_gamma_half_is_sqrt_pi():
    coeffs = gamma_taylor(Fraction(1, 2), 0, 60)
    with mpmath.workdps(70):
        assert abs(coeffs[0] - mpmath.sqrt(mpmath.pi)) < mpmath.mpf(10) ** -55


def test_gamma_taylor_matches_direct_evaluation():
    """Taylor sum at a small rational offset against mpmath.gamma."""
    order = 8
    coeffs = gamma_taylor(Fraction(3, 5), order, 60)
    with mpmath.workdps(70):
        x = mpmath.mpf(1) / 100
        series = sum(c * x ** k for k, c in enumerate(coeffs))
        direct = mpmath.gamma(mpmath.mpf(3) / 5 + x)
        # truncation-limited: the x^9 remainder carries a ~(1/offset)^9 factor
        assert abs(series - direct) < mpmath.mpf(10) ** -14


def test_gamma_nilpoly_scaling():
    p = gamma_nilpoly(Fraction(1), 3, -5, 50)
    q = gamma_taylor(Fraction(1), 2, 50)
    with mpmath.workdps(60):
        assert abs(p.coeffs[1] - q[1] * (-5)) < mpmath.mpf(10) ** -40
        assert abs(p.coeffs[2] - q[2] * 25) < mpmath.mpf(10) ** -40
