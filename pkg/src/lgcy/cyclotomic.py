"""Exact arithmetic in cyclotomic fields Q(xi_D), xi_D = exp(2*pi*i/D).

A :class:`CycNum` is stored as a vector of rationals in the group-ring basis
1, x, ..., x^(D-1) of Q[x]/(x^D - 1) and kept in canonical form, i.e. reduced
modulo the D-th cyclotomic polynomial Phi_D.  Equality of canonical forms then
decides equality in Q(xi_D), which makes every downstream identity check
sound rather than merely numerically plausible.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

Q0 = Fraction(0)
Q1 = Fraction(1)


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # Exact division of integer polynomials; den monic up to sign is not
    # required because every division performed here is known to be exact.
    num = list(num)
    deg_d = len(den) - 1
    lead = den[-1]
    quot = [0] * max(len(num) - deg_d, 0)
    for i in range(len(num) - 1, deg_d - 1, -1):
        c = num[i]
        if c == 0:
            continue
        assert c % lead == 0, "non-exact polynomial division"
        q = c // lead
        quot[i - deg_d] = q
        for k in range(deg_d + 1):
            num[i - deg_d + k] -= q * den[k]
    while num and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, ascending degree."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (-1, 1)
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    num = [0] * (n + 1)
    num[0] = -1
    num[n] = 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(num)


@lru_cache(maxsize=None)
def _phi_reduction_table(order: int) -> tuple[tuple[Fraction, ...], ...]:
    # Row k: the canonical form of x^k modulo Phi_order, padded to length order.
    phi = cyclotomic_polynomial(order)
    deg = len(phi) - 1
    rows: list[tuple[Fraction, ...]] = []
    # x^k for k < deg is already reduced.
    for k in range(deg):
        row = [Q0] * order
        row[k] = Q1
        rows.append(tuple(row))
    for k in range(deg, order):
        # x^k = x * x^(k-1) reduced: shift previous row then fold the top term.
        prev = rows[k - 1]
        row = [Q0] * order
        for i in range(deg):
            if prev[i]:
                row[i + 1] = prev[i]
        top = row[deg]
        if top:
            row[deg] = Q0
            for i in range(deg):
                if phi[i]:
                    row[i] -= top * phi[i]
        rows.append(tuple(row))
    return tuple(rows)


class CycNum:
    """An element of Q(xi_D), canonically reduced mod Phi_D."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs, reduce: bool = True):
        self.order = order
        vec = [Fraction(c) for c in coeffs]
        if len(vec) < order:
            vec += [Q0] * (order - len(vec))
        elif len(vec) > order:
            folded = [Q0] * order
            for e, c in enumerate(vec):
                folded[e % order] += c
            vec = folded
        if reduce:
            table = _phi_reduction_table(order)
            deg = len(cyclotomic_polynomial(order)) - 1
            out = [Q0] * order
            for e, c in enumerate(vec):
                if not c:
                    continue
                if e < deg:
                    out[e] += c
                else:
                    row = table[e]
                    for i in range(deg):
                        if row[i]:
                            out[i] += c * row[i]
            vec = out
        self.coeffs = tuple(vec)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(q, order: int = 1) -> "CycNum":
        vec = [Q0] * order
        vec[0] = Fraction(q)
        return CycNum(order, vec, reduce=False)

    @staticmethod
    def root_of_unity(order: int, k: int) -> "CycNum":
        """xi_order^k."""
        vec = [Q0] * order
        vec[k % order] = Q1
        return CycNum(order, vec)

    @staticmethod
    def from_fraction_of_turn(turn: Fraction, order: int) -> "CycNum":
        """exp(2*pi*i*turn) inside Q(xi_order); order*turn must be integral."""
        t = Fraction(turn) * order
        if t.denominator != 1:
            raise ValueError(f"exp(2 pi i {turn}) does not lie in Q(xi_{order})")
        return CycNum.root_of_unity(order, int(t))

    # -- structure ---------------------------------------------------------

    def promote(self, order: int) -> "CycNum":
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ValueError("incompatible cyclotomic orders")
        step = order // self.order
        vec = [Q0] * order
        for e, c in enumerate(self.coeffs):
            if c:
                vec[e * step] = c
        return CycNum(order, vec)

    def _pair(self, other) -> tuple["CycNum", "CycNum"]:
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_rational(other, self.order)
        if not isinstance(other, CycNum):
            return NotImplemented, NotImplemented  # type: ignore[return-value]
        if self.order == other.order:
            return self, other
        import math

        d = math.lcm(self.order, other.order)
        return self.promote(d), other.promote(d)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)], reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.order, [-c for c in self.coeffs], reduce=False)

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)], reduce=False)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNum(self.order, [c * q for c in self.coeffs], reduce=False)
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._pair(other)
        n = a.order
        out = [Q0] * n
        for i, ci in enumerate(a.coeffs):
            if not ci:
                continue
            for k, ck in enumerate(b.coeffs):
                if ck:
                    out[(i + k) % n] += ci * ck
        return CycNum(n, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Multiplicative inverse in Q(xi_D) via extended Euclid mod Phi_D."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        deg = len(phi) - 1
        a = list(self.coeffs[:deg])
        while a and a[-1] == 0:
            a.pop()
        # xgcd(a, phi) over Q[x]; gcd is a nonzero constant since Phi_D is
        # irreducible and a is nonzero of smaller degree.
        # Maintain r_i = (..)*Phi + t_i * a; stop once r is a nonzero constant.
        r0, r1 = phi, a
        t0, t1 = [Q0], [Q1]
        while len(r1) > 1:
            q, r = _poly_divmod_frac(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
        if not r1:
            raise ArithmeticError("unexpected zero remainder in cyclotomic xgcd")
        c = r1[0]
        inv = [x / c for x in t1]
        return CycNum(self.order, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNum(self.order, [c / q for c in self.coeffs], reduce=False)
        a, b = self._pair(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycNum.from_rational(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "CycNum":
        """Complex conjugation, x -> x^(D-1)."""
        n = self.order
        vec = [Q0] * n
        for e, c in enumerate(self.coeffs):
            if c:
                vec[(-e) % n] += c
        return CycNum(n, vec)

    # -- comparisons / hashing ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_rational(other, self.order)
        elif not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = []
        for e, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{e}" if e else f"{c}")
        body = " + ".join(terms) if terms else "0"
        return f"Cyc[{self.order}]({body})"

    # -- numerics --------------------------------------------------------------

    def evaluate(self, dps: int = 50):
        """Embed at xi_D = exp(2*pi*i/D) with dps decimal digits."""
        with mpmath.workdps(dps):
            z = mpmath.mpc(0)
            for e, c in enumerate(self.coeffs):
                if c:
                    ang = 2 * mpmath.pi * e / self.order
                    z += mpmath.mpc(c.numerator) / c.denominator * mpmath.exp(1j * ang)
            return z


def _poly_divmod_frac(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    deg_d = len(den) - 1
    lead = den[-1]
    quot = [Q0] * max(len(num) - deg_d, 0)
    for i in range(len(num) - 1, deg_d - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q = c / lead
        quot[i - deg_d] = q
        for k in range(deg_d + 1):
            num[i - deg_d + k] -= q * den[k]
    while num and num[-1] == 0:
        num.pop()
    return quot, num


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Q0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                if y:
                    out[i + k] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Q0] * (n - len(a))
    b = b + [Q0] * (n - len(b))
    out = [x - y for x, y in zip(a, b)]
    while out and out[-1] == 0:
        out.pop()
    return out


def cyc_reduce(a: CycNum) -> CycNum:
    """Canonical representative of ``a`` (CycNums are kept reduced, so this
    re-normalizes and is idempotent)."""
    return CycNum(a.order, a.coeffs)
