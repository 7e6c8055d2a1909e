"""Truncated polynomial rings and exponential-polynomial layers.

``NilPoly`` models C[H]/(H^cap) with coefficients in any commutative ring
whose elements support +, -, * and a zero test (rationals, CycNum, mpmath
numbers).  ``ExpPoly`` models finite sums sum_k p_k(H) e^(k*lam) with exact
coefficient-wise equality, and ``LamZPoly`` models polynomials in lam and
Laurent polynomials in z with NilPoly values (the shape of I-function
coefficients).
"""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import CycNum


def is_zero_scalar(c) -> bool:
    if isinstance(c, CycNum):
        return c.is_zero()
    return c == 0


def scalars_equal(a, b) -> bool:
    if isinstance(a, CycNum) or isinstance(b, CycNum):
        if not isinstance(a, CycNum):
            a, b = b, a
        return a == b
    return a == b


class NilPoly:
    """Polynomial in a nilpotent variable H with H^cap = 0."""

    __slots__ = ("cap", "coeffs")

    def __init__(self, cap: int, coeffs=()):
        if cap < 0:
            raise ValueError("cap must be >= 0")
        self.cap = cap
        cs = list(coeffs)[:cap]
        cs += [Fraction(0)] * (cap - len(cs))
        self.coeffs = cs

    @staticmethod
    def const(cap: int, c) -> "NilPoly":
        p = NilPoly(cap)
        if cap > 0:
            p.coeffs[0] = c
        return p

    @staticmethod
    def h_power(cap: int, k: int, c=Fraction(1)) -> "NilPoly":
        p = NilPoly(cap)
        if 0 <= k < cap:
            p.coeffs[k] = c
        return p

    def copy(self) -> "NilPoly":
        return NilPoly(self.cap, list(self.coeffs))

    def retruncate(self, cap: int) -> "NilPoly":
        return NilPoly(cap, self.coeffs[:cap])

    def constant_term(self):
        return self.coeffs[0] if self.cap > 0 else Fraction(0)

    def is_zero(self) -> bool:
        return all(is_zero_scalar(c) for c in self.coeffs)

    def _coerce(self, other) -> "NilPoly":
        if isinstance(other, NilPoly):
            if other.cap != self.cap:
                raise ValueError("cap mismatch")
            return other
        return NilPoly.const(self.cap, other)

    def __add__(self, other):
        o = self._coerce(other)
        return NilPoly(self.cap, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return NilPoly(self.cap, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NilPoly):
            if other.cap != self.cap:
                raise ValueError("cap mismatch")
            out = NilPoly(self.cap)
            for i, a in enumerate(self.coeffs):
                if is_zero_scalar(a):
                    continue
                for k in range(self.cap - i):
                    b = other.coeffs[k]
                    if not is_zero_scalar(b):
                        out.coeffs[i + k] = out.coeffs[i + k] + a * b
            return out
        return NilPoly(self.cap, [c * other for c in self.coeffs])

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        result = NilPoly.const(self.cap, Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def invert(self) -> "NilPoly":
        """Geometric-series inverse; requires an invertible constant term."""
        c0 = self.constant_term()
        if is_zero_scalar(c0):
            raise ZeroDivisionError("nilpotent-only unit: constant term is zero")
        if isinstance(c0, CycNum):
            c0_inv = c0.inverse()
        elif isinstance(c0, (int, Fraction)):
            c0_inv = Fraction(1) / Fraction(c0)
        else:
            c0_inv = 1 / c0
        # p = c0 (1 + n) with n nilpotent; 1/p = c0^-1 sum (-n)^k
        n = NilPoly(self.cap, [c * c0_inv for c in self.coeffs])
        n.coeffs[0] = n.coeffs[0] - 1
        out = NilPoly.const(self.cap, 1)
        term = NilPoly.const(self.cap, 1)
        for _ in range(1, self.cap):
            term = term * n
            if term.is_zero():
                break
            out = out - term if _ % 2 else out + term
        # rebuilt with alternating signs: out = sum (-1)^k n^k
        result = NilPoly(self.cap, [c * c0_inv for c in out.coeffs])
        return result

    def __eq__(self, other):
        if not isinstance(other, NilPoly):
            if self.cap == 0:
                return is_zero_scalar(other)
            other = NilPoly.const(self.cap, other)
        if other.cap != self.cap:
            return False
        return all(scalars_equal(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        raise TypeError("NilPoly is mutable; not hashable")

    def map_coeffs(self, fn) -> "NilPoly":
        return NilPoly(self.cap, [fn(c) for c in self.coeffs])

    def __repr__(self):
        terms = [f"({c})*H^{k}" if k else f"({c})" for k, c in enumerate(self.coeffs)
                 if not is_zero_scalar(c)]
        return " + ".join(terms) if terms else "0"


def nil_exp(cap: int, a) -> NilPoly:
    """exp(a*H) truncated at H^cap; ``a`` rational/CycNum/numeric."""
    out = NilPoly(cap)
    if cap == 0:
        return out
    term = 1
    fact = 1
    out.coeffs[0] = Fraction(1) if isinstance(a, (int, Fraction)) else (a * 0 + 1)
    for k in range(1, cap):
        term = term * a
        fact *= k
        out.coeffs[k] = term * Fraction(1, fact) if isinstance(term, (int, Fraction, CycNum)) else term / fact
    return out


def todd_series(cap: int, a) -> NilPoly:
    """(a*H)/(1 - exp(-a*H)) truncated at H^cap, exact over Q (or scalar ring).

    Computed by inverting (1 - e^(-y))/y = sum_{n>=0} (-1)^n y^n/(n+1)!.
    """
    if cap == 0:
        return NilPoly(0)
    denom = NilPoly(cap)
    # coefficients of (1 - e^{-y})/y in y, then substitute y = a*H
    pw = 1
    fact = 1
    for n in range(cap):
        fact *= n + 1
        coeff = Fraction((-1) ** n, fact)
        denom.coeffs[n] = coeff * pw
        pw = pw * a
    return denom.invert()


class ExpPoly:
    """Finite sum over integer k of p_k(H) * e^(k*lam), p_k NilPoly."""

    __slots__ = ("cap", "terms")

    def __init__(self, cap: int, terms=None):
        self.cap = cap
        self.terms: dict[int, NilPoly] = {}
        if terms:
            for k, p in terms.items():
                if not p.is_zero():
                    self.terms[k] = p

    @staticmethod
    def from_nilpoly(p: NilPoly, k: int = 0) -> "ExpPoly":
        return ExpPoly(p.cap, {k: p})

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.terms.values())

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.from_nilpoly(NilPoly.const(self.cap, other))
        out = {k: p.copy() for k, p in self.terms.items()}
        for k, p in other.terms.items():
            out[k] = out[k] + p if k in out else p
        return ExpPoly(self.cap, out)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly(self.cap, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.from_nilpoly(NilPoly.const(self.cap, other))
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            out: dict[int, NilPoly] = {}
            for k1, p1 in self.terms.items():
                for k2, p2 in other.terms.items():
                    k = k1 + k2
                    q = p1 * p2
                    out[k] = out[k] + q if k in out else q
            return ExpPoly(self.cap, out)
        return ExpPoly(self.cap, {k: p * other for k, p in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        zero = NilPoly(self.cap)
        for k in keys:
            if self.terms.get(k, zero) != other.terms.get(k, zero):
                return False
        return True

    def __hash__(self):
        raise TypeError("ExpPoly not hashable")

    def eval_u(self, u: Fraction) -> NilPoly:
        """Substitute e^lam -> u (u nonzero rational)."""
        out = NilPoly(self.cap)
        for k, p in self.terms.items():
            out = out + p * (Fraction(u) ** k)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"[{p}]e^{k}lam" for k, p in sorted(self.terms.items()))


class LamZPoly:
    """sum over (a, b) of lam^a z^b p_{a,b}(H); b may be negative."""

    __slots__ = ("cap", "terms")

    def __init__(self, cap: int, terms=None):
        self.cap = cap
        self.terms: dict[tuple[int, int], NilPoly] = {}
        if terms:
            for key, p in terms.items():
                if not p.is_zero():
                    self.terms[key] = p

    @staticmethod
    def const(cap: int, c) -> "LamZPoly":
        return LamZPoly(cap, {(0, 0): NilPoly.const(cap, c)})

    @staticmethod
    def monomial(cap: int, a: int, b: int, p: NilPoly) -> "LamZPoly":
        return LamZPoly(cap, {(a, b): p})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, LamZPoly):
            other = LamZPoly.const(self.cap, other)
        out = {k: p.copy() for k, p in self.terms.items()}
        for k, p in other.terms.items():
            out[k] = out[k] + p if k in out else p
        return LamZPoly(self.cap, out)

    __radd__ = __add__

    def __neg__(self):
        return LamZPoly(self.cap, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LamZPoly):
            other = LamZPoly.const(self.cap, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LamZPoly):
            out: dict[tuple[int, int], NilPoly] = {}
            for (a1, b1), p1 in self.terms.items():
                for (a2, b2), p2 in other.terms.items():
                    key = (a1 + a2, b1 + b2)
                    q = p1 * p2
                    out[key] = out[key] + q if key in out else q
            return LamZPoly(self.cap, out)
        return LamZPoly(self.cap, {k: p * other for k, p in self.terms.items()})

    __rmul__ = __mul__

    def shift_z(self, n: int) -> "LamZPoly":
        return LamZPoly(self.cap, {(a, b + n): p for (a, b), p in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LamZPoly):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        zero = NilPoly(self.cap)
        return all(self.terms.get(k, zero) == other.terms.get(k, zero) for k in keys)

    def __hash__(self):
        raise TypeError("LamZPoly not hashable")

    def euler_degrees(self) -> set[Fraction]:
        """Set of total degrees a + b + h over nonzero monomials
        (deg lam = deg z = deg H = 1)."""
        degs = set()
        for (a, b), p in self.terms.items():
            for h, c in enumerate(p.coeffs):
                if not is_zero_scalar(c):
                    degs.add(Fraction(a + b + h))
        return degs

    def eval_numeric(self, lam, z, h=0):
        """Numeric evaluation (mpmath scalars); H substituted by ``h``."""
        total = 0
        for (a, b), p in self.terms.items():
            base = (lam ** a) * (z ** b)
            val = 0
            hp = 1
            for k in range(p.cap):
                c = p.coeffs[k]
                if not is_zero_scalar(c):
                    cv = c.evaluate() if isinstance(c, CycNum) else c
                    val += cv * hp
                hp *= h
            total += base * val
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"lam^{a} z^{b} [{p}]" for (a, b), p in sorted(self.terms.items())
        )


class ZLaurent:
    """Finitely supported map z-exponent -> coefficient object."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms or {})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return ZLaurent(out)

    def coefficient(self, k: int):
        return self.terms.get(k)

    def __repr__(self):
        return "ZLaurent(" + ", ".join(f"z^{k}: {v}" for k, v in sorted(self.terms.items())) + ")"
