"""Truncated hypergeometric I-function series for the two phases, the
modification factor, the twisted-theory helpers, and the symplectic pairing.

Series coefficients are exact: polynomials in lam, Laurent polynomials in z,
and truncated polynomials in H over the rationals.  The prefactors t^(d lam/z)
and q^(H/z) are carried as opaque records and never expanded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .gammafun import DEFAULT_DPS, to_mpc
from .model import GroupElement, SymmetryGroup
from .nilpotent import LamZPoly, NilPoly
from .statespace import CRVector, Space, pair, sector_cap, sector_exists


def frac_part(x: Fraction) -> Fraction:
    return x - math.floor(x)


@dataclass(frozen=True)
class SeriesIndex:
    k0: int
    kvec: tuple  # sorted tuple of (GroupElement, positive int)

    @property
    def total(self) -> int:
        return self.k0 + sum(n for _, n in self.kvec)

    def monomial(self) -> str:
        parts = []
        if self.k0:
            parts.append(f"t^{self.k0}")
        for g, n in self.kvec:
            parts.append(f"(t^{list(g.exponents)})^{n}")
        return "*".join(parts) if parts else "1"


def twisted_variables(group: SymmetryGroup) -> list[GroupElement]:
    """S: the elements fixing at least one coordinate (including identity)."""
    return list(group.sector_elements)


def _indices(group: SymmetryGroup, order: int):
    svars = twisted_variables(group)

    def rec(pos: int, remaining: int, acc):
        if pos == len(svars):
            for k0 in range(remaining + 1):
                yield SeriesIndex(k0, tuple(acc))
            return
        g = svars[pos]
        for n in range(remaining + 1):
            yield from rec(pos + 1, remaining - n, acc + ([(g, n)] if n else []))

    yield from rec(0, order, [])


def _a_vector(group: SymmetryGroup, kvec) -> list[Fraction]:
    """a(k)^j = sum_g k_g m_j(g)."""
    out = [Fraction(0)] * group.model.nvars
    for g, n in kvec:
        for j in range(group.model.nvars):
            out[j] += n * g.multiplicity(j)
    return out


def modification_factor(group: SymmetryGroup, k0: int, kvec) -> LamZPoly:
    """M(k0, k) = prod_j prod_{l=0}^{floor(k0 q_j + a^j)-1}
    (-c_j lam - (<k0 q_j + a^j> + l) z), exact over Q."""
    model = group.model
    avec = _a_vector(group, kvec)
    out = LamZPoly.const(1, Fraction(1))
    for j in range(model.nvars):
        x = k0 * model.charges[j] + avec[j]
        n = math.floor(x)
        f = frac_part(x)
        for l in range(n):
            factor = LamZPoly(1, {
                (1, 0): NilPoly.const(1, Fraction(-model.weights[j])),
                (0, 1): NilPoly.const(1, -(f + l)),
            })
            out = out * factor
    return out


@dataclass
class IFunctionSeries:
    side: str  # "minus" or "plus"
    order: int
    group: SymmetryGroup
    entries: dict  # SeriesIndex -> (GroupElement sector, LamZPoly coefficient)
    prefactor: dict

    def coefficient(self, idx: SeriesIndex):
        return self.entries.get(idx)

    def homogeneity_audit(self) -> dict:
        """Each coefficient must be Euler-homogeneous (deg lam = deg z =
        deg H = 1); returns failing indices."""
        bad = []
        for idx, (sector, coeff) in self.entries.items():
            degs = coeff.euler_degrees()
            if len(degs) > 1:
                bad.append({"index": idx.monomial(), "degrees": sorted(map(str, degs))})
        return {"passed": not bad, "witnesses": bad}

    def export(self) -> dict:
        """JSON-ready: index -> sector -> coefficient (exact strings)."""
        out = {
            "side": self.side,
            "order": self.order,
            "prefactor": self.prefactor,
            "coefficients": [],
        }
        for idx, (sector, coeff) in sorted(
                self.entries.items(), key=lambda kv: (kv[0].total, kv[0].monomial())):
            terms = []
            for (a, b), p in sorted(coeff.terms.items()):
                for h, c in enumerate(p.coeffs):
                    if c == 0:
                        continue
                    terms.append({"lam": a, "z": b, "H": h, "coeff": str(c)})
            out["coefficients"].append({
                "monomial": idx.monomial(),
                "k0": idx.k0,
                "kvec": [{"g": list(g.exponents), "power": n} for g, n in idx.kvec],
                "sector": list(sector.exponents),
                "terms": terms,
            })
        return out


def i_minus_series(group: SymmetryGroup, order: int) -> IFunctionSeries:
    """I^(Y-) through total order ``order``: coefficient of the index
    monomial is z^(1 - k0 - sum k_g) M(k0,k) / (k0! prod k_g!) on sector
    j^k0 prod g^k_g."""
    if order < 0:
        raise ValueError("order must be >= 0")
    entries = {}
    for idx in _indices(group, order):
        sector = group.j ** idx.k0
        for g, n in idx.kvec:
            sector = sector * (g ** n)
        m = modification_factor(group, idx.k0, idx.kvec)
        denom = math.factorial(idx.k0)
        for _, n in idx.kvec:
            denom *= math.factorial(n)
        zshift = 1 - idx.k0 - sum(n for _, n in idx.kvec)
        coeff = (m * Fraction(1, denom)).shift_z(zshift)
        entries[idx] = (sector, coeff)
    return IFunctionSeries("minus", order, group, entries,
                           {"symbol": "t^(d*lam/z)", "expanded": False})


def _gamma_ratio_factors(cap: int, scale_lam, scale_h, nfloor: int, f: Fraction):
    """LamZPoly for Gamma(1 + y)/Gamma(1 + y - nfloor) with
    y = scale_lam*lam/z + scale_h*H/z - f, f in [0,1).

    nfloor >= 0: product of linear factors (y - i); nfloor < 0: inverse
    factors 1/(y + i) whose constant terms i - f lie in (0, i], hence are
    invertible. """
    out = LamZPoly.const(cap, Fraction(1))
    if nfloor >= 0:
        for i in range(nfloor):
            terms = {(0, 0): NilPoly.const(cap, -f - i)}
            if scale_lam:
                terms[(1, -1)] = NilPoly.const(cap, Fraction(scale_lam))
            if scale_h:
                terms[(0, -1)] = NilPoly.h_power(cap, 1, Fraction(scale_h))
            out = out * LamZPoly(cap, terms)
        return out
    for i in range(1, -nfloor + 1):
        c0 = i - f
        if c0 == 0:
            raise ArithmeticError("denominator factor with zero constant term")
        # 1/(c0 + scale_lam lam/z + scale_h H/z), expanded geometrically;
        # lam is formal here so we only invert exactly when scale_lam == 0
        if scale_lam:
            raise ArithmeticError("inverted factor with lam dependence")
        inv = LamZPoly.const(cap, Fraction(1, 1) / c0)
        nil = LamZPoly(cap, {(0, -1): NilPoly.h_power(cap, 1, Fraction(scale_h))})
        acc = LamZPoly.const(cap, Fraction(1))
        term = LamZPoly.const(cap, Fraction(1))
        for _ in range(1, cap):
            term = term * nil * (Fraction(-1) / c0)
            if term.is_zero():
                break
            acc = acc + term
        out = out * inv * acc
    return out


def i_plus_series(group: SymmetryGroup, order: int) -> IFunctionSeries:
    """I^(Y+) through total order ``order``, with every Gamma ratio reduced
    to linear factors so that all arithmetic stays exact."""
    if order < 0:
        raise ValueError("order must be >= 0")
    preds = group.structural_predicates()
    if not preds["convex_Od"]:
        raise ValueError("I^(Y+) needs O(d) convex")
    model = group.model
    d = model.degree
    entries = {}
    for idx in _indices(group, order):
        sector = group.j ** (-idx.k0)
        for g, n in idx.kvec:
            sector = sector * (g ** n)
        if not sector_exists(Space.YPLUS, sector):
            continue  # target class is zero by convention
        cap = sector_cap(Space.YPLUS, sector)
        avec = _a_vector(group, idx.kvec)
        # z-exponent bookkeeping (integral for SL groups)
        ez = Fraction(1) - idx.k0 * (sum(model.charges) - 1)
        ez -= sum(frac_part(idx.k0 * model.charges[j] - avec[j])
                  for j in range(model.nvars))
        for g, n in idx.kvec:
            ez += (g.age_moving() - 1) * n
        if ez.denominator != 1:
            raise ArithmeticError(f"fractional z-exponent {ez} at {idx}")
        denom = 1
        for _, n in idx.kvec:
            denom *= math.factorial(n)
        coeff = LamZPoly.const(cap, Fraction(1, denom))
        # Gamma(1 - d(lam+H)/z) / Gamma(1 - k0 - d(lam+H)/z):
        # product over i < k0 of (-d lam/z - d H/z - i)
        for i in range(idx.k0):
            coeff = coeff * LamZPoly(cap, {
                (1, -1): NilPoly.const(cap, Fraction(-d)),
                (0, -1): NilPoly.h_power(cap, 1, Fraction(-d)),
                (0, 0): NilPoly.const(cap, Fraction(-i)),
            })
        # per-coordinate ratios Gamma(1 + c_j H/z - <..>)/Gamma(1 + c_j H/z + k0 q_j - a^j)
        for j in range(model.nvars):
            x = -idx.k0 * model.charges[j] + avec[j]
            coeff = coeff * _gamma_ratio_factors(
                cap, 0, model.weights[j], math.floor(x), frac_part(x))
        entries[idx] = (sector, coeff.shift_z(int(ez)))
    return IFunctionSeries("plus", order, group, entries,
                           {"symbol": "q^(H/z)", "expanded": False,
                            "cone_constant": str(_cone_constant(model))})


def _cone_constant(model) -> Fraction:
    """c = (-d)^d prod c_i^(-c_i): the puncture of the q-plane (metadata for
    the covers; no analytic continuation is performed)."""
    c = Fraction((-model.degree) ** model.degree)
    for w in model.weights:
        c /= Fraction(w) ** w
    return c


def gamma_ratio_numeric_check(group: SymmetryGroup, order: int,
                              dps: int = DEFAULT_DPS, tol=None) -> dict:
    """Constant terms (H = lam = 0) of every i_plus coefficient against
    direct high-precision Gamma quotients."""
    model = group.model
    d = model.degree
    with mpmath.workdps(dps + 15):
        if tol is None:
            tol = mpmath.mpf(10) ** -(dps - 5)
        series = i_plus_series(group, order)
        bad = []
        for idx, (sector, coeff) in series.entries.items():
            avec = _a_vector(group, idx.kvec)
            # numeric product of the Gamma quotients at H = lam = 0
            num = mpmath.gamma(1) * mpmath.rgamma(1 - idx.k0)
            for j in range(model.nvars):
                x = -idx.k0 * model.charges[j] + avec[j]
                f = frac_part(x)
                num *= mpmath.gamma(1 - to_mpc(f, dps)) * mpmath.rgamma(
                    1 - to_mpc(f, dps) - math.floor(x))
            denom = mpmath.mpf(1)
            for _, n in idx.kvec:
                denom *= mpmath.factorial(n)
            num /= denom
            # exact constant term: collect (lam^0 z^e H^0) over all e
            exact = mpmath.mpc(0)
            for (a, b), p in coeff.terms.items():
                if a == 0 and p.cap and not p.coeffs[0] == 0:
                    exact += to_mpc(p.coeffs[0], dps)
            dev = abs(exact - num)
            if dev > tol:
                bad.append({"index": idx.monomial(), "deviation": float(dev)})
        return {"passed": not bad, "witnesses": bad, "count": len(series.entries)}


# -- twisted-theory helpers -------------------------------------------------------


def twisted_dual_basis(group: SymmetryGroup, lambda_multiples=None) -> dict:
    """Dual basis of the equivariantly twisted FJRW pairing:
    phi^(g j^-1) = |G| prod_{k: m_k(g)=0} (-lambda_k) phi_(g^-1 j^-1),
    with lambda_k = r_k * lam.  Returns g -> (LamZPoly factor, g^-1)."""
    model = group.model
    if lambda_multiples is None:
        lambda_multiples = [Fraction(1)] * model.nvars
    if any(r == 0 for r in lambda_multiples):
        raise ValueError("lambda multiples must be nonzero")
    out = {}
    for g in group:
        fixed = g.fixed_coords
        scalar = Fraction(len(group))
        for k in fixed:
            scalar *= -Fraction(lambda_multiples[k])
        factor = LamZPoly(1, {(len(fixed), 0): NilPoly.const(1, scalar)})
        out[g] = (factor, g.inverse())
    return out


def s_specialization(lambda_values, cap: int = 3, dps: int = DEFAULT_DPS) -> dict:
    """s_0^j = ln(-1/lambda_j), s_k^j = (k-1)!/lambda_j^k, plus the identity
    check exp(sum_k s_k ch_k(L)) = 1/e_T(L) on a line bundle with nilpotent
    first Chern class."""
    with mpmath.workdps(dps + 15):
        record = []
        max_dev = mpmath.mpf(0)
        for lam in lambda_values:
            lv = to_mpc(lam, dps)
            if lv == 0:
                raise ValueError("lambda_j = 0 has no specialization")
            s0 = mpmath.log(-1 / lv)
            sk = [s0] + [mpmath.factorial(k - 1) / lv ** k for k in range(1, cap + 1)]
            # check on L with c1 = H (nilpotent of order cap+1), weight -lambda
            hcap = cap + 1
            nil = NilPoly(hcap)
            for k in range(1, cap + 1):
                # ch_k(L) = H^k / k!
                nil = nil + NilPoly.h_power(hcap, k, sk[k] / mpmath.factorial(k))
            # exp(s0 + nilpotent) = e^(s0) * finite exponential of the nilpotent part
            lhs = NilPoly.const(hcap, mpmath.mpc(1))
            term = NilPoly.const(hcap, mpmath.mpc(1))
            for n in range(1, hcap):
                term = term * nil * (mpmath.mpf(1) / n)
                lhs = lhs + term
            lhs = lhs * mpmath.exp(s0)
            # 1/e_T(L) = 1/(H - lambda)
            et = NilPoly.h_power(hcap, 1, mpmath.mpc(1)) - NilPoly.const(hcap, lv)
            rhs = et.invert()
            dev = max(abs(a - b) for a, b in zip(lhs.coeffs, rhs.coeffs))
            max_dev = max(max_dev, dev)
            record.append({"lambda": str(lam), "s0": s0, "s_k": sk[1:]})
        return {"parameters": record, "max_deviation": max_dev,
                "passed": max_dev < mpmath.mpf(10) ** -(dps - 10)}


def symplectic_pair(f1: dict, f2: dict):
    """Omega(f1, f2) = Res_{z=0} <f1(-z), f2(z)>: inputs are finite maps
    z-exponent -> CRVector; picks sum_{a+b=-1} (-1)^a <f1_a, f2_b>."""
    total = None
    for a, va in f1.items():
        b = -1 - a
        if b in f2:
            val = pair(va, f2[b])
            val = val if a % 2 == 0 else -val
            total = val if total is None else total + val
    return total if total is not None else Fraction(0)
