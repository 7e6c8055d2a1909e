"""Orbifold Chern characters, Todd and Gamma classes, flat frames, and the
Gamma-pairing verifier.

Exact layer: Chern characters of line-bundle K-classes are cyclotomic-valued
truncated exponentials; Koszul pushforwards have closed forms; a Kawasaki-style
Riemann-Roch evaluation provides an exact integer chi oracle that cross-checks
the pairing normalization of the state spaces.

Numeric layer: Gamma classes and flat frames carry mpmath coefficients at an
explicit precision; the pairing identity S(s(E), s(F)) = e^(pi i dim) chi(F, E)
is checked against the exact chi from ktheory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .cyclotomic import CycNum
from .gammafun import DEFAULT_DPS, gamma_nilpoly, to_mpc
from .ktheory import (GammaCharacter, KClass, char_context, chi,
                      chi_yminus_supported, chi_pg)
from .model import GroupElement, SymmetryGroup
from .nilpotent import NilPoly, is_zero_scalar, nil_exp, todd_series
from .statespace import (CRVector, Space, pair_numeric, sector_cap,
                         sector_exists, sector_norm)


# -- exact Chern characters -----------------------------------------------------


def _char_exp_vector(group: SymmetryGroup, space: Space, char: GammaCharacter) -> CRVector:
    """ch of the line bundle O(k1, zeta) on the given space: sector value
    times e^(k1 H); the R-weight k2 is invisible to ch (O(eta) is the double
    shift)."""
    ctx = char_context(group)
    out = CRVector(space, group)
    for g in group:
        if not sector_exists(space, g):
            continue
        cap = sector_cap(space, g)
        if cap == 0:
            continue
        val = ctx.value(char.k1, char.zeta, g)
        p = nil_exp(cap, char.k1).map_coeffs(lambda c: val * c)
        out.add_to(g, p)
    return out


def orb_ch(x: KClass, group: SymmetryGroup) -> CRVector:
    """Orbifold Chern character of a K-class.

    BG classes are read as line bundles on Y- (scalar sector values); PG,
    YPLUS and ZAMBIENT classes as exponentials in H truncated at the sector
    caps; MF classes as i1-pushforwards via the Koszul closed form.
    """
    if x.space is Space.MF:
        out = CRVector(Space.FJRW, group)
        for c, n in x.terms.items():
            v = ch_mf_koszul(c, group)
            out = out + v.scale(n)
        return out
    target = {Space.BG: Space.YMINUS}.get(x.space, x.space)
    out = CRVector(target, group)
    for c, n in x.terms.items():
        out = out + _char_exp_vector(group, target, c).scale(n)
    return out


def ch_koszul_minus(char: GammaCharacter, group: SymmetryGroup) -> CRVector:
    """ch(i0_* O(k, zeta)) on Y-: the Koszul complex of the coordinate bundle,
    expanded by exterior-power enumeration (the closed form
    prod(1 - e^(-2 pi i m_j)) is what the tests compare against)."""
    ctx = char_context(group)
    nv = group.model.nvars
    out = CRVector(Space.YMINUS, group)
    for g in group:
        total = CycNum.from_rational(0, ctx.order)
        for mask in range(1 << nv):
            csum, zeta_j = ctx.subset_char(mask)
            sign = -1 if bin(mask).count("1") % 2 else 1
            v = ctx.value(char.k1 - csum, char.zeta * zeta_j.inverse(), g)
            total = total + (v if sign > 0 else -v)
        if not total.is_zero():
            out.add_to(g, NilPoly(1, [total]))
    return out


def ch_mf_koszul(char: GammaCharacter, group: SymmetryGroup) -> CRVector:
    """ch(i1_* O(k, zeta)) on the narrow FJRW space: the closed product form
    prod_j (1 - e^(-2 pi i m_j(g))) times the character value, narrow g only."""
    ctx = char_context(group)
    D = ctx.order
    out = CRVector(Space.FJRW, group)
    for g in group.narrow_elements:
        prod = CycNum.from_rational(1, D)
        for m in g.multiplicities:
            prod = prod * (1 - CycNum.from_fraction_of_turn(-m, D))
        val = ctx.value(char.k1, char.zeta, g)
        out.add_to(g, NilPoly(1, [prod * val]))
    return out


def ch_i0_yplus(x: KClass, group: SymmetryGroup) -> CRVector:
    """ch(i0_* x) on Y+ = ch(x) * (1 - e^(dH)) (Koszul of the normal bundle
    O(-d), whose sector eigenvalues are trivial)."""
    assert x.space is Space.PG
    d = group.model.degree
    base = orb_ch(KClass(Space.YPLUS, x.terms), group)
    out = CRVector(Space.YPLUS, group)
    for g, p in base.data.items():
        cap = p.cap
        factor = NilPoly.const(cap, Fraction(1)) - nil_exp(cap, d)
        out.add_to(g, p * factor)
    return out


def todd_and_euler(group: SymmetryGroup) -> tuple[dict, dict]:
    """Per-sector Todd class and Euler class of O_{Y+}(-d): the fiber
    eigenvalue is trivial at every sector, so Todd = (-dH)/(1 - e^(dH)) and
    Euler = -dH, exactly over Q."""
    d = group.model.degree
    todd = {}
    euler = {}
    for g in group.sector_elements:
        cap = g.fixed_rank
        todd[g] = todd_series(cap, -d)
        euler[g] = NilPoly.h_power(cap, 1, Fraction(-d))
    return todd, euler


# -- Kawasaki-style exact Euler characteristic ----------------------------------


def kawasaki_chi_pg(group: SymmetryGroup, m: int, theta) -> Fraction:
    """Exact chi(P(G), O(m, theta)) by summing sector integrals:
    sum_g int_{P(G)_g} ch_g * Td(T_g) / prod_mov (1 - e^(-2 pi i m_j) e^(-c_j H)).

    Independent of the monomial-counting oracle in ktheory; the sector
    integral uses the state-space normalization, so agreement pins the
    pairing normalization (acceptance criterion for the pairing)."""
    ctx = char_context(group)
    D = ctx.order
    # individual sector contributions are cyclotomic; only the total is rational
    total = CycNum.from_rational(0, D)
    for g in group.sector_elements:
        cap = g.fixed_rank
        val = ctx.value(m, theta, g)
        integrand = nil_exp(cap, m).map_coeffs(lambda c: val * c)
        for j in range(group.model.nvars):
            mj = g.multiplicity(j)
            cj = group.model.weights[j]
            if mj == 0:
                integrand = integrand * todd_series(cap, cj)
            else:
                eig = CycNum.from_fraction_of_turn(-mj, D)
                factor = NilPoly.const(cap, Fraction(1)) - nil_exp(cap, -cj).map_coeffs(lambda c: eig * c)
                integrand = integrand * factor.invert()
        top = integrand.coeffs[cap - 1]
        contrib = top if isinstance(top, CycNum) else CycNum.from_rational(top, D)
        total = total + contrib * sector_norm(group, g)
    return total.as_rational()


# -- Gamma classes ---------------------------------------------------------------


def gamma_class(space: Space, group: SymmetryGroup, dps: int = DEFAULT_DPS) -> dict:
    """Per-sector Gamma class of the tangent bundle as numeric NilPolys.

    On sector g the tangent eigen-pieces contribute Gamma(1 - m_j(g) + c_j H)
    (fixed coordinates have m_j = 0); on Y+ the fiber adds Gamma(1 - dH); on
    the point-like spaces the classes are the scalar prod Gamma(1 - m_j(g))."""
    model = group.model
    out = {}
    with mpmath.workdps(dps + 15):
        for g in group:
            if not sector_exists(space, g):
                continue
            cap = sector_cap(space, g)
            if cap == 0:
                continue
            if space in (Space.YMINUS, Space.FJRW):
                val = mpmath.mpf(1)
                for m in g.multiplicities:
                    val *= mpmath.gamma(1 - mpmath.mpf(m.numerator) / m.denominator)
                out[g] = NilPoly(1, [val])
                continue
            p = NilPoly.const(cap, to_mpc(1, dps))
            for j in range(model.nvars):
                m = g.multiplicity(j)
                p = p * gamma_nilpoly(1 - m, cap, model.weights[j], dps)
            if space is Space.YPLUS:
                p = p * gamma_nilpoly(Fraction(1), cap, -model.degree, dps)
            out[g] = p
    return out


# -- flat frames -----------------------------------------------------------------


def central_charge(space: Space, group: SymmetryGroup) -> Fraction:
    n = group.model.nvars
    if space in (Space.YMINUS, Space.YPLUS):
        return Fraction(n)
    if space is Space.PG:
        return Fraction(n - 1)
    if space is Space.ZAMBIENT:
        return Fraction(n - 2)
    if space is Space.FJRW:
        return n - 2 * sum(group.model.charges)
    raise ValueError(space)


def _rho_coefficient(space: Space, group: SymmetryGroup) -> int:
    """c1 of the tangent bundle as a multiple of H (zero off the proper base)."""
    sc = sum(group.model.weights)
    d = group.model.degree
    if space is Space.PG:
        return sc
    if space in (Space.YPLUS, Space.ZAMBIENT):
        return sc - d
    return 0


def _grading_shift(space: Space, g: GroupElement) -> Fraction:
    """Half the shifted degree of the H^0 class on sector g."""
    if space is Space.YMINUS:
        return g.age
    if space in (Space.PG, Space.YPLUS, Space.ZAMBIENT):
        return g.age_moving()
    if space is Space.FJRW:
        q = g.model.charges
        return sum((m - qj for m, qj in zip(g.multiplicities, q)), Fraction(0))
    raise ValueError(space)


@dataclass
class FlatFrameVector:
    space: Space
    vector: CRVector
    z: object
    logz: object
    chat: Fraction
    dps: int


def flat_frame(space: Space, x: KClass, group: SymmetryGroup, z=1,
               logz=None, dps: int = DEFAULT_DPS) -> FlatFrameVector:
    """s(x)(z) = (2 pi i)^(-chat) z^(-Gr) z^rho Gamma_hat (2 pi i)^(deg0/2)
    I^* ch(x), with the solution operator pinned to the identity (large-radius
    limit).  ``logz`` fixes the branch; sesquilinear partners evaluate at
    logz + pi*i."""
    with mpmath.workdps(dps + 15):
        zv = to_mpc(z, dps)
        lz = mpmath.log(zv) if logz is None else to_mpc(logz, dps)
        tpi = 2 * mpmath.pi * mpmath.mpc(0, 1)
        ltpi = mpmath.log(tpi)

        base = orb_ch(x, group)
        if base.space is not space:
            raise ValueError(f"ch of {x.space} K-class lands on {base.space}, not {space}")
        v = base.involution().to_numeric(dps)
        gammas = gamma_class(space, group, dps)
        rho = _rho_coefficient(space, group)
        chat = central_charge(space, group)

        out = CRVector(space, group)
        for g, p in v.data.items():
            cap = p.cap
            # (2 pi i)^(deg0/2): H^k picks (2 pi i)^k; on FJRW the operator is
            # the constant (2 pi i)^(-sum q_j)
            if space is Space.FJRW:
                sq = sum(group.model.charges)
                w = mpmath.exp(-to_mpc(sq, dps) * ltpi)
                p = p.map_coeffs(lambda c: c * w)
            else:
                p = NilPoly(cap, [p.coeffs[k] * tpi ** k for k in range(cap)])
            # Gamma class
            p = p * gammas[g]
            # z^rho = exp(rho * H * log z)
            if rho:
                zr = NilPoly(cap, [(rho * lz) ** k / math.factorial(k) for k in range(cap)])
                p = p * zr
            # z^(-Gr): H^k component of sector g scales by exp(-(k+shift) lz)
            shift = _grading_shift(space, g)
            p = NilPoly(cap, [
                p.coeffs[k] * mpmath.exp(-(k + to_mpc(shift, dps)) * lz)
                for k in range(cap)
            ])
            out.add_to(g, p)
        scal = mpmath.exp(-to_mpc(chat, dps) * ltpi)
        out = out.scale(scal)
        return FlatFrameVector(space, out, zv, lz, chat, dps)


def sesquilinear_pairing(u: FlatFrameVector, v: FlatFrameVector, dps: int = DEFAULT_DPS):
    """S(u, v) = (2 pi i z)^chat < u(e^(pi i) z), v(z) >; ``u`` must already be
    evaluated at the rotated argument."""
    with mpmath.workdps(dps + 15):
        tpi = 2 * mpmath.pi * mpmath.mpc(0, 1)
        pref = mpmath.exp(to_mpc(u.chat, dps) * mpmath.log(tpi * v.z))
        return pref * pair_numeric(u.vector, v.vector, dps)


def gamma_pairing_report(space: Space, group: SymmetryGroup, pairs,
                         z=1, tol=None, dps: int = DEFAULT_DPS) -> dict:
    """Check S(s(E), s(F)) = e^(pi i dim) chi(F, E) (proper) or the LG variant
    with e^(pi i (N + sum q_j)) against the exact chi oracles."""
    model = group.model
    with mpmath.workdps(dps + 15):
        if tol is None:
            tol = mpmath.mpf(10) ** -20
        zv = to_mpc(z, dps)
        lz = mpmath.log(zv)
        entries = []
        ok = True
        for E, F in pairs:
            u = flat_frame(space, E, group, z=zv * mpmath.exp(mpmath.mpc(0, 1) * mpmath.pi),
                           logz=lz + mpmath.mpc(0, 1) * mpmath.pi, dps=dps)
            v = flat_frame(space, F, group, z=zv, logz=lz, dps=dps)
            # the (2 pi i z)^chat prefactor uses the unrotated z
            pref = mpmath.exp(to_mpc(u.chat, dps) * mpmath.log(2 * mpmath.pi * mpmath.mpc(0, 1) * zv))
            S = pref * pair_numeric(u.vector, v.vector, dps)
            if space is Space.PG:
                expo = Fraction(model.nvars - 1)
                chi_exact = chi_pg(group, F, E)
            elif space is Space.FJRW:
                expo = model.nvars + sum(model.charges)
                chi_exact = chi_yminus_supported(
                    group, KClass(Space.BG, F.terms), KClass(Space.BG, E.terms))
            else:
                raise ValueError("gamma pairing checked on PG / FJRW (MF) spaces")
            expected = mpmath.exp(mpmath.mpc(0, 1) * mpmath.pi * to_mpc(expo, dps)) * chi_exact
            dev = abs(S - expected)
            passed = dev < tol
            ok = ok and passed
            entries.append({
                "E": repr(E), "F": repr(F), "chi": chi_exact,
                "deviation": float(dev), "passed": bool(passed),
            })
        return {"name": f"gamma-pairing[{space}]", "passed": ok, "witnesses": entries}


# -- lattice rank ----------------------------------------------------------------


def _to_cyc(c, order: int) -> CycNum:
    if isinstance(c, CycNum):
        return c.promote(order) if c.order != order else c
    return CycNum.from_rational(c, order)


def lattice_rank(group: SymmetryGroup, vectors: list[CRVector]) -> int:
    """Rank over Q(xi) of the span of state-space vectors."""
    if not vectors:
        return 0
    order = group.model.cyclotomic_order
    space = vectors[0].space
    coords = []
    for g in group:
        if sector_exists(space, g):
            cap = sector_cap(space, g)
            coords.extend((g, k) for k in range(cap))
    rows = []
    for v in vectors:
        row = []
        for g, k in coords:
            p = v.coefficient(g)
            row.append(_to_cyc(p.coeffs[k] if k < p.cap else 0, order))
        rows.append(row)
    # Gaussian elimination over the cyclotomic field
    rank = 0
    ncols = len(coords)
    pivot_col = 0
    while rows and pivot_col < ncols:
        piv = next((i for i, r in enumerate(rows) if not r[pivot_col].is_zero()), None)
        if piv is None:
            pivot_col += 1
            continue
        rows[0], rows[piv] = rows[piv], rows[0]
        prow = rows[0]
        inv = prow[pivot_col].inverse()
        rows = [
            [rc - (r[pivot_col] * inv) * pc for rc, pc in zip(r, prow)]
            if not r[pivot_col].is_zero() else r
            for r in rows[1:]
        ]
        rank += 1
        pivot_col += 1
    return rank


def kclasses_equal(a: KClass, b: KClass, group: SymmetryGroup) -> bool:
    """Equality decision via the (rationally faithful) orbifold Chern
    character."""
    if a.space is not b.space:
        return False
    return orb_ch(a, group) == orb_ch(b, group)
