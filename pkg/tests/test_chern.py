from fractions import Fraction

import mpmath
import pytest

from lgcy.cyclotomic import CycNum
from lgcy.chern import (ch_i0_yplus, ch_koszul_minus, ch_mf_koszul,
                        flat_frame, gamma_class, gamma_pairing_report,
                        kawasaki_chi_pg, kclasses_equal, lattice_rank, orb_ch,
                        todd_and_euler)
from lgcy.gammafun import gamma_taylor
from lgcy.ktheory import GammaCharacter, KClass, char_context, _chi_pg_chars
from lgcy.nilpotent import NilPoly, nil_exp
from lgcy.statespace import Space, narrow_basis


def test_orb_ch_bg_character_table(m1):
    ctx = char_context(m1)
    v = orb_ch(KClass.line(Space.BG, 2, ctx.trivial), m1)
    j = m1.model.grading_element()
    for a in range(5):
        c = v.coefficient(j ** a).coeffs[0]
        assert c == CycNum.root_of_unity(5, 2 * a)


def test_orb_ch_line_bundle_exponential(m1):
    v = orb_ch(KClass.line(Space.PG, 1, char_context(m1).trivial), m1)
    p = v.coefficient(m1.model.identity())
    assert p.coeffs == [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]


def test_orb_ch_isotropy_value(m3):
    ctx = char_context(m3)
    zeta = ctx.dual_group()[1]
    v = orb_ch(KClass.line(Space.PG, 0, zeta), m3)
    for g in m3.sector_elements:
        c = v.coefficient(g).coeffs[0]
        assert c == ctx.value(0, zeta, g)


def test_orb_ch_ring_map(m3):
    """ch(x tensor y) = ch(x) ch(y) sector-wise on line bundles."""
    ctx = char_context(m3)
    duals = ctx.dual_group()
    x = GammaCharacter(1, duals[1], 0)
    y = GammaCharacter(2, duals[2], 0)
    vx = orb_ch(KClass(Space.PG, {x: 1}), m3)
    vy = orb_ch(KClass(Space.PG, {y: 1}), m3)
    vxy = orb_ch(KClass.line(Space.PG, 3, duals[1] * duals[2]), m3)
    for g in m3.sector_elements:
        assert vx.coefficient(g) * vy.coefficient(g) == vxy.coefficient(g)


def test_ch_koszul_minus_closed_form(m1):
    """Subset enumeration equals the closed product formula."""
    ctx = char_context(m1)
    D = m1.model.cyclotomic_order
    v = ch_koszul_minus(GammaCharacter(0, ctx.trivial, 0), m1)
    j = m1.model.grading_element()
    for a in range(1, 5):
        g = j ** a
        expect = CycNum.from_rational(1, D)
        for m in g.multiplicities:
            expect = expect * (1 - CycNum.from_fraction_of_turn(-m, D))
        assert v.coefficient(g).coeffs[0] == expect
    # broad sector coefficient is exactly zero
    assert v.coefficient(m1.model.identity()).is_zero()


def test_ch_koszul_lands_narrow(m2, m3):
    for group in (m2, m3):
        ctx = char_context(group)
        for zeta in ctx.dual_group():
            v = ch_koszul_minus(GammaCharacter(1, zeta, 0), group)
            assert all(g.narrow for g in v.data)


def test_ch_mf_character_twist(m1):
    """Twisting multiplies sector coefficients by the character value."""
    ctx = char_context(m1)
    base = ch_mf_koszul(GammaCharacter(0, ctx.trivial, 0), m1)
    tw = ch_mf_koszul(GammaCharacter(2, ctx.trivial, 0), m1)
    for g in m1.narrow_elements:
        assert tw.coefficient(g).coeffs[0] == \
            base.coefficient(g).coeffs[0] * ctx.value(2, ctx.trivial, g)


def test_grr_on_yplus(m1):
    """ch(i0_* x) = ch(x)(1 - e^(dH)) exactly."""
    ctx = char_context(m1)
    x = KClass.line(Space.PG, 1, ctx.trivial)
    v = ch_i0_yplus(x, m1)
    ident = m1.model.identity()
    expect = nil_exp(5, 1) * (NilPoly.const(5, 1) - nil_exp(5, 5))
    assert v.coefficient(ident) == expect
    # ch(i0_* [O]) = 1 - e^(dH)
    o = ch_i0_yplus(KClass.line(Space.PG, 0, ctx.trivial), m1)
    assert o.coefficient(ident) == NilPoly.const(5, 1) - nil_exp(5, 5)


def test_todd_and_euler(m1):
    todd, euler = todd_and_euler(m1)
    ident = m1.model.identity()
    assert todd[ident].coeffs[:3] == [1, Fraction(-5, 2), Fraction(25, 12)]
    assert euler[ident] == NilPoly.h_power(5, 1, Fraction(-5))


def test_gamma_class_values(m1):
    gm = gamma_class(Space.PG, m1, dps=50)
    ident = m1.model.identity()
    coeffs = gm[ident].coeffs
    with mpmath.workdps(60):
        # Gamma(1+H)^5 = 1 - 5 gamma H + ((5 gamma)^2/2 + 5 pi^2/12) H^2 + ...
        assert abs(coeffs[0] - 1) < mpmath.mpf(10) ** -45
        assert abs(coeffs[1] + 5 * mpmath.euler) < mpmath.mpf(10) ** -45
        expect2 = (5 * mpmath.euler) ** 2 / 2 + 5 * mpmath.pi ** 2 / 12
        assert abs(coeffs[2] - expect2) < mpmath.mpf(10) ** -45
    # FJRW scalar: Gamma(4/5)^5 at sector j
    gf = gamma_class(Space.FJRW, m1, dps=50)
    j = m1.model.grading_element()
    with mpmath.workdps(60):
        assert abs(gf[j].coeffs[0] - mpmath.gamma(mpmath.mpf(4) / 5) ** 5) < mpmath.mpf(10) ** -45


def test_gamma_numeric_consistency(m3):
    """Constant terms of the Gamma classes against direct evaluation."""
    gm = gamma_class(Space.PG, m3, dps=50)
    with mpmath.workdps(60):
        for g, p in gm.items():
            direct = mpmath.mpf(1)
            for m in g.multiplicities:
                direct *= mpmath.gamma(1 - mpmath.mpf(m.numerator) / m.denominator)
            assert abs(p.coeffs[0] - direct) < mpmath.mpf(10) ** -45


def test_kawasaki_matches_monomial_counting(m1, m2, m3):
    for group in (m1, m2, m3):
        ctx = char_context(group)
        duals = ctx.dual_group()
        for mdeg in range(-2 * group.model.degree, 2 * group.model.degree + 1):
            for theta in duals:
                kw = kawasaki_chi_pg(group, mdeg, theta)
                mono = _chi_pg_chars(group, GammaCharacter(0, ctx.trivial, 0),
                                     GammaCharacter(mdeg, theta, 0))
                assert kw == mono, (group.model, mdeg, theta)


def test_flat_frame_trivial_group():
    from lgcy.model import LGModel, subgroup_closure
    g = subgroup_closure(LGModel((1,), 1), [])
    ctx = char_context(g)
    # BG for the trivial group: the frame of [O] at z=1 is the scalar 1
    f = flat_frame(Space.YMINUS, KClass.line(Space.BG, 0, ctx.trivial), g, z=1, dps=50)
    val = f.vector.coefficient(g.model.identity()).coeffs[0]
    with mpmath.workdps(60):
        # chat = N = 1, so s = (2 pi i)^(-1) Gamma(1) * 1
        assert abs(val * (2 * mpmath.pi * 1j) - 1) < mpmath.mpf(10) ** -40


def test_flat_frame_is_gamma_on_p4(m1):
    ctx = char_context(m1)
    f = flat_frame(Space.PG, KClass.line(Space.PG, 0, ctx.trivial), m1, z=1, dps=50)
    gm = gamma_class(Space.PG, m1, dps=50)[m1.model.identity()]
    got = f.vector.coefficient(m1.model.identity())
    with mpmath.workdps(60):
        scale = (2 * mpmath.pi * 1j) ** -4
        for a, b in zip(got.coeffs, gm.coeffs):
            assert abs(a - b * scale) < mpmath.mpf(10) ** -40


def test_gamma_pairing_p4_and_branch(m1):
    ctx = char_context(m1)
    O = lambda k: KClass.line(Space.PG, k, ctx.trivial)
    rep = gamma_pairing_report(Space.PG, m1, [(O(0), O(0)), (O(0), O(1)), (O(2), O(-1))], dps=50)
    assert rep["passed"]
    # sesquilinear branch rule: same check at z = e^(i pi/3)
    with mpmath.workdps(60):
        z = mpmath.exp(mpmath.mpc(0, 1) * mpmath.pi / 3)
    rep2 = gamma_pairing_report(Space.PG, m1, [(O(0), O(1)), (O(1), O(0))], z=z, dps=50)
    assert rep2["passed"]


def test_gamma_pairing_mf(m1):
    ctx = char_context(m1)
    OM = lambda k: KClass.line(Space.MF, k, ctx.trivial)
    rep = gamma_pairing_report(Space.FJRW, m1, [(OM(0), OM(1)), (OM(2), OM(2))], dps=50)
    assert rep["passed"]


def test_lattice_ranks(m1, m3):
    ctx = char_context(m1)
    vecs = [ch_koszul_minus(GammaCharacter(k, ctx.trivial, 0), m1) for k in range(5)]
    assert lattice_rank(m1, vecs) == 4  # |G_nar|
    pg = [orb_ch(KClass.line(Space.PG, k, ctx.trivial), m1) for k in range(5)]
    assert lattice_rank(m1, pg) == 5
    assert lattice_rank(m1, []) == 0
    ctx3 = char_context(m3)
    duals = ctx3.dual_group()
    vecs3 = [ch_koszul_minus(GammaCharacter(k, z, 0), m3)
             for k in range(5) for z in duals]
    assert lattice_rank(m3, vecs3) == len(m3.narrow_elements) == 12
    pg3 = [orb_ch(KClass.line(Space.PG, k, z), m3)
           for k in range(sum(m3.model.weights)) for z in duals]
    assert lattice_rank(m3, pg3) == 25


def test_kclasses_equal_separates(m1):
    ctx = char_context(m1)
    a = KClass.line(Space.PG, 1, ctx.trivial)
    b = KClass.line(Space.PG, 2, ctx.trivial)
    assert not kclasses_equal(a, b, m1)
    assert kclasses_equal(a, a, m1)
