"""Acceptance suite: the thirteen exit criteria, one test (and one printed
pass/fail line) per criterion, at the stated tolerances.

Baseline models: M1 = quintic <j>; M2 = (1,1,2)/4 <j>; M3 = quintic with
G = <j, (0,1,4,0,0)>.  Exact criteria admit no tolerance at all; numeric
criteria run at 50 digits against 1e-20 (Gamma ratios: 1e-45).
"""

from fractions import Fraction

import mpmath
import pytest

from lgcy.chern import (ch_koszul_minus, gamma_pairing_report, kawasaki_chi_pg,
                        kclasses_equal, lattice_rank, orb_ch)
from lgcy.ifunctions import (SeriesIndex, gamma_ratio_numeric_check,
                             i_minus_series, i_plus_series)
from lgcy.ktheory import (GammaCharacter, KClass, WindowSpec, char_context,
                          _chi_pg_chars, chi_pg, verify_chi_preservation,
                          vgit_l)
from lgcy.nilpotent import LamZPoly, NilPoly
from lgcy.statespace import Space, fjrw_bundle_degrees
from lgcy.transforms import (verify_delta_square, verify_induced,
                             verify_ksquare, verify_lgcy_pairing,
                             verify_narrow_preservation, verify_qsd_square)

L_FULL = range(-5, 6)


def _report(num, title, passed):
    print(f"[{'PASS' if passed else 'FAIL'}] criterion {num:2d}: {title}")
    assert passed


def test_criterion_01_quintic_window_values(m1):
    ctx = char_context(m1)
    w0 = WindowSpec(0, 5)
    v5 = vgit_l(KClass.line(Space.BG, 5, ctx.trivial), w0, m1)
    ok5 = v5 == KClass.line(Space.PG, 0, ctx.trivial)
    ok5 = ok5 and kclasses_equal(v5, KClass.line(Space.PG, 0, ctx.trivial), m1)
    v6 = vgit_l(KClass.line(Space.BG, 6, ctx.trivial), w0, m1)
    t6 = KClass.line(Space.PG, 1, ctx.trivial) + KClass.line(Space.PG, 0, ctx.trivial, coeff=-5)
    ok6 = v6 == t6 and kclasses_equal(v6, t6, m1)
    _report(1, "vgit_0(i O(5)) = [O], vgit_0(i O(6)) = [O(1)] - 5[O]", ok5 and ok6)


def test_criterion_02_induced_diagram(m1, m2, m3):
    ok = all(verify_induced(g, l)["passed"]
             for g in (m1, m2, m3) for l in L_FULL)
    _report(2, "UBar_l ch-diagram commutes (M1-M3, l in -5..5, exact)", ok)


def test_criterion_03_delta_chern_square(m1, m2, m3):
    ok = all(verify_delta_square(g)["passed"] for g in (m1, m2, m3))
    _report(3, "Delta_- ch i0 = ch i1 on all |G| characters (exact)", ok)


def test_criterion_04_qsd_chern_square(m1, m2, m3):
    ok = all(verify_qsd_square(g)["passed"] for g in (m1, m2, m3))
    _report(4, "Delta_+(Td cup ch F) = ch(j* pi_* F) on i0 generators (exact)", ok)


def test_criterion_05_k_square(m1, m2, m3):
    ok = all(verify_ksquare(g, l)["passed"]
             for g in (m1, m2, m3) for l in L_FULL)
    _report(5, "K-theory square commutes (M1-M3, l in -5..5, exact)", ok)


def test_criterion_06_chi_preservation(m1, m2, m3):
    ok = all(verify_chi_preservation(g, l)["passed"]
             for g in (m1, m2, m3) for l in L_FULL)
    _report(6, "chi preserved under vgit_l, two independent oracles (exact)", ok)


def test_criterion_07_pairing_normalization(m1, m2):
    ok = True
    for group in (m1, m2):
        ctx = char_context(group)
        d = group.model.degree
        for delta in range(-2 * d, 2 * d + 1):
            kw = kawasaki_chi_pg(group, delta, ctx.trivial)
            mono = _chi_pg_chars(group, GammaCharacter(0, ctx.trivial, 0),
                                 GammaCharacter(delta, ctx.trivial, 0))
            ok = ok and kw == mono and kw.denominator == 1
    ctx1 = char_context(m1)
    O = lambda k: KClass.line(Space.PG, k, ctx1.trivial)
    ok = ok and chi_pg(m1, O(0), O(1)) == 5 and chi_pg(m1, O(0), O(0)) == 1
    _report(7, "PG pairing reproduces Serre-consistent chi (exact integers)", ok)


def test_criterion_08_gamma_pairing(m1, m2, m3):
    ok = True
    with mpmath.workdps(65):
        tol = mpmath.mpf(10) ** -20
    # proper side on P4 and the P(G) of M2 / M3
    for group in (m1, m2, m3):
        ctx = char_context(group)
        duals = ctx.dual_group()
        pairs = [(KClass.line(Space.PG, a, duals[a % len(duals)]),
                  KClass.line(Space.PG, b, duals[(a + b) % len(duals)]))
                 for a in range(-2, 3) for b in range(-2, 3)]
        rep = gamma_pairing_report(Space.PG, group, pairs, z=1, tol=tol, dps=50)
        ok = ok and rep["passed"]
    # MF side on M1 with the e^(pi i (N + sum q)) orientation
    ctx1 = char_context(m1)
    mf_pairs = [(KClass.line(Space.MF, a, ctx1.trivial),
                 KClass.line(Space.MF, b, ctx1.trivial))
                for a in range(5) for b in range(5)]
    rep = gamma_pairing_report(Space.FJRW, m1, mf_pairs, z=1, tol=tol, dps=50)
    ok = ok and rep["passed"]
    _report(8, "Gamma-pairing identity |S - e^(pi i dim) chi| < 1e-20", ok)


def test_criterion_09_narrow_preservation(m1, m2, m3):
    ok = all(verify_narrow_preservation(g, l)["passed"]
             for g in (m1, m2, m3) for l in L_FULL)
    _report(9, "UBar_l narrow-preserving with invertible narrow matrix", ok)


def test_criterion_10_lgcy_pairing_sign(m1, m3):
    ok = True
    for group in (m1, m3):
        rep = verify_lgcy_pairing(group, ls=(0, 1), z=1, dps=50)
        ok = ok and rep["passed"]
    _report(10, "-S_Z(M a, M b) = S_w(a, b) to 1e-20 (M1, M3; l = 0, 1)", ok)


def test_criterion_11_ifunction_structure(m1, m2, m3):
    s = i_minus_series(m1, 2)
    lead0 = s.coefficient(SeriesIndex(0, ()))
    lead1 = s.coefficient(SeriesIndex(1, ()))
    ok = (lead0[0] == m1.model.identity()
          and lead0[1] == LamZPoly(1, {(0, 1): NilPoly.const(1, Fraction(1))})
          and lead1[0] == m1.model.grading_element()
          and lead1[1] == LamZPoly.const(1, Fraction(1)))
    for group, order in ((m1, 6), (m2, 6), (m3, 3)):
        ok = ok and i_minus_series(group, order).homogeneity_audit()["passed"]
        ok = ok and i_plus_series(group, order).homogeneity_audit()["passed"]
        with mpmath.workdps(65):
            r = gamma_ratio_numeric_check(group, order, dps=50,
                                          tol=mpmath.mpf(10) ** -45)
        ok = ok and r["passed"]
    _report(11, "I-series leading terms, homogeneity, Gamma ratios to 1e-45", ok)


def test_criterion_12_fjrw_selection_rules(m1):
    j = m1.model.grading_element()
    s1 = fjrw_bundle_degrees(m1, 0, [j ** 2, j ** 2, j ** 2])
    ok = (set(s1.line_degrees) == {Fraction(-1)} and s1.nonempty and s1.concave)
    s2 = fjrw_bundle_degrees(m1, 0, [j, j, j ** 3])
    ok = ok and set(s2.line_degrees) == {Fraction(-4, 5)} and not s2.nonempty
    _report(12, "FJRW selection rules: (j2,j2,j2) concave; (j,j,j3) empty", ok)


def test_criterion_13_lattice_spanning(m1, m3):
    ok = True
    for group in (m1, m3):
        ctx = char_context(group)
        duals = ctx.dual_group()
        d = group.model.degree
        nar = [ch_koszul_minus(GammaCharacter(k, z, 0), group)
               for k in range(d) for z in duals]
        ok = ok and lattice_rank(group, nar) == len(group.narrow_elements)
        sc = sum(group.model.weights)
        pg = [orb_ch(KClass.line(Space.PG, k, z), group)
              for k in range(sc) for z in duals]
        dim_pg = sum(g.fixed_rank for g in group.sector_elements)
        ok = ok and lattice_rank(group, pg) == dim_pg
    _report(13, "ch-lattices span: |G_nar| on Y-, dim H*_CR on P(G)", ok)
