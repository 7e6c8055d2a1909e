"""K-theory of the LG/CY square: characters of the big torus group, window
round-down, cokernel classes, the window transports, and exact Euler pairings.

A character (k1, zeta, k2) of C* x Gbar x C*_R is the atom of every K-class.
K-classes are finitely supported integer combinations of characters, tagged by
the space they live on; rational faithfulness of the orbifold Chern character
makes ch-comparison the equality decision procedure (see chern.py).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CycNum
from .model import GroupElement, SymmetryGroup
from .statespace import Space

MONOMIAL_DEGREE_FACTOR = 10  # enumeration cap: degree <= factor * d by default


class GbarChar:
    """A character of Gbar, canonically stored as its value table: the
    exponent of xi_D at each element of group.gbar (in group order)."""

    __slots__ = ("order", "table")

    def __init__(self, order: int, table):
        self.order = order
        self.table = tuple(int(t) % order for t in table)

    def __mul__(self, other: "GbarChar") -> "GbarChar":
        return GbarChar(self.order, [a + b for a, b in zip(self.table, other.table)])

    def inverse(self) -> "GbarChar":
        return GbarChar(self.order, [-a for a in self.table])

    def is_trivial(self) -> bool:
        return all(t == 0 for t in self.table)

    def __eq__(self, other):
        return isinstance(other, GbarChar) and self.order == other.order and self.table == other.table

    def __hash__(self):
        return hash((self.order, self.table))

    def __repr__(self):
        return f"zeta{list(self.table)}" if not self.is_trivial() else "triv"


class CharContext:
    """Per-group character bookkeeping: coordinate characters, the dual group
    of Gbar, and evaluation of big-group characters at sectors."""

    def __init__(self, group: SymmetryGroup):
        self.group = group
        self.model = group.model
        self.order = group.model.cyclotomic_order
        self._gbar_index = {h.exponents: i for i, h in enumerate(group.gbar)}
        D = self.order
        self.coord_chars = []
        for j in range(self.model.nvars):
            table = [int(h.multiplicity(j) * D) for h in group.gbar]
            self.coord_chars.append(GbarChar(D, table))
        self.trivial = GbarChar(D, [0] * len(group.gbar))

    @property
    def degree(self) -> int:
        return self.model.degree

    def dual_group(self) -> list[GbarChar]:
        """All characters of Gbar (closure of the coordinate restrictions)."""
        seen = {self.trivial: True}
        frontier = [self.trivial]
        while frontier:
            nxt = []
            for chi in frontier:
                for zj in self.coord_chars:
                    p = chi * zj
                    if p not in seen:
                        seen[p] = True
                        nxt.append(p)
            frontier = nxt
        assert len(seen) == len(self.group.gbar), "dual group size mismatch"
        return sorted(seen, key=lambda c: c.table)

    def value_exponent(self, k1: int, zeta: GbarChar, g: GroupElement) -> int:
        """Exponent e with value xi_D^e of the character (k1, zeta) at the
        canonical sector representative (xi_d^m, gbar) of g = j^m gbar."""
        m, hbar = self.group.split(g)
        D = self.order
        e = m * k1 * (D // self.degree) + zeta.table[self._gbar_index[hbar.exponents]]
        return e % D

    def value(self, k1: int, zeta: GbarChar, g: GroupElement) -> CycNum:
        return CycNum.root_of_unity(self.order, self.value_exponent(k1, zeta, g))

    def subset_char(self, mask: int) -> tuple[int, GbarChar]:
        """(sum of weights, product of coordinate characters) over the subset."""
        csum = 0
        zeta = self.trivial
        j = 0
        m = mask
        while m:
            if m & 1:
                csum += self.model.weights[j]
                zeta = zeta * self.coord_chars[j]
            m >>= 1
            j += 1
        return csum, zeta


_CONTEXTS: dict[int, CharContext] = {}


def char_context(group: SymmetryGroup) -> CharContext:
    ctx = _CONTEXTS.get(id(group))
    if ctx is None:
        ctx = CharContext(group)
        _CONTEXTS[id(group)] = ctx
    return ctx


@dataclass(frozen=True)
class GammaCharacter:
    k1: int
    zeta: GbarChar
    k2: int = 0

    def __repr__(self):
        z = "" if self.zeta.is_trivial() else f",{self.zeta}"
        r = f";{self.k2}" if self.k2 else ""
        return f"O({self.k1}{z}{r})"


@dataclass(frozen=True)
class WindowSpec:
    l: int
    width: int  # always the degree d

    def contains(self, k1: int) -> bool:
        return self.l <= k1 <= self.l + self.width - 1


class KClass:
    """Integer combination of line-bundle characters on a tagged space."""

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms=None):
        self.space = space
        self.terms: dict[GammaCharacter, int] = {}
        if terms:
            for c, n in terms.items():
                if n:
                    self.terms[c] = self.terms.get(c, 0) + n
            self.terms = {c: n for c, n in self.terms.items() if n}

    @staticmethod
    def line(space: Space, k1: int, zeta: GbarChar, k2: int = 0, coeff: int = 1) -> "KClass":
        return KClass(space, {GammaCharacter(k1, zeta, k2): coeff})

    def add_term(self, char: GammaCharacter, n: int):
        if not n:
            return
        cur = self.terms.get(char, 0) + n
        if cur:
            self.terms[char] = cur
        else:
            self.terms.pop(char, None)

    def __add__(self, other: "KClass") -> "KClass":
        assert self.space is other.space
        out = KClass(self.space, dict(self.terms))
        for c, n in other.terms.items():
            out.add_term(c, n)
        return out

    def __neg__(self):
        return KClass(self.space, {c: -n for c, n in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n: int) -> "KClass":
        return KClass(self.space, {c: n * m for c, m in self.terms.items()})

    def twist(self, k1: int, zeta: GbarChar, k2: int = 0) -> "KClass":
        return KClass(self.space, {
            GammaCharacter(c.k1 + k1, c.zeta * zeta, c.k2 + k2): n
            for c, n in self.terms.items()
        })

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        # structural equality on normalized terms; the rationally faithful
        # decision procedure is chern.kclasses_equal
        if not isinstance(other, KClass):
            return NotImplemented
        return self.space is other.space and self.terms == other.terms

    def __hash__(self):
        raise TypeError("KClass not hashable")

    def __repr__(self):
        if not self.terms:
            return f"K[{self.space}](0)"
        body = " + ".join(f"{n}*{c}" for c, n in sorted(
            self.terms.items(), key=lambda t: (t[0].k1, t[0].zeta.table, t[0].k2)))
        return f"K[{self.space}]({body})"


# -- window operations ---------------------------------------------------------


def floor_char(c: GammaCharacter, w: WindowSpec) -> tuple[GammaCharacter, int]:
    """Round-down: unique m with k1 - m*d in [l, l+d-1]; R-weight shifts by m."""
    d = w.width
    m = (c.k1 - w.l) // d
    return GammaCharacter(c.k1 - m * d, c.zeta, c.k2 + m), m


def koszul_kclass(space: Space, twist: GammaCharacter, group: SymmetryGroup) -> KClass:
    """K-class of the Koszul complex/factorization of the coordinate bundle,
    twisted: sum over subsets J of (-1)^|J| [O(k1 - sum c_J, zeta * zeta_J^-1, k2)]."""
    ctx = char_context(group)
    n = group.model.nvars
    out = KClass(space)
    for mask in range(1 << n):
        csum, zeta_j = ctx.subset_char(mask)
        sign = -1 if bin(mask).count("1") % 2 else 1
        out.add_term(
            GammaCharacter(twist.k1 - csum, twist.zeta * zeta_j.inverse(), twist.k2),
            sign,
        )
    return out


def k_cokernel_class(k: int, zeta: GbarChar, w: WindowSpec, group: SymmetryGroup) -> KClass:
    """K(k, zeta) on P(G): floored summands of the twisted Koszul complex,
    i.e. subsets J with k - sum c_J >= l + d, rounded down into the window."""
    d = w.width
    if not (w.l + d <= k <= w.l + 2 * d - 1):
        raise ValueError(f"k={k} outside [l+d, l+2d-1] = [{w.l + d}, {w.l + 2 * d - 1}]")
    ctx = char_context(group)
    n = group.model.nvars
    out = KClass(Space.PG)
    for mask in range(1 << n):
        csum, zeta_j = ctx.subset_char(mask)
        k1 = k - csum
        if k1 >= w.l + d:
            fc, m = floor_char(GammaCharacter(k1, zeta * zeta_j.inverse(), 0), w)
            assert m >= 1
            sign = -1 if bin(mask).count("1") % 2 else 1
            # complexes on P(G) carry no R-weight
            out.add_term(GammaCharacter(fc.k1, fc.zeta, 0), sign)
    return out


def window_representative(k: int, w: WindowSpec) -> int:
    """The unique k* = k mod d in [l+d, l+2d-1] (the regime of the
    transport values on supported classes)."""
    d = w.width
    return (k - (w.l + d)) % d + (w.l + d)


def vgit_l(x: KClass, w: WindowSpec, group: SymmetryGroup) -> KClass:
    """Window transport of BG-supported classes: i0_* O_BG(k, zeta) maps to
    i0_* K(k*, zeta) with k* the representative in [l+d, l+2d-1].

    Input chars live on BG (k mod d); output is the P(G)-class whose i0_*
    is the transported class on Y+.
    """
    assert x.space is Space.BG
    out = KClass(Space.PG)
    for c, n in x.terms.items():
        kstar = window_representative(c.k1, w)
        out = out + k_cokernel_class(kstar, c.zeta, w, group).scale(n)
    return out


def orlov_l(x: KClass, w: WindowSpec, group: SymmetryGroup) -> KClass:
    """Orlov transport at K-level: i1_* O_BG(k, zeta) to D(Z).

    Independent bookkeeping from vgit_l: the Koszul factorization of the
    representative twist is rounded down over the big group (tracking the
    R-weight increments), unchanged summands die in the cokernel on p = 0,
    the eta-weight is forgotten (tensoring by O(eta) is the double shift),
    and the result is recorded as a Z-restricted class.
    """
    assert x.space is Space.MF
    ctx = char_context(group)
    n = group.model.nvars
    out = KClass(Space.ZAMBIENT)
    for c, coeff in x.terms.items():
        kstar = window_representative(c.k1, w)
        for mask in range(1 << n):
            csum, zeta_j = ctx.subset_char(mask)
            summand = GammaCharacter(kstar - csum, c.zeta * zeta_j.inverse(), c.k2)
            fc, m = floor_char(summand, w)
            if m == 0:
                continue  # rd_l is the identity here; killed in the cokernel
            sign = -1 if bin(mask).count("1") % 2 else 1
            # forget the R-weight: O(eta) twist is [2], trivial in K-theory
            out.add_term(GammaCharacter(fc.k1, fc.zeta, 0), sign * coeff)
    return out


# -- exact Euler pairings -------------------------------------------------------


def _chi_bg_chars(ctx: CharContext, a: GammaCharacter, b: GammaCharacter) -> int:
    """dim Hom_G(O(a), O(b)) on BG: 1 iff the difference character is trivial."""
    dk = b.k1 - a.k1
    dz = b.zeta * a.zeta.inverse()
    return 1 if dk % ctx.degree == 0 and dz.is_trivial() else 0


def chi_bg(group: SymmetryGroup, x: KClass, y: KClass) -> int:
    ctx = char_context(group)
    total = 0
    for a, na in x.terms.items():
        for b, nb in y.terms.items():
            total += na * nb * _chi_bg_chars(ctx, a, b)
    return total


class _MonomialCache:
    def __init__(self, group: SymmetryGroup):
        self.group = group
        self.ctx = char_context(group)
        self.cap = MONOMIAL_DEGREE_FACTOR * group.model.degree
        self._by_degree: dict[int, dict[tuple, int]] = {}
        self.chi_diff: dict[tuple, int] = {}
        self.chi_minus_diff: dict[tuple, object] = {}
        self.kappa: dict[tuple, object] = {}

    def counts(self, m: int) -> dict[tuple, int]:
        """Character-table -> count of weighted-degree-m monomials."""
        if m < 0:
            return {}
        if m > self.cap:
            raise ValueError(
                f"weighted degree {m} beyond enumeration cap {self.cap}")
        cached = self._by_degree.get(m)
        if cached is not None:
            return cached
        weights = self.group.model.weights
        coord = self.ctx.coord_chars
        D = self.ctx.order
        counts: dict[tuple, int] = {}
        nv = len(weights)

        def rec(j: int, remaining: int, table: tuple):
            if j == nv - 1:
                c = weights[j]
                if remaining % c == 0:
                    e = remaining // c
                    t = tuple((a + e * b) % D for a, b in zip(table, coord[j].table))
                    counts[t] = counts.get(t, 0) + 1
                return
            c = weights[j]
            for e in range(remaining // c + 1):
                t = tuple((a + e * b) % D for a, b in zip(table, coord[j].table))
                rec(j + 1, remaining - e * c, t)

        rec(0, m, tuple(0 for _ in self.group.gbar))
        self._by_degree[m] = counts
        return counts


_MONO_CACHES: dict[int, _MonomialCache] = {}


def _mono_cache(group: SymmetryGroup) -> _MonomialCache:
    mc = _MONO_CACHES.get(id(group))
    if mc is None:
        mc = _MonomialCache(group)
        _MONO_CACHES[id(group)] = mc
    return mc


def h0_pg(group: SymmetryGroup, m: int, theta: GbarChar) -> int:
    """dim H^0(P(G), O(m, theta)): weighted-degree-m monomials of Gbar-character
    theta (sections on the Gbar-quotient are the theta-isotypic monomials)."""
    if m < 0:
        return 0
    return _mono_cache(group).counts(m).get(theta.table, 0)


def canonical_char(group: SymmetryGroup) -> GbarChar:
    """Gbar-character of the canonical bundle of P(c): product of inverse
    coordinate characters (trivial when G <= SL)."""
    ctx = char_context(group)
    z = ctx.trivial
    for c in ctx.coord_chars:
        z = z * c.inverse()
    return z


def _chi_pg_chars(group: SymmetryGroup, a: GammaCharacter, b: GammaCharacter) -> int:
    """chi(O(a), O(b)) on P(G): cohomology of line bundles on weighted
    projective stacks sits in degrees 0 and N-1 only.  Depends only on the
    difference character, which is memoized."""
    model = group.model
    m = b.k1 - a.k1
    theta = b.zeta * a.zeta.inverse()
    cache = _mono_cache(group).chi_diff
    key = (m, theta.table)
    hit = cache.get(key)
    if hit is not None:
        return hit
    h0 = h0_pg(group, m, theta)
    # Serre duality: h^(N-1)(O(m, theta)) = h^0(O(-m - sum c, zeta_can * theta^-1))
    sc = sum(model.weights)
    htop = h0_pg(group, -m - sc, canonical_char(group) * theta.inverse())
    sign = -1 if (model.nvars - 1) % 2 else 1
    val = h0 + sign * htop
    cache[key] = val
    return val


def chi_pg(group: SymmetryGroup, x: KClass, y: KClass) -> int:
    total = 0
    for a, na in x.terms.items():
        for b, nb in y.terms.items():
            if na and nb:
                total += na * nb * _chi_pg_chars(group, a, b)
    return total


def _narrow_kernels(group: SymmetryGroup) -> dict:
    """kappa_g = prod_j (1 - e^(2 pi i m_j(g))) for narrow g, cached."""
    mc = _mono_cache(group)
    if not mc.kappa:
        D = group.model.cyclotomic_order
        for g in group.narrow_elements:
            kappa = CycNum.from_rational(1, D)
            for m in g.multiplicities:
                kappa = kappa * (1 - CycNum.from_fraction_of_turn(m, D))
            mc.kappa[g.exponents] = kappa
    return mc.kappa


def chi_yminus_supported(group: SymmetryGroup, x: KClass, y: KClass):
    """chi_{Y-}(i0_* x, i0_* y) by the character-sum closed form:
    (1/|G|) sum_g conj(chi_x(g)) chi_y(g) prod_j (1 - e^(2 pi i m_j(g)));
    only narrow g contribute."""
    ctx = char_context(group)
    total = 0
    for a, na in x.terms.items():
        for b, nb in y.terms.items():
            total += na * nb * _chi_yminus_chars(group, ctx, a, b)
    return total


def _chi_yminus_chars(group: SymmetryGroup, ctx: CharContext,
                      a: GammaCharacter, b: GammaCharacter) -> int:
    """Single-character case of the closed form; difference-memoized."""
    dk = b.k1 - a.k1
    dz = b.zeta * a.zeta.inverse()
    cache = _mono_cache(group).chi_minus_diff
    key = (dk % ctx.degree, dz.table)
    hit = cache.get(key)
    if hit is not None:
        return hit
    D = ctx.order
    kernels = _narrow_kernels(group)
    total = CycNum.from_rational(0, D)
    for g in group.narrow_elements:
        total = total + ctx.value(dk, dz, g) * kernels[g.exponents]
    q = (total * Fraction(1, len(group))).as_rational()
    if q.denominator != 1:
        raise ArithmeticError(f"non-integral chi: {q}")
    cache[key] = int(q)
    return int(q)


def chi_yminus_brute(group: SymmetryGroup, x: KClass, y: KClass) -> int:
    """Independent oracle: Koszul resolution of the zero section, an
    alternating sum of BG Euler pairings against exterior powers."""
    ctx = char_context(group)
    n = group.model.nvars
    total = 0
    for mask in range(1 << n):
        csum, zeta_j = ctx.subset_char(mask)
        sign = -1 if bin(mask).count("1") % 2 else 1
        yt = y.twist(csum, zeta_j)  # y tensor Lambda^|J| N with N the coordinate rep
        total += sign * chi_bg(group, x, yt)
    return total


def chi_yplus_supported(group: SymmetryGroup, x: KClass, y: KClass) -> int:
    """chi_{Y+}(i0_* x, i0_* y) = chi_PG(x, y) - chi_PG(x, y(-d))."""
    ctx = char_context(group)
    ym = y.twist(-group.model.degree, ctx.trivial)
    return chi_pg(group, x, y) - chi_pg(group, x, ym)


def chi(group: SymmetryGroup, x: KClass, y: KClass):
    """Exact Euler pairing dispatch.  BG/PG are the plain pairings; YMINUS
    and YPLUS mean the supported pairings of i0-pushforwards; MF uses the
    narrow character-sum (the Koszul factorization pairing); ZAMBIENT is the
    hypersurface pairing of restrictions."""
    assert x.space is y.space
    space = x.space
    if space is Space.BG:
        return chi_bg(group, x, y)
    if space is Space.PG:
        return chi_pg(group, x, y)
    if space is Space.YMINUS:
        return chi_yminus_supported(group, x, y)
    if space is Space.YPLUS:
        return chi_yplus_supported(group, x, y)
    if space is Space.MF:
        return chi_yminus_supported(group, x, y)
    if space is Space.ZAMBIENT:
        ctx = char_context(group)
        ym = y.twist(-group.model.degree, ctx.trivial)
        xp = KClass(Space.PG, x.terms)
        return chi_pg(group, xp, KClass(Space.PG, y.terms)) - chi_pg(group, xp, KClass(Space.PG, ym.terms))
    raise ValueError(space)


def verify_chi_preservation(group: SymmetryGroup, l: int) -> dict:
    """chi_{Y-}(i0 x, i0 y) = chi_{Y+}(vgit x, vgit y) for every pair of
    window characters, computed by the two independent oracles (narrow
    character sum vs weighted monomial counting)."""
    ctx = char_context(group)
    d = group.model.degree
    w = WindowSpec(l, d)
    duals = ctx.dual_group()
    chars = [(k, z) for k in range(l + d, l + 2 * d) for z in duals]
    lines = {c: KClass.line(Space.BG, c[0], c[1]) for c in chars}
    images = {c: vgit_l(lines[c], w, group) for c in chars}
    ok = True
    worst = None
    for a in chars:
        for b in chars:
            lhs = chi_yminus_supported(group, lines[a], lines[b])
            rhs = chi_yplus_supported(group, images[a], images[b])
            if lhs != rhs:
                ok = False
                worst = {"x": repr(lines[a]), "y": repr(lines[b]),
                         "chi_minus": lhs, "chi_plus": rhs}
    return {"name": f"chi-preservation[l={l}]", "passed": ok,
            "witnesses": [] if ok else [worst], "pairs": len(chars) ** 2}


# -- integrality of the window transport ---------------------------------------


def vgit_window_matrix(group: SymmetryGroup, l: int) -> list[list[int]]:
    """Integer matrix of vgit_l: columns the BG generators (k in
    [l+d, l+2d-1], zeta), rows the window characters (a in [l, l+d-1], theta)
    spanning K(P(G))."""
    ctx = char_context(group)
    d = group.model.degree
    w = WindowSpec(l, d)
    duals = ctx.dual_group()
    rows = [(a, theta) for a in range(l, l + d) for theta in duals]
    row_index = {rc: i for i, rc in enumerate(rows)}
    cols = [(k, zeta) for k in range(l + d, l + 2 * d) for zeta in duals]
    mat = [[0] * len(cols) for _ in rows]
    for ci, (k, zeta) in enumerate(cols):
        kk = k_cokernel_class(k, zeta, w, group)
        for c, n in kk.terms.items():
            mat[row_index[(c.k1, c.zeta)]][ci] += n
    return mat


def int_det(mat: list[list[int]]) -> Fraction:
    """Exact determinant via fraction arithmetic."""
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det
