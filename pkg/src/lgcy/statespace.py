"""The five state spaces of the LG/CY square and their pairings.

Spaces: the affine phase Y- = [C^N/G], the resolved phase
Y+ = tot(O_{P(G)}(-d)), the base P(G), the ambient cohomology of the
hypersurface Z, and the narrow FJRW space.  Vectors assign to each sector a
truncated polynomial in the hyperplane class H (cap 1 on point-like
sectors).  All pairings are exact; numeric variants exist for the
Gamma-frame computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath

from .cyclotomic import CycNum
from .gammafun import to_mpc
from .model import GroupElement, SymmetryGroup
from .nilpotent import NilPoly, is_zero_scalar


class Space(Enum):
    YMINUS = "yminus"
    YPLUS = "yplus"
    PG = "pg"
    ZAMBIENT = "z"
    FJRW = "fjrw"
    # K-theory-only tags
    BG = "bg"
    MF = "mf"

    def __str__(self):
        return self.value


GW_SPACES = {Space.YMINUS, Space.YPLUS, Space.PG, Space.ZAMBIENT}


def sector_exists(space: Space, g: GroupElement) -> bool:
    if space in (Space.YMINUS, Space.FJRW, Space.BG, Space.MF):
        return True if space is not Space.FJRW else g.narrow
    n = g.fixed_rank
    if space in (Space.PG, Space.YPLUS):
        return n > 0
    if space is Space.ZAMBIENT:
        return n > 1
    raise ValueError(space)


def sector_cap(space: Space, g: GroupElement) -> int:
    """Nilpotency order of H on the given sector."""
    if space in (Space.YMINUS, Space.FJRW, Space.BG, Space.MF):
        return 1
    n = g.fixed_rank
    if space in (Space.PG, Space.YPLUS):
        return n
    if space is Space.ZAMBIENT:
        return max(n - 1, 0)
    raise ValueError(space)


@dataclass(frozen=True)
class BasisElt:
    space: Space
    g: GroupElement
    h_power: int = 0

    def __repr__(self):
        tag = {Space.YMINUS: "1", Space.YPLUS: "1~", Space.PG: "1~",
               Space.ZAMBIENT: "j*1~", Space.FJRW: "phi"}[self.space]
        hp = f" H^{self.h_power}" if self.h_power else ""
        return f"{tag}_{list(self.g.exponents)}{hp}"


def degree(space: Space, elt: BasisElt) -> Fraction:
    """Chen-Ruan / FJRW degree of a basis element."""
    g = elt.g
    if space is Space.YMINUS:
        return 2 * g.age
    if space in (Space.PG, Space.YPLUS, Space.ZAMBIENT):
        return 2 * elt.h_power + 2 * g.age_moving()
    if space is Space.FJRW:
        q = g.model.charges
        return 2 * sum((m - qj for m, qj in zip(g.multiplicities, q)), Fraction(0))
    raise ValueError(space)


def basis(space: Space, group: SymmetryGroup) -> list[tuple[BasisElt, Fraction]]:
    """Full graded basis with degrees; FJRW returns the narrow part only
    (broad sectors are tracked by dimension count, never constructed)."""
    if space in (Space.YPLUS, Space.ZAMBIENT):
        preds = group.structural_predicates()
        if not preds["convex_Od"]:
            raise ValueError("Y+ / Z state spaces need O(d) convex on P(G)")
    out = []
    for g in group:
        if not sector_exists(space, g):
            continue
        hmax = 1 if space in (Space.YMINUS, Space.FJRW) else sector_cap(space, g)
        for k in range(hmax):
            elt = BasisElt(space, g, k)
            out.append((elt, degree(space, elt)))
    return out


def narrow_basis(space: Space, group: SymmetryGroup) -> list[BasisElt]:
    if space is Space.YMINUS:
        return [BasisElt(space, g) for g in group.narrow_elements]
    if space is Space.FJRW:
        return [BasisElt(space, g) for g in group.narrow_elements]
    if space is Space.YPLUS:
        out = []
        for g in group.sector_elements:
            for k in range(1, g.fixed_rank):
                out.append(BasisElt(space, g, k))
        return out
    raise ValueError("narrow basis defined for YMinus, YPlus, FJRW")


def ambient_basis(group: SymmetryGroup) -> list[BasisElt]:
    out = []
    for g in group.sector_elements:
        for k in range(0, g.fixed_rank - 1):
            out.append(BasisElt(Space.ZAMBIENT, g, k))
    return out


class CRVector:
    """State-space element: sector -> NilPoly (exact or numeric coefficients)."""

    __slots__ = ("space", "group", "data")

    def __init__(self, space: Space, group: SymmetryGroup, data=None):
        self.space = space
        self.group = group
        self.data: dict[GroupElement, NilPoly] = {}
        if data:
            for g, p in data.items():
                if not p.is_zero():
                    self.data[g] = p

    def coefficient(self, g: GroupElement) -> NilPoly:
        cap = sector_cap(self.space, g)
        return self.data.get(g, NilPoly(cap))

    def set_coefficient(self, g: GroupElement, p: NilPoly):
        if not sector_exists(self.space, g):
            if not p.is_zero():
                raise ValueError(f"sector {g} does not exist on {self.space}")
            return
        cap = sector_cap(self.space, g)
        if p.cap != cap:
            raise ValueError("cap mismatch for sector")
        if p.is_zero():
            self.data.pop(g, None)
        else:
            self.data[g] = p

    def add_to(self, g: GroupElement, p: NilPoly):
        cap = sector_cap(self.space, g)
        cur = self.data.get(g, NilPoly(cap))
        self.set_coefficient(g, cur + p)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.data.values())

    def __add__(self, other: "CRVector") -> "CRVector":
        assert self.space is other.space
        out = CRVector(self.space, self.group, dict(self.data))
        for g, p in other.data.items():
            out.add_to(g, p)
        return out

    def __neg__(self):
        return CRVector(self.space, self.group, {g: -p for g, p in self.data.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "CRVector":
        return CRVector(self.space, self.group, {g: p * c for g, p in self.data.items()})

    def __eq__(self, other):
        if not isinstance(other, CRVector) or self.space is not other.space:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("CRVector not hashable")

    def involution(self) -> "CRVector":
        """Inertia involution: coefficient at g becomes the one at g^-1."""
        out = CRVector(self.space, self.group)
        for g, p in self.data.items():
            out.set_coefficient(g.inverse(), p)
        return out

    def narrow_part_only(self) -> bool:
        """For YMinus: supported on narrow sectors; for YPlus: no H^0 term."""
        if self.space is Space.YMINUS:
            return all(g.narrow for g in self.data)
        if self.space is Space.YPLUS:
            return all(is_zero_scalar(p.constant_term()) for p in self.data.values())
        return True

    def to_numeric(self, dps: int = 50) -> "CRVector":
        return CRVector(
            self.space, self.group,
            {g: p.map_coeffs(lambda c: to_mpc(c, dps)) for g, p in self.data.items()},
        )

    def __repr__(self):
        rows = [f"  {g}: {p}" for g, p in sorted(self.data.items(), key=lambda kv: kv[0].exponents)]
        return f"CRVector[{self.space}](\n" + "\n".join(rows) + "\n)"


def basis_vector(space: Space, group: SymmetryGroup, elt: BasisElt, one=Fraction(1)) -> CRVector:
    v = CRVector(space, group)
    cap = sector_cap(space, elt.g)
    v.set_coefficient(elt.g, NilPoly.h_power(cap, elt.h_power, one))
    return v


def sector_norm(group: SymmetryGroup, g: GroupElement) -> Fraction:
    """int_{P(G)_g} H^(n_g - 1) = 1 / (|Gbar| * prod_{fixed j} c_j)."""
    prod = math.prod(group.model.weights[j] for j in g.fixed_coords)
    return Fraction(1, len(group.gbar) * prod)


def pair(a: CRVector, b: CRVector):
    """Exact state-space pairing; see module docstring for the conventions."""
    assert a.space is b.space, "pairing needs matching spaces"
    space = a.space
    group = a.group
    model = group.model
    total = Fraction(0)

    def products(pa: NilPoly, pb: NilPoly, top: int):
        s = Fraction(0)
        for k1 in range(min(pa.cap, top + 1)):
            c1 = pa.coeffs[k1]
            if is_zero_scalar(c1):
                continue
            k2 = top - k1
            if 0 <= k2 < pb.cap:
                c2 = pb.coeffs[k2]
                if not is_zero_scalar(c2):
                    s = s + c1 * c2
        return s

    if space is Space.YMINUS:
        # narrow sectors are [pt/G] gerbes: the integral carries 1/|G|, which
        # is what makes Delta_- pairing-preserving onto the FJRW side
        if not (a.narrow_part_only() and b.narrow_part_only()):
            raise ValueError("Y- pairing defined on the narrow span only")
        for g, pa in a.data.items():
            pb = b.coefficient(g.inverse())
            if pb.cap:
                total = total + pa.coeffs[0] * pb.coeffs[0]
        return total * Fraction(1, len(group))
    if space is Space.FJRW:
        for g, pa in a.data.items():
            pb = b.coefficient(g.inverse())
            if pb.cap:
                total = total + pa.coeffs[0] * pb.coeffs[0]
        return total * Fraction(1, len(group))
    if space is Space.PG:
        for g, pa in a.data.items():
            pb = b.coefficient(g.inverse())
            n = g.fixed_rank
            total = total + products(pa, pb, n - 1) * sector_norm(group, g)
        return total
    if space is Space.YPLUS:
        if not (a.narrow_part_only() and b.narrow_part_only()):
            raise ValueError("Y+ pairing defined on the narrow span only")
        for g, pa in a.data.items():
            pb = b.coefficient(g.inverse())
            n = g.fixed_rank
            # compact-support lift divides one Euler factor (-d H)
            total = total + products(pa, pb, n) * sector_norm(group, g) * Fraction(-1, model.degree)
        return total
    if space is Space.ZAMBIENT:
        for g, pa in a.data.items():
            pb = b.coefficient(g.inverse())
            n = g.fixed_rank
            total = total + products(pa, pb, n - 2) * sector_norm(group, g) * model.degree
        return total
    raise ValueError(space)


def pair_numeric(a: CRVector, b: CRVector, dps: int = 50):
    """Numeric pairing for vectors with mpmath coefficients (same rules)."""
    assert a.space is b.space
    space = a.space
    group = a.group
    model = group.model
    with mpmath.workdps(dps + 15):
        total = mpmath.mpc(0)

        def products(pa: NilPoly, pb: NilPoly, top: int):
            s = mpmath.mpc(0)
            for k1 in range(min(pa.cap, top + 1)):
                k2 = top - k1
                if 0 <= k2 < pb.cap:
                    s += to_mpc(pa.coeffs[k1], dps) * to_mpc(pb.coeffs[k2], dps)
            return s

        for g, pa in a.data.items():
            pb = b.coefficient(g.inverse())
            n = g.fixed_rank
            if space in (Space.YMINUS, Space.FJRW):
                if pb.cap:
                    total += to_mpc(pa.coeffs[0], dps) * to_mpc(pb.coeffs[0], dps)
            elif space is Space.PG:
                total += products(pa, pb, n - 1) * to_mpc(sector_norm(group, g), dps)
            elif space is Space.YPLUS:
                total += products(pa, pb, n) * to_mpc(sector_norm(group, g), dps) * (-1) / model.degree
            elif space is Space.ZAMBIENT:
                total += products(pa, pb, n - 2) * to_mpc(sector_norm(group, g), dps) * model.degree
        if space in (Space.FJRW, Space.YMINUS):
            total /= len(group)
        return total


def ambient_restrict(v: CRVector) -> CRVector:
    """j^*: PG classes to Z-ambient classes; kills the top H-power of every
    sector (and sectors that miss Z entirely)."""
    assert v.space is Space.PG
    out = CRVector(Space.ZAMBIENT, v.group)
    for g, p in v.data.items():
        cap = sector_cap(Space.ZAMBIENT, g)
        if cap > 0:
            out.add_to(g, p.retruncate(cap))
    return out


@dataclass(frozen=True)
class ModuliSelection:
    line_degrees: tuple[Fraction, ...]
    nonempty: bool
    concave: bool


def fjrw_bundle_degrees(group: SymmetryGroup, h: int, insertions) -> ModuliSelection:
    """Degrees of the rigidified W-structure bundles:
    deg |L_j| = c_j/d * (2h - 2 + n) - sum_i m_j(g_i)."""
    model = group.model
    n = len(insertions)
    if 2 * h - 2 + n < 0:
        raise ValueError("unstable: 2h - 2 + n < 0")
    degs = []
    for j in range(model.nvars):
        dj = Fraction(model.weights[j], model.degree) * (2 * h - 2 + n)
        dj -= sum((g.multiplicity(j) for g in insertions), Fraction(0))
        degs.append(dj)
    nonempty = all(dj.denominator == 1 for dj in degs)
    broad = sum(1 for g in insertions if not g.narrow)
    concave = h == 0 and broad <= 1 and all(dj < 0 for dj in degs)
    return ModuliSelection(tuple(degs), nonempty, concave)
