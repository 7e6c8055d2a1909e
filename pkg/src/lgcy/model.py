"""Fermat Landau-Ginzburg pairs: weights, degree, diagonal symmetry groups.

A model is the Fermat potential w = sum_j x_j^(d/c_j) together with an
admissible diagonal symmetry group G containing the grading element j.
Group elements are stored as integer exponent vectors (a_1, ..., a_N) with
0 <= a_j < d/c_j, acting on the j-th coordinate by exp(2*pi*i a_j c_j / d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

GROUP_SIZE_CAP = 10**6


@dataclass(frozen=True)
class LGModel:
    weights: tuple[int, ...]
    degree: int

    def __post_init__(self):
        if self.degree < 1 or any(c < 1 for c in self.weights):
            raise ValueError("weights and degree must be positive")
        for c in self.weights:
            if self.degree % c != 0:
                raise ValueError(
                    f"weight {c} does not divide degree {self.degree}: not a Fermat model"
                )

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @property
    def charges(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.degree) for c in self.weights)

    @property
    def exponents(self) -> tuple[int, ...]:
        """Fermat exponents d/c_j (also the coordinate orders of G_max)."""
        return tuple(self.degree // c for c in self.weights)

    @property
    def quasi_cy(self) -> bool:
        return sum(self.weights) == self.degree

    @cached_property
    def cyclotomic_order(self) -> int:
        """Common root-of-unity order for all sector values and characters."""
        return math.lcm(self.degree, *self.exponents)

    def element(self, exps) -> "GroupElement":
        return GroupElement(self, tuple(int(a) % n for a, n in zip(exps, self.exponents)))

    def identity(self) -> "GroupElement":
        return self.element((0,) * self.nvars)

    def grading_element(self) -> "GroupElement":
        """j = (e^(2 pi i q_1), ..., e^(2 pi i q_N))."""
        return self.element((1,) * self.nvars)

    def __str__(self):
        return f"LG(c={list(self.weights)}, d={self.degree})"


@dataclass(frozen=True)
class GroupElement:
    model: LGModel
    exponents: tuple[int, ...]

    def multiplicity(self, j: int) -> Fraction:
        return Fraction(self.exponents[j] * self.model.weights[j], self.model.degree)

    @property
    def multiplicities(self) -> tuple[Fraction, ...]:
        return tuple(self.multiplicity(j) for j in range(self.model.nvars))

    @property
    def fixed_coords(self) -> tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.exponents) if a == 0)

    @property
    def fixed_rank(self) -> int:
        return sum(1 for a in self.exponents if a == 0)

    @property
    def narrow(self) -> bool:
        return all(a != 0 for a in self.exponents)

    @property
    def age(self) -> Fraction:
        return sum(self.multiplicities, Fraction(0))

    def age_moving(self) -> Fraction:
        """Age restricted to non-fixed coordinates (base age on P(G) sectors)."""
        return sum((m for m in self.multiplicities if m != 0), Fraction(0))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.model.element(
            tuple(a + b for a, b in zip(self.exponents, other.exponents))
        )

    def inverse(self) -> "GroupElement":
        return self.model.element(tuple(-a for a in self.exponents))

    def __pow__(self, n: int) -> "GroupElement":
        return self.model.element(tuple(a * n for a in self.exponents))

    def order(self) -> int:
        return math.lcm(*(n // math.gcd(n, a) if a else 1
                          for a, n in zip(self.exponents, self.model.exponents)))

    def is_identity(self) -> bool:
        return all(a == 0 for a in self.exponents)

    def __repr__(self):
        return f"g{list(self.exponents)}"


@dataclass(frozen=True)
class Classification:
    narrow: bool
    fixed_rank: int
    age: Fraction
    det_twist: Fraction


def classify(g: GroupElement) -> Classification:
    age = g.age
    return Classification(
        narrow=g.narrow,
        fixed_rank=g.fixed_rank,
        age=age,
        det_twist=age - int(age) if age >= 0 else age - math.floor(age),
    )


class SymmetryGroup:
    """An admissible subgroup G with the canonical splitting <j> + Gbar,
    Gbar acting trivially on the first coordinate."""

    def __init__(self, model: LGModel, elements: list[GroupElement]):
        self.model = model
        self.elements = sorted(elements, key=lambda g: g.exponents)
        self._index = {g.exponents: i for i, g in enumerate(self.elements)}
        self.j = model.grading_element()
        if self.j.exponents not in self._index:
            raise ValueError("group is not admissible: grading element j missing")
        self._compute_splitting()

    # -- container protocol ---------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: GroupElement):
        return g.exponents in self._index

    # -- splitting -------------------------------------------------------------

    def _compute_splitting(self):
        d_j = self.j.order()
        if d_j != self.model.degree:
            # happens only when gcd(c_1..c_N) > 1; the character lattice of
            # <j> would no longer be Z_d and the window bookkeeping breaks
            raise ValueError(
                f"grading element has order {d_j} != degree {self.model.degree}; "
                "models with gcd of weights > 1 are not supported"
            )
        self.j_order = d_j
        self.gbar = [g for g in self.elements if g.exponents[0] == 0]
        # direct-sum check: every g is uniquely j^m * gbar
        split: dict[tuple[int, ...], tuple[int, GroupElement]] = {}
        jp = self.model.identity()
        for m in range(d_j):
            for h in self.gbar:
                g = jp * h
                if g.exponents in split:
                    raise ValueError(
                        "splitting failure: <j> and the coordinate-1-trivial "
                        "subgroup do not give a direct sum"
                    )
                split[g.exponents] = (m, h)
            jp = jp * self.j
        if len(split) != len(self.elements):
            raise ValueError(
                "splitting failure: no complement trivial on the first coordinate"
            )
        self._split = split

    def split(self, g: GroupElement) -> tuple[int, GroupElement]:
        """g = j^m * gbar with gbar trivial on coordinate 1."""
        return self._split[g.exponents]

    # -- derived data -----------------------------------------------------------

    @property
    def narrow_elements(self) -> list[GroupElement]:
        return [g for g in self.elements if g.narrow]

    @property
    def sector_elements(self) -> list[GroupElement]:
        """Elements with nonempty fixed locus in P(G) (n_g > 0)."""
        return [g for g in self.elements if g.fixed_rank > 0]

    def structural_predicates(self) -> dict:
        model = self.model
        quasi_cy = model.quasi_cy
        in_sl = all(g.age.denominator == 1 for g in self.elements)
        convex = self._convex_od()
        return {"quasi_CY": quasi_cy, "in_SL": in_sl, "convex_Od": convex}

    def _convex_od(self) -> bool:
        """O(d) on P(G) is pulled back from the coarse space: every isotropy
        element of every stratum acts trivially on the O(d)-character.

        Strata isotropy on the j-th coordinate axis consists of pairs
        (alpha, gbar) with alpha^(c_j) gbar_j = 1; the action on O(d) is by
        alpha^d.  With c_j | d and gbar_j a root of unity of order dividing d
        this is automatic; checked explicitly to guard exotic inputs.
        """
        d = self.model.degree
        for jcoord, c in enumerate(self.model.weights):
            if d % c != 0:
                return False
            for h in self.gbar:
                # solutions alpha of alpha^c = hbar_j^(-1) are
                # exp(2 pi i (-m_j(h) + t)/c); alpha^d = exp(2 pi i d(-m_j+t)/c)
                m = h.multiplicity(jcoord)
                for t in range(c):
                    val = Fraction(d, c) * (t - m)
                    if val.denominator != 1:
                        return False
        # the O(d)-character (d, trivial) evaluates trivially on every sector
        # representative (xi_d^m, gbar): value xi_d^(m*d) * triv(gbar) = 1
        for g in self.sector_elements:
            mpart, _ = self.split(g)
            if (mpart * d) % d != 0:
                return False
        return True

    def __repr__(self):
        return f"SymmetryGroup(|G|={len(self)}, |Gbar|={len(self.gbar)}, {self.model})"


def gmax(model: LGModel) -> SymmetryGroup:
    """The full group of diagonal symmetries, size prod d/c_j."""
    size = math.prod(model.exponents)
    if size > GROUP_SIZE_CAP:
        raise ValueError(f"G_max size {size} exceeds cap {GROUP_SIZE_CAP}")
    elements = []
    idx = [0] * model.nvars
    orders = model.exponents
    while True:
        elements.append(model.element(tuple(idx)))
        k = 0
        while k < model.nvars:
            idx[k] += 1
            if idx[k] < orders[k]:
                break
            idx[k] = 0
            k += 1
        if k == model.nvars:
            break
    return SymmetryGroup(model, elements)


def subgroup_closure(model: LGModel, generators) -> SymmetryGroup:
    """Smallest admissible subgroup containing the generators and j."""
    gens = [model.element(g) if not isinstance(g, GroupElement) else g
            for g in generators]
    gens.append(model.grading_element())
    seen = {model.identity().exponents: model.identity()}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = g * h
                if p.exponents not in seen:
                    if len(seen) >= GROUP_SIZE_CAP:
                        raise ValueError("subgroup closure exceeds size cap")
                    seen[p.exponents] = p
                    nxt.append(p)
        frontier = nxt
    return SymmetryGroup(model, list(seen.values()))
