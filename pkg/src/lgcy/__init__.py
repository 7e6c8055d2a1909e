"""Exact verification of the LG/CY square for Fermat Landau-Ginzburg pairs."""

__version__ = "0.1.0"

from .model import LGModel, GroupElement, SymmetryGroup, gmax, subgroup_closure, classify
from .statespace import Space, BasisElt, CRVector, basis, narrow_basis, pair
from .ktheory import GammaCharacter, KClass, WindowSpec, floor_char, vgit_l, orlov_l, chi
from .chern import orb_ch, gamma_class, flat_frame, lattice_rank
from .transforms import delta_minus, delta_plus, u_bar_l
from .ifunctions import i_minus_series, i_plus_series, modification_factor

__all__ = [
    "LGModel", "GroupElement", "SymmetryGroup", "gmax", "subgroup_closure", "classify",
    "Space", "BasisElt", "CRVector", "basis", "narrow_basis", "pair",
    "GammaCharacter", "KClass", "WindowSpec", "floor_char", "vgit_l", "orlov_l", "chi",
    "orb_ch", "gamma_class", "flat_frame", "lattice_rank",
    "delta_minus", "delta_plus", "u_bar_l",
    "i_minus_series", "i_plus_series", "modification_factor",
]
