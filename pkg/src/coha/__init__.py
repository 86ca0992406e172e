"""Exact symbolic engine for quiver shuffle algebras.

Star products over formal group laws, the extended algebra and its
comultiplication, residue pairings and the Drinfeld-double commutator,
with machine checks of the structural identities on small quivers.
"""

from .config import DEFAULT_ORDER, SIGMA_PAIR, SIGMA_RES
from .fgl import FormalGroupLaw, LinearForm, additive, connective_k, series_law
from .poly import Polynomial
from .quiver import DimVector, Quiver
from .ratfun import RationalFunction, normalize
from .series import TruncatedSeries, expand_at, residue_at_infinity
from .shuffle import ShuffleElement, fac_pair, spherical_generate, star_component, symmetrize

__all__ = [
    "DEFAULT_ORDER", "SIGMA_PAIR", "SIGMA_RES",
    "FormalGroupLaw", "LinearForm", "additive", "connective_k", "series_law",
    "Polynomial", "DimVector", "Quiver", "RationalFunction", "normalize",
    "TruncatedSeries", "expand_at", "residue_at_infinity",
    "ShuffleElement", "fac_pair", "spherical_generate", "star_component",
    "symmetrize",
]
