"""Finite groups as Cayley tables: invariants, ranks, presentations, and C-groups."""
from .alphac import AlphaCElement, AlphaCParams, alpha_c
from .config import DEFAULT_LIMITS, Limits
from .group import FiniteGroup, abelian_product, cyclic, dihedral, direct_product, from_table, quotient
from .isomorphism import is_isomorphic
from .presentation import Presentation, coset_enumerate, parse_presentation
from .rank import RankResult, rank, rank_of_center
from .search import InvariantReport, enumerate_alpha_c, invariant_report, is_c_group
from .series import derived_series, nilpotency_class, upper_central_series
from .subgroups import Subgroup, center, closure, commutator_subgroup, frattini, maximal_subgroups

__version__ = "0.1.0"

__all__ = [
    "AlphaCElement",
    "AlphaCParams",
    "alpha_c",
    "DEFAULT_LIMITS",
    "Limits",
    "FiniteGroup",
    "abelian_product",
    "cyclic",
    "dihedral",
    "direct_product",
    "from_table",
    "quotient",
    "is_isomorphic",
    "Presentation",
    "coset_enumerate",
    "parse_presentation",
    "RankResult",
    "rank",
    "rank_of_center",
    "InvariantReport",
    "enumerate_alpha_c",
    "invariant_report",
    "is_c_group",
    "derived_series",
    "nilpotency_class",
    "upper_central_series",
    "Subgroup",
    "center",
    "closure",
    "commutator_subgroup",
    "frattini",
    "maximal_subgroups",
]
