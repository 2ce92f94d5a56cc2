"""Upper central and derived series, and the predicates built on them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_LIMITS, Limits
from .errors import NotAbelian
from .group import FiniteGroup, quotient
from .numtheory import exact_log, prime_factors, prime_power
from .subgroups import Subgroup, center, commutator_subgroup

NOT_NILPOTENT = "not nilpotent"


@dataclass
class SeriesReport:
    kind: str  # "upper-central" or "derived"
    subgroup_orders: list[int]
    terminated: bool
    length: int
    terms: list[Subgroup] = field(default_factory=list, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "subgroup_orders": self.subgroup_orders,
            "terminated": self.terminated,
            "length": self.length,
        }


def upper_central_series(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> SeriesReport:
    """Z_1 <= Z_2 <= ... where Z_i is the preimage of Z(G/Z_{i-1}).

    Stops when a term repeats. ``terminated`` means the last term is G,
    and then ``length`` is the nilpotency class. The trivial group has
    class 0 and an empty series.
    """
    if g.order == 1:
        return SeriesReport("upper-central", [], True, 0, [])
    terms = []
    current = center(g)
    while True:
        terms.append(current)
        if current.is_whole:
            break
        q, projection = quotient(g, current, limits)
        upper = center(q).mask[projection]
        if upper.sum() == current.order:
            break
        current = Subgroup(g, upper)
    terminated = terms[-1].is_whole
    orders = [t.order for t in terms]
    return SeriesReport("upper-central", orders, terminated, len(terms) if terminated else 0, terms)


def nilpotency_class(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS):
    """Class as an int, or the string ``"not nilpotent"``."""
    series = upper_central_series(g, limits)
    return series.length if series.terminated else NOT_NILPOTENT


def derived_series(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> SeriesReport:
    """G' >= G'' >= ... until a term repeats; solvable iff it reaches {e}.

    Terms are computed on materialized subgroups and pulled back to ``g``.
    """
    if g.order == 1:
        return SeriesReport("derived", [], True, 0, [])
    terms = []
    current_group = g
    current_members = np.arange(g.order)
    previous_order = g.order
    while True:
        d = commutator_subgroup(current_group)
        if d.order == previous_order:
            break
        members = current_members[d.members]
        terms.append(Subgroup.from_members(g, members))
        if d.order == 1:
            break
        current_group = d.as_group(limits)
        current_members = members
        previous_order = d.order
    terminated = bool(terms) and terms[-1].order == 1
    orders = [t.order for t in terms]
    if not terms:  # perfect group
        orders = [g.order]
        terms = [Subgroup(g, np.ones(g.order, dtype=bool))]
    return SeriesReport("derived", orders, terminated, len(terms) if terminated else 0, terms)


def is_solvable(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> bool:
    return derived_series(g, limits).terminated


def is_p_group(g: FiniteGroup) -> int | None:
    """The prime p when |G| is a power of p; None otherwise (including |G| = 1)."""
    pk = prime_power(g.order)
    return pk[0] if pk else None


def is_elementary_abelian(g: FiniteGroup) -> tuple[int, int] | None:
    """``(p, n)`` when G is isomorphic to (Z_p)^n, else None."""
    p = is_p_group(g)
    if p is None or not g.is_abelian:
        return None
    if (g.element_orders[np.arange(g.order) != g.identity] != p).any():
        return None
    return p, exact_log(g.order, p)


def abelian_rank(g: FiniteGroup) -> int:
    """Minimal number of generators of an abelian group.

    For each prime p dividing |G| the p-torsion {x : x^p = e} is elementary
    abelian of dimension equal to the number of invariant factors divisible
    by p; the rank is the largest such dimension.
    """
    if not g.is_abelian:
        raise NotAbelian("abelian_rank needs an abelian group", g.noncommuting_pair())
    best = 0
    for p in prime_factors(g.order):
        torsion = int((g.powers(p) == g.identity).sum())
        best = max(best, exact_log(torsion, p))
    return best
