"""Subgroups of a Cayley-table group: closure, center, commutator subgroup, Frattini."""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .config import DEFAULT_LIMITS, Limits
from .errors import InconsistentResult, OrderCapExceeded
from .group import FiniteGroup, is_normal_members, restrict
from .numtheory import prime_power

# Below this order frattini() computes both routes and compares them.
FRATTINI_CROSS_CHECK_MAX = 128


class Subgroup:
    """A member set of ``parent`` closed under its operation.

    ``members`` is the sorted index array and ``mask`` its boolean mirror.
    """

    def __init__(self, parent: FiniteGroup, mask: np.ndarray):
        self.parent = parent
        self.mask = mask
        self.mask.flags.writeable = False
        self.members = np.flatnonzero(mask)
        self.members.flags.writeable = False
        assert parent.order % self.members.size == 0, "Lagrange violated"

    @classmethod
    def from_members(cls, parent: FiniteGroup, members: Iterable[int]) -> "Subgroup":
        mask = np.zeros(parent.order, dtype=bool)
        mask[list(members)] = True
        return cls(parent, mask)

    @property
    def order(self) -> int:
        return int(self.members.size)

    def __len__(self):
        return self.order

    def __contains__(self, x) -> bool:
        return bool(self.mask[x])

    def __iter__(self):
        return iter(self.members.tolist())

    @property
    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.parent!r}>"

    def issubset(self, other: "Subgroup") -> bool:
        return not (self.mask & ~other.mask).any()

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.mask & other.mask)

    @property
    def is_whole(self) -> bool:
        return self.order == self.parent.order

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def is_normal(self) -> bool:
        return is_normal_members(self.parent, self.members) is None

    def as_group(self, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
        return restrict(self.parent, self.members, limits)

    def to_list(self) -> list[int]:
        return self.members.tolist()


def extend_mask(g: FiniteGroup, mask: np.ndarray, members: np.ndarray, gens) -> np.ndarray:
    """Mask of <H, gens> where ``mask``/``members`` describe a subgroup H.

    The result is grown one left coset ``xH`` at a time, so the work is
    proportional to the index gained rather than to the group order.
    Repeated squares of the new generators are multiplied in as well; they
    lie in <H, gens>, and make a long cyclic walk take logarithmic steps.
    """
    table = g.table
    gens = np.unique(np.asarray(gens, dtype=np.int64))
    gens = gens[~mask[gens]]
    if gens.size == 0:
        return mask
    mask = mask.copy()
    frontier = members
    squares = gens
    doublings = g.order.bit_length()
    while True:
        prods = table[frontier[:, None], gens[None, :]].ravel()
        fresh = prods[~mask[prods]]
        if fresh.size == 0:
            return mask
        before = mask.copy()
        mask[table[fresh[:, None], members[None, :]].ravel()] = True
        frontier = np.flatnonzero(mask & ~before)
        if doublings:
            doublings -= 1
            squares = table[squares, squares]
            gens = np.concatenate([gens, squares])


def trivial_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup.from_members(g, [g.identity])


def whole_group(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, np.ones(g.order, dtype=bool))


def closure(g: FiniteGroup, seed: Iterable[int] = ()) -> Subgroup:
    """Smallest subgroup containing ``seed``."""
    base = np.zeros(g.order, dtype=bool)
    base[g.identity] = True
    seed = list(seed)
    if not seed:
        return Subgroup(g, base)
    return Subgroup(g, extend_mask(g, base, np.array([g.identity]), seed))


def join(h: Subgroup, extra: Iterable[int]) -> Subgroup:
    return Subgroup(h.parent, extend_mask(h.parent, h.mask, h.members, list(extra)))


def center(g: FiniteGroup) -> Subgroup:
    mask = (g.table == g.table.T).all(axis=1)
    return Subgroup(g, mask)


def centralizer(g: FiniteGroup, xs: Iterable[int]) -> Subgroup:
    xs = np.asarray(list(xs), dtype=np.int64)
    mask = (g.table[:, xs] == g.table[xs, :].T).all(axis=1)
    return Subgroup(g, mask)


def commutator_subgroup(g: FiniteGroup) -> Subgroup:
    return closure(g, np.unique(g.all_commutators()).tolist())


def normal_closure(g: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    seed = list(seed)
    h = closure(g, seed)
    while True:
        conj = np.unique(g.table[g.table[:, h.members], g.inverses[:, None]])
        if h.mask[conj].all():
            return h
        h = join(h, conj[~h.mask[conj]])


def cyclic_subgroups(g: FiniteGroup) -> list[tuple[int, Subgroup]]:
    """Distinct cyclic subgroups, each with the smallest index generating it."""
    seen = {}
    for x in range(g.order):
        h = closure(g, [x])
        seen.setdefault(h.key, (x, h))
    return list(seen.values())


def _check_subgroup_cap(g: FiniteGroup, limits: Limits) -> None:
    if g.order > limits.maximal_subgroup_cap:
        raise OrderCapExceeded(
            f"subgroup enumeration on order {g.order} exceeds cap {limits.maximal_subgroup_cap}"
        )


def all_subgroups(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> list[Subgroup]:
    """Every subgroup, built bottom-up from cyclic subgroups by repeated joins.

    Sorted by (order, members) so the output is deterministic.
    """
    _check_subgroup_cap(g, limits)
    cyclics = cyclic_subgroups(g)
    found = {h.key: h for _, h in cyclics}
    frontier = list(found.values())
    while frontier:
        fresh = []
        for h in frontier:
            for x, c in cyclics:
                if h.mask[x]:
                    continue
                k = join(h, [x])
                if k.key not in found:
                    found[k.key] = k
                    fresh.append(k)
        frontier = fresh
    return sorted(found.values(), key=lambda h: (h.order, h.to_list()))


def normal_subgroups(g: FiniteGroup) -> list[Subgroup]:
    """Every normal subgroup, as joins of normal closures of single elements."""
    basics = {}
    for x in range(g.order):
        n = normal_closure(g, [x])
        basics.setdefault(n.key, n)
    found = dict(basics)
    frontier = list(basics.values())
    atoms = list(basics.values())
    while frontier:
        fresh = []
        for h in frontier:
            for a in atoms:
                if a.issubset(h):
                    continue
                k = Subgroup(g, extend_mask(g, h.mask, h.members, a.members))
                if k.key not in found:
                    found[k.key] = k
                    fresh.append(k)
        frontier = fresh
    return sorted(found.values(), key=lambda h: (h.order, h.to_list()))


def maximal_subgroups(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> list[Subgroup]:
    """All maximal subgroups, sorted by (order, members).

    Branch-and-exclude search over the subgroup lattice: from a proper
    subgroup H, the distinct proper joins <H, x> are branched on in turn,
    and branch i forbids the elements that opened branches 0..i-1. Every
    maximal subgroup is reached exactly once, without materializing the
    whole lattice.
    """
    _check_subgroup_cap(g, limits)
    n = g.order
    if n == 1:
        return []
    table = g.table
    found = []

    def proper_joins(h_mask, h_members):
        covered = h_mask.copy()
        seen = set()
        out = []
        for x in range(n):
            if covered[x]:
                continue
            covered[table[x, h_members]] = True  # <H, xh> = <H, x>
            k = extend_mask(g, h_mask, h_members, [x])
            if k.all():
                continue
            key = np.packbits(k).tobytes()
            if key not in seen:
                seen.add(key)
                out.append((k, x))
        return out

    stack = [(trivial_subgroup(g).mask, [])]
    while stack:
        h_mask, excluded = stack.pop()
        joins = proper_joins(h_mask, np.flatnonzero(h_mask))
        if not joins:
            found.append(Subgroup(g, h_mask))
            continue
        branches = []
        for i, (k, _) in enumerate(joins):
            banned = excluded + [x for _, x in joins[:i]]
            if banned and k[banned].any():
                continue
            branches.append((k, banned))
        stack.extend(reversed(branches))
    return sorted(found, key=lambda h: (h.order, h.to_list()))


def _intersect_all(g: FiniteGroup, subgroups: list[Subgroup]) -> Subgroup:
    if not subgroups:
        return whole_group(g)
    mask = np.ones(g.order, dtype=bool)
    for h in subgroups:
        mask &= h.mask
    return Subgroup(g, mask)


def frattini_by_maximals(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> Subgroup:
    if g.order == 1:
        return trivial_subgroup(g)
    return _intersect_all(g, maximal_subgroups(g, limits))


def frattini_power_commutator(g: FiniteGroup, p: int) -> Subgroup:
    """<x^p, [x, y]> for a p-group, which is its Frattini subgroup."""
    seed = np.union1d(np.unique(g.powers(p)), np.unique(g.all_commutators()))
    return closure(g, seed.tolist())


def frattini(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS, cross_check: bool | None = None) -> Subgroup:
    """Frattini subgroup.

    p-groups use the power-commutator generators; when ``cross_check`` is
    set (default: order <= 128) the maximal-subgroup intersection is also
    computed and the two must agree. Other groups need the maximal
    subgroups and so are bounded by the subgroup-enumeration cap.
    """
    if g.order == 1:
        return trivial_subgroup(g)
    pk = prime_power(g.order)
    if pk is None:
        return frattini_by_maximals(g, limits)
    phi = frattini_power_commutator(g, pk[0])
    if cross_check is None:
        cross_check = g.order <= FRATTINI_CROSS_CHECK_MAX
    if cross_check:
        other = frattini_by_maximals(g, limits)
        if other != phi:
            raise InconsistentResult(
                f"Frattini routes disagree: power-commutator order {phi.order}, "
                f"maximal intersection order {other.order}"
            )
    return phi
