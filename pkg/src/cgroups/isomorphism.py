"""Isomorphism of small groups by backtracking over generator images."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULT_LIMITS, Limits
from .errors import InconsistentResult, OrderCapExceeded, OrderMismatch
from .group import FiniteGroup
from .rank import rank
from .series import derived_series, upper_central_series
from .subgroups import center, commutator_subgroup

NO_VALUE = -1  # fingerprint marker for "not nilpotent" / "not solvable"


class Fingerprint(NamedTuple):
    order: int
    element_orders: tuple[tuple[int, int], ...]
    center_order: int
    commutator_order: int
    nilpotency_class: int
    derived_length: int


def invariant_fingerprint(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> Fingerprint:
    ucs = upper_central_series(g, limits)
    ds = derived_series(g, limits)
    counts = Counter(int(o) for o in g.element_orders)
    return Fingerprint(
        g.order,
        tuple(sorted(counts.items())),
        center(g).order,
        commutator_subgroup(g).order,
        ucs.length if ucs.terminated else NO_VALUE,
        ds.length if ds.terminated else NO_VALUE,
    )


def fingerprint_obstruction(fa: Fingerprint, fb: Fingerprint) -> dict | None:
    for name in Fingerprint._fields:
        a, b = getattr(fa, name), getattr(fb, name)
        if a != b:
            return {"invariant": name, "left": a, "right": b}
    return None


@dataclass
class IsoResult:
    isomorphic: bool
    map: list[int] | None = None
    obstruction: dict | None = None

    def to_dict(self) -> dict:
        return {"isomorphic": self.isomorphic, "map": self.map, "obstruction": self.obstruction}


def is_homomorphism(g: FiniteGroup, h: FiniteGroup, phi) -> bool:
    phi = np.asarray(phi)
    return bool(np.array_equal(phi[g.table], h.table[phi[:, None], phi[None, :]]))


def _extend(g, h, gens, images, upto):
    """Map on <gens[:upto]> sending gens[i] to images[i], or None if inconsistent.

    Walks the Cayley graph from e; every edge x -> x s_j must land on
    phi(x) t_j, and distinct elements must get distinct images.
    """
    n = g.order
    phi = np.full(n, -1, dtype=np.int64)
    used = np.zeros(h.order, dtype=bool)
    phi[g.identity] = h.identity
    used[h.identity] = True
    queue = [g.identity]
    gt, ht = g.table, h.table
    for x in queue:
        px = phi[x]
        for s, t in zip(gens[:upto], images[:upto]):
            y = gt[x, s]
            target = ht[px, t]
            if phi[y] >= 0:
                if phi[y] != target:
                    return None
            else:
                if used[target]:
                    return None
                phi[y] = target
                used[target] = True
                queue.append(int(y))
    return phi


def is_isomorphic(g: FiniteGroup, h: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> IsoResult:
    """Decide G ~ H; on success the map is an explicit verified isomorphism.

    Generators of G come from a minimal generating set; each is sent to an
    element of H with the same order and the same centrality, tried in
    ascending index order.
    """
    if g.order != h.order:
        raise OrderMismatch(f"orders differ: {g.order} vs {h.order}")
    if g.order > limits.iso_cap:
        raise OrderCapExceeded(f"isomorphism test on order {g.order} exceeds cap {limits.iso_cap}")
    obstruction = fingerprint_obstruction(invariant_fingerprint(g, limits), invariant_fingerprint(h, limits))
    if obstruction:
        return IsoResult(False, None, obstruction)

    gens = list(rank(g, limits).witness)
    if not gens:
        return IsoResult(True, [h.identity])
    g_central, h_central = center(g).mask, center(h).mask
    h_orders = h.element_orders
    candidates = [
        [y for y in range(h.order) if h_orders[y] == g.element_orders[s] and h_central[y] == g_central[s]]
        for s in gens
    ]

    images: list[int] = []

    def search(i):
        if i == len(gens):
            return _extend(g, h, gens, images, i)
        for y in candidates[i]:
            images.append(y)
            if _extend(g, h, gens, images, i + 1) is not None:
                found = search(i + 1)
                if found is not None:
                    return found
            images.pop()
        return None

    phi = search(0)
    if phi is None:
        return IsoResult(False, None, {"invariant": "exhaustive search", "left": None, "right": None})
    if (phi < 0).any() or not is_homomorphism(g, h, phi):
        raise InconsistentResult("backtracking produced a map that is not an isomorphism")
    return IsoResult(True, phi.tolist())
