"""Dense Cayley-table groups and their generic constructors."""
from __future__ import annotations

import json
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_LIMITS, Limits
from .errors import NotAGroup, NotNormal, OrderCapExceeded

INDEX_DTYPE = np.int32


class FiniteGroup:
    """A finite group stored as its full multiplication table.

    ``table[i, j]`` is the index of the product of elements ``i`` and ``j``.
    Instances are treated as immutable: the table array is made read-only,
    and derived data (inverses, element orders) is cached on first use.
    Build instances through :func:`from_table` or one of the constructors
    below, which all validate the group axioms.
    """

    def __init__(self, table: np.ndarray, identity: int, labels=None, provenance=None):
        self.table = table
        self.table.flags.writeable = False
        self.identity = int(identity)
        self.labels = list(labels) if labels is not None else None
        self.provenance = dict(provenance or {})

    def __len__(self):
        return self.table.shape[0]

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __repr__(self):
        kind = self.provenance.get("kind", "table")
        return f"<FiniteGroup order={self.order} kind={kind}>"

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmax(self.table == self.identity, axis=1).astype(INDEX_DTYPE)
        inv.flags.writeable = False
        return inv

    def inverse(self, i: int) -> int:
        return int(self.inverses[i])

    def powers(self, k: int) -> np.ndarray:
        """``x**k`` for every element ``x`` at once (square and multiply)."""
        n = self.order
        idx = np.arange(n)
        base = idx.copy()
        if k < 0:
            base = self.inverses.astype(np.int64)
            k = -k
        result = np.full(n, self.identity)
        while k:
            if k & 1:
                result = self.table[result, base]
            base = self.table[base, base]
            k >>= 1
        return result

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse(x), -k
        result, base = self.identity, x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        current = idx.copy()
        for step in range(1, n + 1):
            hit = (current == self.identity) & (orders == 0)
            orders[hit] = step
            if orders.all():
                break
            current = self.table[current, idx]
        orders.flags.writeable = False
        return orders

    def commutator(self, x: int, y: int) -> int:
        """``x y x^-1 y^-1``."""
        t, inv = self.table, self.inverses
        return int(t[t[t[x, y], inv[x]], inv[y]])

    def all_commutators(self) -> np.ndarray:
        t, inv = self.table, self.inverses
        xy = t  # xy[x, y]
        step = t[xy, inv[:, None]]
        return t[step, inv[None, :]]

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def noncommuting_pair(self):
        diff = np.argwhere(self.table != self.table.T)
        if diff.size == 0:
            return None
        i, j = diff[0]
        return int(i), int(j)

    # -- interchange -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "identity": self.identity,
            "table": self.table.tolist(),
            "labels": self.labels,
            "provenance": self.provenance,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    def save(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n")


def _check_cap(order: int, limits: Limits) -> None:
    if order > limits.order_cap:
        raise OrderCapExceeded(f"group order {order} exceeds order cap {limits.order_cap}")


def _associativity_violation(table: np.ndarray, rows: np.ndarray):
    """First (i, j, k) among rows ``i`` where ``(ij)k != i(jk)``, else None."""
    left = table[table[rows]]  # [b, j, k] = (i j) k
    right = table[rows][:, table]  # [b, j, k] = i (j k)
    bad = np.argwhere(left != right)
    if bad.size == 0:
        return None
    b, j, k = bad[0]
    return int(rows[b]), int(j), int(k)


def associativity_violation_bruteforce(table: np.ndarray):
    """Scan all n^3 triples; return the first non-associative one or None."""
    n = table.shape[0]
    block = max(1, (1 << 22) // max(1, n * n))
    for start in range(0, n, block):
        bad = _associativity_violation(table, np.arange(start, min(n, start + block)))
        if bad:
            return bad
    return None


def _magma_generators(table: np.ndarray) -> list[int]:
    """Greedy set whose closure under the (possibly non-associative) product is everything."""
    n = table.shape[0]
    inside = np.zeros(n, dtype=bool)
    gens = []
    while not inside.all():
        x = int(np.flatnonzero(~inside)[0])
        gens.append(x)
        inside[x] = True
        members = np.flatnonzero(inside)
        fresh = members
        while fresh.size:
            prods = np.concatenate(
                [table[fresh[:, None], members[None, :]].ravel(), table[members[:, None], fresh[None, :]].ravel()]
            )
            prods = np.unique(prods)
            fresh = prods[~inside[prods]]
            inside[fresh] = True
            members = np.flatnonzero(inside)
    return gens


def associativity_violation_light(table: np.ndarray):
    """Light's test: associativity holds iff (x a) y = x (a y) for a in a generating set.

    The set of such ``a`` is closed under the product, so checking a
    generating set of the magma suffices; cost O(n^2 |gens|).
    """
    for a in _magma_generators(table):
        left = table[table[:, a]]  # [x, y] = (x a) y
        right = table[:, table[a]]  # [x, y] = x (a y)
        bad = np.argwhere(left != right)
        if bad.size:
            x, y = bad[0]
            return int(x), int(a), int(y)
    return None


def check_associativity(table: np.ndarray) -> str:
    """Raise NotAGroup on a non-associative triple; return the check level used.

    Light's test is exact and O(n^2 log n) for groups, so every order gets a
    complete check.
    """
    bad = associativity_violation_light(table)
    if bad:
        raise NotAGroup("associativity fails at triple (%d, %d, %d)" % bad)
    return "exhaustive:light"


def from_table(table, labels=None, provenance=None, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    """Validate a multiplication table and wrap it as a FiniteGroup."""
    try:
        arr = np.array(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotAGroup(f"table is not an integer array: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotAGroup(f"table must be a nonempty square array, got shape {arr.shape}")
    n = arr.shape[0]
    _check_cap(n, limits)
    if arr.min() < 0 or arr.max() >= n:
        raise NotAGroup("table entries must lie in 0..n-1")
    arr = arr.astype(INDEX_DTYPE)
    idx = np.arange(n)

    rows_sorted = np.sort(arr, axis=1)
    bad_rows = np.flatnonzero((rows_sorted != idx).any(axis=1))
    if bad_rows.size:
        raise NotAGroup(f"row {bad_rows[0]} is not a permutation")
    cols_sorted = np.sort(arr, axis=0)
    bad_cols = np.flatnonzero((cols_sorted != idx[:, None]).any(axis=0))
    if bad_cols.size:
        raise NotAGroup(f"column {bad_cols[0]} is not a permutation")

    candidates = np.flatnonzero((arr == idx).all(axis=1))
    identity = None
    for e in candidates:
        if np.array_equal(arr[:, e], idx):
            identity = int(e)
            break
    if identity is None:
        raise NotAGroup("no identity element")

    level = check_associativity(arr)
    if labels is not None and len(labels) != n:
        raise NotAGroup(f"expected {n} labels, got {len(labels)}")
    prov = dict(provenance or {"kind": "table"})
    prov.setdefault("kind", "table")
    prov["associativity"] = level
    return FiniteGroup(arr, identity, labels, prov)


def from_dict(data: dict, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    try:
        table = data["table"]
    except (KeyError, TypeError):
        raise NotAGroup("group file has no 'table'") from None
    g = from_table(table, data.get("labels"), data.get("provenance"), limits)
    if "order" in data and data["order"] != g.order:
        raise NotAGroup(f"declared order {data['order']} does not match table size {g.order}")
    if "identity" in data and data["identity"] != g.identity:
        raise NotAGroup(f"declared identity {data['identity']} is not the identity")
    return g


def load(path, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise NotAGroup(f"{path}: invalid JSON ({exc})") from None
    return from_dict(data, limits)


# -- constructors -----------------------------------------------------------


def cyclic(n: int, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    _check_cap(n, limits)
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return from_table(table, [str(i) for i in range(n)], {"kind": "cyclic", "n": n}, limits)


def _mixed_radix(ns: Sequence[int]):
    """Digit arrays (first digit fastest) for every index of the product."""
    total = int(np.prod(ns))
    idx = np.arange(total)
    digits = []
    for m in ns:
        digits.append(idx % m)
        idx = idx // m
    return digits


def abelian_product(ns: Sequence[int], limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    """Z_{n_1} x ... x Z_{n_k} with the tuple stored in mixed radix, first factor fastest."""
    ns = [int(m) for m in ns]
    if not ns or any(m < 1 for m in ns):
        raise ValueError("abelian_product needs a nonempty list of positive integers")
    total = 1
    for m in ns:
        total *= m
    _check_cap(total, limits)
    digits = _mixed_radix(ns)
    table = np.zeros((total, total), dtype=np.int64)
    weight = 1
    for m, d in zip(ns, digits):
        table += ((d[:, None] + d[None, :]) % m) * weight
        weight *= m
    labels = ["(" + ",".join(str(int(d[i])) for d in digits) + ")" for i in range(total)]
    return from_table(table, labels, {"kind": "abelian-product", "ns": ns}, limits)


def dihedral(n: int, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; element ``s*n + k`` is ``r^k s^s``."""
    if n < 1:
        raise ValueError("dihedral needs n >= 1")
    _check_cap(2 * n, limits)
    idx = np.arange(2 * n)
    k, s = idx % n, idx // n
    # r^k1 s^s1 r^k2 s^s2 = r^(k1 + (-1)^s1 k2) s^(s1+s2)
    sign = np.where(s == 0, 1, -1)
    kk = (k[:, None] + sign[:, None] * k[None, :]) % n
    ss = (s[:, None] + s[None, :]) % 2
    table = ss * n + kk
    labels = [f"r^{k[i]}" + ("s" if s[i] else "") for i in idx]
    return from_table(table, labels, {"kind": "table", "family": "dihedral", "n": n}, limits)


def direct_product(g: FiniteGroup, h: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    """G x H with pair (i, j) stored at index ``i * |H| + j``."""
    m, n = g.order, h.order
    _check_cap(m * n, limits)
    gi = np.repeat(np.arange(m), n)
    hi = np.tile(np.arange(n), m)
    table = g.table[gi[:, None], gi[None, :]].astype(np.int64) * n + h.table[hi[:, None], hi[None, :]]
    labels = None
    if g.labels is not None and h.labels is not None:
        labels = [f"({g.labels[a]},{h.labels[b]})" for a, b in zip(gi, hi)]
    prov = {"kind": "direct-product", "factors": [g.provenance, h.provenance]}
    return from_table(table, labels, prov, limits)


def is_normal_members(g: FiniteGroup, members: np.ndarray):
    """Return a conjugating witness ``x`` with ``x N x^-1 != N``, or None."""
    mask = np.zeros(g.order, dtype=bool)
    mask[members] = True
    conj = g.table[g.table[:, members], g.inverses[:, None]]
    bad = np.flatnonzero(~mask[conj].all(axis=1))
    return int(bad[0]) if bad.size else None


def quotient(g: FiniteGroup, n, limits: Limits = DEFAULT_LIMITS):
    """G/N on left cosets, ordered by their smallest member.

    Returns ``(quotient_group, projection)`` where ``projection[x]`` is the
    coset index of element ``x``.
    """
    members = np.asarray(getattr(n, "members", n), dtype=np.int64)
    witness = is_normal_members(g, members)
    if witness is not None:
        raise NotNormal(f"subgroup is not normal: conjugation by {witness} moves it", witness)
    order = g.order
    projection = np.full(order, -1, dtype=np.int64)
    reps = []
    for x in range(order):
        if projection[x] < 0:
            projection[g.table[x, members]] = len(reps)
            reps.append(x)
    reps = np.array(reps)
    table = projection[g.table[reps[:, None], reps[None, :]]]
    labels = None
    if g.labels is not None:
        labels = [g.labels[r] + "N" for r in reps]
    prov = {"kind": "quotient", "parent": g.provenance.get("kind"), "normal_order": int(members.size)}
    projection.flags.writeable = False
    return from_table(table, labels, prov, limits), projection


def restrict(g: FiniteGroup, members: Iterable[int], limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    """Materialize a subgroup as a standalone group, relabelled 0..|H|-1 in index order."""
    members = np.array(sorted(int(m) for m in members))
    lookup = np.full(g.order, -1, dtype=np.int64)
    lookup[members] = np.arange(members.size)
    table = lookup[g.table[members[:, None], members[None, :]]]
    if (table < 0).any():
        raise NotAGroup("member set is not closed under the operation")
    labels = [g.label(int(m)) for m in members]
    prov = {"kind": "table", "subgroup_of": g.provenance.get("kind"), "members": members.tolist()}
    return from_table(table, labels, prov, limits)
