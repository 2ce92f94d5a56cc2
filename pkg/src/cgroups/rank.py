"""rk(G): the size of a smallest generating set."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_LIMITS, Limits
from .errors import InconsistentResult, SearchCapExceeded
from .group import FiniteGroup
from .numtheory import exact_log, prime_factors
from .series import abelian_rank, is_p_group
from .subgroups import Subgroup, center, closure, extend_mask, frattini_power_commutator, join

BRUTE_FORCE = "brute-force"
BURNSIDE = "burnside"
ABELIAN = "abelian"


@dataclass
class RankResult:
    rank: int
    witness: tuple[int, ...]
    method: str
    certificate: str

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "witness": list(self.witness),
            "method": self.method,
            "certificate": self.certificate,
        }


def _search_order(g: FiniteGroup) -> list[int]:
    # high-order elements first: they tend to generate more
    orders = g.element_orders
    idx = [x for x in range(g.order) if x != g.identity]
    return sorted(idx, key=lambda x: (-int(orders[x]), x))


def brute_force_rank(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> RankResult:
    """Exhaustive increasing-k search.

    Level k holds every distinct subgroup generated by k elements, with one
    generating tuple each. Level k+1 joins each of them with one element per
    left coset xH (``<H, x> = <H, xh>``), skipping elements already inside.
    The first level containing G gives the rank, and every subgroup on the
    levels below has been checked and found proper.
    """
    n = g.order
    if n == 1:
        return RankResult(0, (), BRUTE_FORCE, "trivial group")
    table = g.table
    candidates = _search_order(g)
    trivial = np.zeros(n, dtype=bool)
    trivial[g.identity] = True
    level = [(trivial, ())]
    examined = 0
    for k in range(1, limits.rank_k_cap + 1):
        seen = set()
        nxt = []
        for h_mask, gens in level:
            h_members = np.flatnonzero(h_mask)
            covered = h_mask.copy()
            for x in candidates:
                if covered[x]:
                    continue
                covered[table[x, h_members]] = True
                examined += 1
                k_mask = extend_mask(g, h_mask, h_members, [x])
                if k_mask.all():
                    cert = f"exhaustive: {examined} joins, no generating set of size {k - 1}"
                    return RankResult(k, gens + (x,), BRUTE_FORCE, cert)
                key = np.packbits(k_mask).tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append((k_mask, gens + (x,)))
        level = nxt
    raise SearchCapExceeded(f"rank exceeds search cap k={limits.rank_k_cap}")


def _greedy_basis(g: FiniteGroup, base: Subgroup, target: Subgroup) -> list[int]:
    """Grow ``base`` to ``target`` one element at a time, largest element order first."""
    chosen = []
    h = base
    orders = g.element_orders
    while h.order < target.order:
        outside = target.members[~h.mask[target.members]]
        x = int(outside[np.lexsort((outside, -orders[outside]))[0]])
        chosen.append(x)
        h = join(h, [x])
    return chosen


def _abelian_witness(g: FiniteGroup) -> list[int]:
    """Generators of an abelian group, one combined element per slot across Sylow parts."""
    per_prime = []
    orders = g.element_orders
    for p in prime_factors(g.order):
        pmask = np.array([_is_power_of(int(o), p) for o in orders])
        sylow = Subgroup(g, pmask)
        # for abelian P, Phi(P) = P^p
        phi = closure(g, np.unique(g.powers(p)[sylow.members]).tolist())
        per_prime.append(_greedy_basis(g, phi, sylow))
    width = max((len(b) for b in per_prime), default=0)
    witness = []
    for i in range(width):
        x = g.identity
        for basis in per_prime:
            if i < len(basis):
                x = g.mul(x, basis[i])
        witness.append(x)
    return witness


def _is_power_of(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


def rank(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS, method: str | None = None) -> RankResult:
    """Minimal generating set size with a witness.

    Shortcuts in order: trivial, cyclic, abelian (p-torsion count),
    p-group (|G/Phi(G)| = p^rank). The p-group route is cross-checked
    against brute force when |G| <= ``limits.rank_certify_cap``. Pass
    ``method="brute-force"`` to skip the shortcuts.
    """
    if method == BRUTE_FORCE:
        result = brute_force_rank(g, limits)
    elif method not in (None, "auto"):
        raise ValueError(f"unknown rank method {method!r}")
    elif g.order == 1:
        result = RankResult(0, (), BRUTE_FORCE, "trivial group")
    elif (g.element_orders == g.order).any():
        x = int(np.flatnonzero(g.element_orders == g.order)[0])
        result = RankResult(1, (x,), BRUTE_FORCE, "exhaustive: cyclic, element of full order")
    elif g.is_abelian:
        r = abelian_rank(g)
        witness = _abelian_witness(g)
        if len(witness) != r:
            raise InconsistentResult(f"abelian witness size {len(witness)} != p-torsion rank {r}")
        result = RankResult(r, tuple(witness), ABELIAN, "max_p log_p |{x : x^p = e}|")
    elif (p := is_p_group(g)) is not None:
        phi = frattini_power_commutator(g, p)
        r = exact_log(g.order // phi.order, p)
        witness = _greedy_basis(g, phi, Subgroup(g, np.ones(g.order, dtype=bool)))
        cert = f"log_{p} |G/Phi(G)| = {r}"
        if g.order <= limits.rank_certify_cap:
            brute = brute_force_rank(g, limits)
            if brute.rank != r:
                raise InconsistentResult(f"Burnside rank {r} != brute-force rank {brute.rank}")
            cert += "; brute-force agrees"
        result = RankResult(r, tuple(witness), BURNSIDE, cert)
    else:
        result = brute_force_rank(g, limits)
    if closure(g, result.witness).order != g.order:
        raise InconsistentResult(f"rank witness {result.witness} does not generate the group")
    return result


def rank_of_center(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS, method: str | None = None) -> RankResult:
    """rk(Z(G)), computed on the center materialized as its own group.

    The witness is reported in the parent's element indices.
    """
    z = center(g)
    result = rank(z.as_group(limits), limits, method)
    result.witness = tuple(int(z.members[i]) for i in result.witness)
    return result
