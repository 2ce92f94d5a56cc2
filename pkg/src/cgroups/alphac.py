"""The alpha-C family: Z_n1 x Z_n2 x Z_n3 with a twisted first coordinate.

Multiplication is

    (x1, y1, z1) * (x2, y2, z2) = (x1 + x2 + y2*z1 mod n1, y1 + y2 mod n2, z1 + z2 mod n3)

and ``(x, y, z)`` is stored at index ``x + n1*y + n1*n2*z``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

import numpy as np

from .config import DEFAULT_LIMITS, Limits
from .errors import InvalidAlphaCParams
from .group import FiniteGroup, _check_cap, from_table


@dataclass(frozen=True, order=True)
class AlphaCParams:
    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        problem = alpha_c_violation(self.n1, self.n2, self.n3)
        if problem:
            raise InvalidAlphaCParams(f"({self.n1},{self.n2},{self.n3}): {problem}")

    @property
    def order(self) -> int:
        return self.n1 * self.n2 * self.n3

    @property
    def center_factors(self) -> tuple[int, int, int]:
        return self.n1, self.n2 // self.n1, self.n3 // self.n1

    @property
    def center_order(self) -> int:
        a, b, c = self.center_factors
        return a * b * c

    def __str__(self):
        return f"alphaC({self.n1},{self.n2},{self.n3})"


def alpha_c_violation(n1: int, n2: int, n3: int) -> str | None:
    """Name the first violated side condition, or None if the triple is valid."""
    if min(n1, n2, n3) < 1:
        return "all parameters must be positive"
    if n2 % n1:
        return "n1 must divide n2"
    if n3 % n1:
        return "n1 must divide n3"
    if gcd(gcd(n1, n2 // n1), n3 // n1) <= 1:
        return "gcd(n1, n2/n1, n3/n1) must exceed 1"
    return None


class AlphaCElement(NamedTuple):
    x: int
    y: int
    z: int


def encode(params: AlphaCParams, u: AlphaCElement) -> int:
    return u.x + params.n1 * u.y + params.n1 * params.n2 * u.z


def decode(params: AlphaCParams, index: int) -> AlphaCElement:
    n1, n2 = params.n1, params.n2
    return AlphaCElement(index % n1, (index // n1) % n2, index // (n1 * n2))


def elements(params: AlphaCParams):
    return [decode(params, i) for i in range(params.order)]


def multiply(params: AlphaCParams, u: AlphaCElement, v: AlphaCElement) -> AlphaCElement:
    return AlphaCElement(
        (u.x + v.x + v.y * u.z) % params.n1,
        (u.y + v.y) % params.n2,
        (u.z + v.z) % params.n3,
    )


def inverse(params: AlphaCParams, u: AlphaCElement) -> AlphaCElement:
    n1, n2, n3 = params.n1, params.n2, params.n3
    return AlphaCElement(((n1 - u.x) + u.y * u.z) % n1, (n2 - u.y) % n2, (n3 - u.z) % n3)


def commutator(params: AlphaCParams, u: AlphaCElement, v: AlphaCElement) -> AlphaCElement:
    """``u v u^-1 v^-1`` by its closed form; only the first coordinate survives."""
    return AlphaCElement((v.y * u.z + (params.n2 - 1) * u.y * v.z) % params.n1, 0, 0)


def power(params: AlphaCParams, u: AlphaCElement, k: int) -> AlphaCElement:
    result = AlphaCElement(0, 0, 0)
    if k < 0:
        u, k = inverse(params, u), -k
    for _ in range(k):
        result = multiply(params, result, u)
    return result


GEN_A = AlphaCElement(0, 1, 0)
GEN_B = AlphaCElement(0, 0, 1)


def canonical_word(params: AlphaCParams, ks) -> AlphaCElement:
    """Evaluate a^(k1 n1) b^(k2 n1) [a,b]^k3 a^k4 b^k5."""
    k1, k2, k3, k4, k5 = ks
    n1 = params.n1
    c = commutator(params, GEN_A, GEN_B)
    word = AlphaCElement(0, 0, 0)
    for base, k in ((GEN_A, k1 * n1), (GEN_B, k2 * n1), (c, k3), (GEN_A, k4), (GEN_B, k5)):
        word = multiply(params, word, power(params, base, k))
    return word


def canonical_decompose(params: AlphaCParams, g: AlphaCElement) -> tuple[int, int, int, int, int]:
    """Exponents (k1..k5) of the unique canonical word equal to ``g``.

    Ranges are half-open: k1 < n2/n1, k2 < n3/n1, k3, k4, k5 < n1.
    """
    n1 = params.n1
    k1, k4 = divmod(g.y, n1)
    k2, k5 = divmod(g.z, n1)
    # [a,b] = (-1, 0, 0) is central, so it only shifts the first coordinate.
    base = canonical_word(params, (k1, k2, 0, k4, k5))
    k3 = (base.x - g.x) % n1
    return k1, k2, k3, k4, k5


def canonical_ranges(params: AlphaCParams) -> tuple[int, int, int, int, int]:
    n1 = params.n1
    return params.n2 // n1, params.n3 // n1, n1, n1, n1


def alpha_c(params: AlphaCParams, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    n1, n2, n3 = params.n1, params.n2, params.n3
    _check_cap(params.order, limits)
    idx = np.arange(params.order)
    x, y, z = idx % n1, (idx // n1) % n2, idx // (n1 * n2)
    px = (x[:, None] + x[None, :] + y[None, :] * z[:, None]) % n1
    py = (y[:, None] + y[None, :]) % n2
    pz = (z[:, None] + z[None, :]) % n3
    table = px + n1 * py + n1 * n2 * pz
    labels = [f"({a},{b},{c})" for a, b, c in zip(x, y, z)]
    prov = {"kind": "alpha-c", "n1": n1, "n2": n2, "n3": n3}
    return from_table(table, labels, prov, limits)


def enumerate_params(max_order: int) -> list[AlphaCParams]:
    """All valid triples with n1*n2*n3 <= max_order, lexicographically."""
    out = []
    n1 = 2
    # n2/n1 and n3/n1 are at least 2, so the smallest order for a given n1 is 4*n1^3
    while 4 * n1 ** 3 <= max_order:
        for n2 in range(2 * n1, max_order // (n1 * n1 * 2) + 1, n1):
            for n3 in range(2 * n1, max_order // (n1 * n2) + 1, n1):
                if alpha_c_violation(n1, n2, n3) is None:
                    out.append(AlphaCParams(n1, n2, n3))
        n1 += 1
    return out
