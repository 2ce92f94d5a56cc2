"""Plain-text exports for computer algebra systems (1-based indices)."""
from __future__ import annotations

from .config import DEFAULT_LIMITS, Limits
from .errors import NotAGroup
from .group import FiniteGroup, from_table
from .rank import rank


def table_text(g: FiniteGroup) -> str:
    """``n`` on the first line, then the n rows of the table, 1-based."""
    lines = [str(g.order)]
    lines.extend(" ".join(str(v + 1) for v in row) for row in g.table.tolist())
    return "\n".join(lines) + "\n"


def parse_table_text(text: str, limits: Limits = DEFAULT_LIMITS) -> FiniteGroup:
    rows = [line.split() for line in text.strip().splitlines() if line.strip()]
    try:
        n = int(rows[0][0])
        table = [[int(v) - 1 for v in row] for row in rows[1:]]
    except (IndexError, ValueError):
        raise NotAGroup("malformed table text") from None
    if len(table) != n or any(len(row) != n for row in table):
        raise NotAGroup(f"expected {n} rows of {n} entries")
    return from_table(table, provenance={"kind": "table"}, limits=limits)


def permutation_generators(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> list[list[int]]:
    """Right-regular permutations (i -> i*s, 1-based) of a minimal generating set."""
    return [[int(v) + 1 for v in g.table[:, s]] for s in rank(g, limits).witness]


def permutation_text(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> str:
    """Degree on the first line, then one permutation image list per generator."""
    lines = [str(g.order)]
    lines.extend(" ".join(map(str, perm)) for perm in permutation_generators(g, limits))
    return "\n".join(lines) + "\n"
