import itertools

import pytest

from cgroups import AlphaCParams, alpha_c, cyclic, from_table

ACCEPTANCE_LINES = []


def naive_closure(table, seed, identity=0):
    """Set-based closure under products; shares no code with the package."""
    elems = {identity} | set(seed)
    while True:
        new = {table[a][b] for a in elems for b in elems} - elems
        if not new:
            return elems
        elems |= new


def naive_rank(table, identity=0):
    """Smallest k such that some k-subset generates, by plain enumeration."""
    n = len(table)
    if n == 1:
        return 0
    for k in range(1, n + 1):
        for subset in itertools.combinations(range(n), k):
            if len(naive_closure(table, subset, identity)) == n:
                return k


def perm_group_table(gens):
    """Cayley table of the permutation group generated by ``gens`` (tuples), composed as p then q."""
    degree = len(gens[0])
    ident = tuple(range(degree))
    elems = [ident]
    seen = {ident}
    for p in elems:
        for s in gens:
            q = tuple(s[p[i]] for i in range(degree))
            if q not in seen:
                seen.add(q)
                elems.append(q)
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[tuple(q[p[i]] for i in range(degree))] for q in elems] for p in elems]
    return table, elems


@pytest.fixture(scope="session")
def s3():
    table, _ = perm_group_table([(1, 0, 2), (0, 2, 1)])
    return from_table(table)


@pytest.fixture(scope="session")
def q8():
    # quaternion units as signed basis vectors, multiplied by the standard rules
    names = ["1", "i", "j", "k"]
    mult = {
        ("1", x): (1, x) for x in names
    }
    mult.update({(x, "1"): (1, x) for x in names})
    mult.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"), ("j", "k"): (1, "i"),
                 ("k", "j"): (-1, "i"), ("k", "i"): (1, "j"), ("i", "k"): (-1, "j")})
    elems = [(s, x) for s in (1, -1) for x in names]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, x1 in elems:
        row = []
        for s2, x2 in elems:
            s, x = mult[(x1, x2)]
            row.append(index[(s1 * s2 * s, x)])
        table.append(row)
    return from_table(table)


@pytest.fixture(scope="session")
def a244():
    return alpha_c(AlphaCParams(2, 4, 4))


@pytest.fixture(scope="session")
def a248():
    return alpha_c(AlphaCParams(2, 4, 8))


@pytest.fixture(scope="session")
def z6():
    return cyclic(6)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
