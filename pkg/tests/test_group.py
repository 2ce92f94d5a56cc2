import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgroups import alphac
from cgroups.alphac import AlphaCElement, AlphaCParams, alpha_c
from cgroups.config import Limits
from cgroups.errors import InvalidAlphaCParams, NotAGroup, NotNormal, OrderCapExceeded
from cgroups.group import (
    abelian_product,
    associativity_violation_bruteforce,
    associativity_violation_light,
    cyclic,
    dihedral,
    direct_product,
    from_dict,
    from_table,
    load,
    quotient,
)
from cgroups.isomorphism import is_isomorphic
from cgroups.rank import rank, rank_of_center
from cgroups.series import is_elementary_abelian
from cgroups.subgroups import Subgroup, center, closure

from conftest import naive_rank


def brute_alpha_mul(params, u, v):
    n1, n2, n3 = params.n1, params.n2, params.n3
    return ((u[0] + v[0] + v[1] * u[2]) % n1, (u[1] + v[1]) % n2, (u[2] + v[2]) % n3)


def valid_params(max_order):
    out = []
    for n1 in range(1, max_order + 1):
        for n2 in range(1, max_order + 1):
            for n3 in range(1, max_order // max(1, n1 * n2) + 1):
                if n1 * n2 * n3 > max_order or n2 % n1 or n3 % n1:
                    continue
                if np.gcd.reduce([n1, n2 // n1, n3 // n1]) > 1:
                    out.append((n1, n2, n3))
    return sorted(out)


# -- from_table -------------------------------------------------------------


def test_trivial_table():
    g = from_table([[0]])
    assert g.order == 1 and g.identity == 0


def test_z2_table():
    g = from_table([[0, 1], [1, 0]])
    assert g.order == 2
    assert g.inverses.tolist() == [0, 1]


def test_broken_row_is_rejected():
    table = [[0, 1, 2], [1, 1, 0], [2, 0, 1]]
    with pytest.raises(NotAGroup, match="row 1"):
        from_table(table)


def test_missing_identity_is_rejected():
    # Latin square with no identity row
    with pytest.raises(NotAGroup, match="identity"):
        from_table([[0, 2, 1], [2, 1, 0], [1, 0, 2]])


def test_non_associative_loop_names_triple():
    # smallest loop that is not a group (order 5)
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    assert associativity_violation_bruteforce(np.array(table)) is not None
    with pytest.raises(NotAGroup, match=r"associativity fails at triple \(\d+, \d+, \d+\)"):
        from_table(table)


def test_bad_shape_and_range():
    with pytest.raises(NotAGroup):
        from_table([[0, 1]])
    with pytest.raises(NotAGroup):
        from_table([[0, 5], [5, 0]])


def random_loop(n, seed):
    """Normalized isotope of Z_n: a Latin square with identity, usually non-associative."""
    rng = np.random.default_rng(seed)
    r, c = rng.permutation(n), rng.permutation(n)
    sym = rng.permutation(n)
    latin = sym[(r[:, None] + c[None, :]) % n]
    # relabel so that row/column of a chosen element act as identity
    e = 0
    row_e = latin[e]
    col_e = latin[:, e]
    # x o y = L(x)^-1 ... use principal isotope: x*y = latin[col_inv[x], row_inv[y]]
    col_inv = np.argsort(col_e)
    row_inv = np.argsort(row_e)
    return latin[col_inv[:, None], row_inv[None, :]]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(0, 10_000))
def test_light_test_agrees_with_bruteforce(n, seed):
    table = random_loop(n, seed)
    idx = np.arange(n)
    e = int(np.flatnonzero((table == idx).all(axis=1))[0])
    assert np.array_equal(table[:, e], idx)
    light = associativity_violation_light(table) is None
    brute = associativity_violation_bruteforce(table) is None
    assert light == brute


def test_light_test_on_groups():
    for g in (alpha_c(AlphaCParams(2, 4, 4)), dihedral(5), abelian_product([2, 3, 4])):
        assert associativity_violation_bruteforce(g.table) is None
        assert associativity_violation_light(g.table) is None


def test_order_cap():
    with pytest.raises(OrderCapExceeded):
        cyclic(10, Limits(order_cap=8))
    with pytest.raises(OrderCapExceeded):
        abelian_product([4, 4], Limits(order_cap=8))


# -- cyclic / abelian / dihedral --------------------------------------------


def test_cyclic_examples():
    assert cyclic(1).order == 1
    z6 = cyclic(6)
    assert z6.is_abelian and rank(z6).rank == 1
    assert cyclic(4).element_orders.tolist() == [1, 4, 2, 4]


def test_abelian_product_examples():
    e8 = abelian_product([2, 2, 2])
    assert e8.order == 8 and is_elementary_abelian(e8) == (2, 3)
    assert abelian_product([1]).order == 1
    g = abelian_product([2, 4])
    assert g.order == 8 and g.is_abelian and rank(g).rank == 2


def test_abelian_product_mixed_radix():
    g = abelian_product([2, 3])
    assert g.labels[1] == "(1,0)" and g.labels[2] == "(0,1)"
    assert g.mul(1, 2) == 3


def test_dihedral():
    d4 = dihedral(4)
    assert d4.order == 8 and not d4.is_abelian
    assert center(d4).order == 2
    assert naive_rank(d4.table.tolist()) == 2


# -- alpha-C ----------------------------------------------------------------


@pytest.mark.parametrize("triple, problem", [
    ((2, 2, 2), "gcd"),
    ((2, 3, 4), "n1 must divide n2"),
    ((2, 4, 5), "n1 must divide n3"),
    ((1, 4, 4), "gcd"),
    ((3, 6, 6), "gcd"),
])
def test_invalid_params_name_the_condition(triple, problem):
    with pytest.raises(InvalidAlphaCParams, match=problem):
        AlphaCParams(*triple)


def test_alpha_c_orders():
    assert alpha_c(AlphaCParams(2, 4, 4)).order == 32
    assert alpha_c(AlphaCParams(3, 9, 9)).order == 243


def test_alpha_c_inverse_example():
    params = AlphaCParams(2, 4, 4)
    assert alphac.inverse(params, AlphaCElement(1, 3, 2)) == (1, 1, 2)
    g = alpha_c(params)
    k = alphac.encode(params, AlphaCElement(1, 3, 2))
    assert alphac.decode(params, g.inverse(k)) == (1, 1, 2)


def test_alpha_c_table_matches_definition():
    params = AlphaCParams(2, 4, 8)
    g = alpha_c(params)
    els = alphac.elements(params)
    for i, u in enumerate(els):
        for j, v in enumerate(els):
            assert els[g.mul(i, j)] == brute_alpha_mul(params, u, v)


def test_alpha_c_roundtrips_through_from_table():
    for triple in valid_params(512):
        g = alpha_c(AlphaCParams(*triple))
        again = from_table(g.table.tolist())
        assert np.array_equal(again.table, g.table)


def test_commutator_examples():
    p = AlphaCParams(2, 4, 4)
    assert alphac.commutator(p, alphac.GEN_A, alphac.GEN_B) == (1, 0, 0)
    u = AlphaCElement(1, 3, 2)
    assert alphac.commutator(p, u, u) == (0, 0, 0)


def test_commutator_example_248_against_brute_multiplication():
    p = AlphaCParams(2, 4, 8)
    u, v = (1, 2, 3), (0, 1, 5)

    def inv(w):
        # brute-force inverse: search
        return next(x for x in itertools.product(range(2), range(4), range(8))
                    if brute_alpha_mul(p, w, x) == (0, 0, 0))

    m = brute_alpha_mul
    expected = m(p, m(p, m(p, u, v), inv(u)), inv(v))
    assert alphac.commutator(p, AlphaCElement(*u), AlphaCElement(*v)) == expected
    g = alpha_c(p)
    iu, iv = alphac.encode(p, AlphaCElement(*u)), alphac.encode(p, AlphaCElement(*v))
    assert alphac.decode(p, g.commutator(iu, iv)) == expected


small_params = st.sampled_from(valid_params(256))


@settings(max_examples=40, deadline=None)
@given(small_params, st.data())
def test_commutator_and_inverse_closed_forms(triple, data):
    p = AlphaCParams(*triple)
    g = alpha_c(p)
    i = data.draw(st.integers(0, g.order - 1))
    j = data.draw(st.integers(0, g.order - 1))
    u, v = alphac.decode(p, i), alphac.decode(p, j)
    assert alphac.encode(p, alphac.commutator(p, u, v)) == g.commutator(i, j)
    assert alphac.encode(p, alphac.inverse(p, u)) == g.inverse(i)


def test_canonical_examples():
    p = AlphaCParams(2, 4, 4)
    assert alphac.canonical_decompose(p, AlphaCElement(0, 0, 0)) == (0, 0, 0, 0, 0)
    assert alphac.canonical_decompose(p, alphac.GEN_A) == (0, 0, 0, 1, 0)


@pytest.mark.parametrize("triple", [(2, 4, 4), (2, 4, 8), (3, 9, 9), (4, 8, 8)])
def test_canonical_words_biject(triple):
    p = AlphaCParams(*triple)
    n1 = p.n1
    a, b = (0, 1, 0), (0, 0, 1)

    def pw(x, k):
        out = (0, 0, 0)
        for _ in range(k):
            out = brute_alpha_mul(p, out, x)
        return out

    c = brute_alpha_mul(p, brute_alpha_mul(p, brute_alpha_mul(p, a, b), pw(a, p.n2 - 1)), pw(b, p.n3 - 1))
    ranges = alphac.canonical_ranges(p)
    seen = {}
    for ks in itertools.product(*(range(r) for r in ranges)):
        k1, k2, k3, k4, k5 = ks
        w = (0, 0, 0)
        for base, k in ((a, k1 * n1), (b, k2 * n1), (c, k3), (a, k4), (b, k5)):
            w = brute_alpha_mul(p, w, pw(base, k))
        seen.setdefault(w, []).append(ks)
    assert len(seen) == p.order
    assert all(len(v) == 1 for v in seen.values())
    for w, (ks,) in seen.items():
        assert alphac.canonical_decompose(p, AlphaCElement(*w)) == ks


# -- products and quotients -------------------------------------------------


def test_product_with_trivial(a244):
    g = direct_product(a244, cyclic(1))
    assert np.array_equal(g.table, a244.table)


def test_coprime_product_is_cyclic():
    g = direct_product(cyclic(2), cyclic(3))
    assert is_isomorphic(g, cyclic(6)).isomorphic


def test_alpha_times_z4_is_c_group(a244):
    g = direct_product(a244, cyclic(4))
    assert g.order == 128
    assert rank(g, method="brute-force").rank == 3
    assert rank_of_center(g, method="brute-force").rank == 4


def test_quotient_by_whole_and_trivial(a244):
    q, proj = quotient(a244, range(a244.order))
    assert q.order == 1 and set(proj.tolist()) == {0}
    q, proj = quotient(a244, [a244.identity])
    assert np.array_equal(q.table, a244.table)


def test_quotient_by_center(a244):
    q, _ = quotient(a244, center(a244))
    assert q.order == 4 and is_elementary_abelian(q) == (2, 2)


def test_quotient_cosets_sorted_by_min_member(a244):
    z = center(a244)
    _, proj = quotient(a244, z)
    firsts = [int(np.flatnonzero(proj == c)[0]) for c in range(proj.max() + 1)]
    assert firsts == sorted(firsts)


def test_quotient_not_normal(s3):
    h = closure(s3, [1])  # a transposition
    assert h.order == 2
    with pytest.raises(NotNormal) as err:
        quotient(s3, h)
    assert err.value.witness is not None


# -- interchange ------------------------------------------------------------


def test_json_roundtrip(tmp_path, a244):
    path = tmp_path / "g.json"
    a244.save(path)
    data = json.loads(path.read_text())
    assert set(data) == {"order", "identity", "table", "labels", "provenance"}
    assert data["provenance"]["kind"] == "alpha-c"
    g = load(path)
    assert np.array_equal(g.table, a244.table) and g.labels == a244.labels


def test_from_dict_rejects_inconsistent_header():
    with pytest.raises(NotAGroup):
        from_dict({"order": 3, "table": [[0, 1], [1, 0]]})
    with pytest.raises(NotAGroup):
        from_dict({"order": 2, "identity": 1, "table": [[0, 1], [1, 0]]})


def test_tables_are_read_only(a244):
    with pytest.raises(ValueError):
        a244.table[0, 0] = 1


def test_subgroup_lagrange(a244):
    with pytest.raises(AssertionError):
        Subgroup.from_members(a244, [0, 1, 2])
