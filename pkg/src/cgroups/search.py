"""C-group detection, the alpha-C family, and the claim verification suites.

A C-group is a group whose center needs more generators than the group
itself: rk(G) < rk(Z(G)).
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import gcd

import numpy as np

from . import alphac
from .alphac import AlphaCElement, AlphaCParams, alpha_c
from .config import DEFAULT_LIMITS, Limits
from .errors import CGroupsError, OrderCapExceeded, VerificationFailure
from .group import FiniteGroup, abelian_product, cyclic, dihedral, direct_product, quotient
from .isomorphism import is_isomorphic
from .numtheory import exact_log, is_prime, prime_factors, prime_power
from .presentation import coset_enumerate, parse_presentation
from .rank import BRUTE_FORCE, brute_force_rank, rank, rank_of_center
from .series import (
    NOT_NILPOTENT,
    abelian_rank,
    derived_series,
    is_elementary_abelian,
    is_p_group,
    upper_central_series,
)
from .subgroups import (
    center,
    closure,
    commutator_subgroup,
    frattini,
    frattini_by_maximals,
    frattini_power_commutator,
    normal_subgroups,
)

log = logging.getLogger(__name__)

ORDER64_PRESENTATION = "<a,b | a^4=b^8=1, a^2b=ba^2, b^2a=ab^-2, (b^-1a)^2=(ab)^2>"
S3_PRESENTATION = "<a,b | a^2, b^2, (ab)^3>"


def p5_presentation(p: int) -> str:
    """Two generators of order p^2 whose commutator is central of order p."""
    q = p * p
    return f"<a,b | a^{q}, b^{q}, [a,b]^{p}, [a,[a,b]], [b,[a,b]]>"


# -- reports ----------------------------------------------------------------


@dataclass
class InvariantReport:
    group_id: str
    order: int
    rank: int
    rank_method: str
    witness: list[int]
    center_order: int
    center_rank: int
    center: list[int]
    is_c_group: bool
    nilpotency_class: int | str
    solvable: bool
    p_group: int | None
    upper_central_orders: list[int]
    derived_orders: list[int]
    provenance: dict
    seed: int
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    TSV_COLUMNS = ("group_id", "order", "rank", "center_rank", "is_c_group", "nilpotency_class", "solvable")

    def tsv_row(self) -> str:
        return "\t".join(str(getattr(self, c)).lower() if isinstance(getattr(self, c), bool) else str(getattr(self, c))
                         for c in self.TSV_COLUMNS)


def tsv(reports) -> str:
    lines = ["\t".join(InvariantReport.TSV_COLUMNS)]
    lines.extend(r.tsv_row() for r in reports)
    return "\n".join(lines) + "\n"


def invariant_report(g: FiniteGroup, group_id: str = "group", limits: Limits = DEFAULT_LIMITS,
                     rank_method: str | None = None) -> InvariantReport:
    timings = {}

    def timed(name, fn):
        start = time.perf_counter()
        out = fn()
        timings[name] = round(time.perf_counter() - start, 6)
        return out

    r = timed("rank", lambda: rank(g, limits, rank_method))
    z = timed("center", lambda: center(g))
    rz = timed("center_rank", lambda: rank_of_center(g, limits, rank_method))
    ucs = timed("upper_central_series", lambda: upper_central_series(g, limits))
    ds = timed("derived_series", lambda: derived_series(g, limits))
    return InvariantReport(
        group_id=group_id,
        order=g.order,
        rank=r.rank,
        rank_method=r.method,
        witness=list(r.witness),
        center_order=z.order,
        center_rank=rz.rank,
        center=z.to_list(),
        is_c_group=r.rank < rz.rank,
        nilpotency_class=ucs.length if ucs.terminated else NOT_NILPOTENT,
        solvable=ds.terminated,
        p_group=is_p_group(g),
        upper_central_orders=ucs.subgroup_orders,
        derived_orders=ds.subgroup_orders,
        provenance=g.provenance,
        seed=limits.seed,
        timings=timings,
    )


def is_c_group(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS, method: str | None = None) -> bool:
    return rank(g, limits, method).rank < rank_of_center(g, limits, method).rank


# -- the alpha-C family -----------------------------------------------------


@dataclass(frozen=True)
class AlphaCFamilyQuery:
    max_order: int
    p_power_only: bool = False
    primes: tuple[int, ...] | None = None


def enumerate_alpha_c(query: AlphaCFamilyQuery | int) -> list[AlphaCParams]:
    if isinstance(query, int):
        query = AlphaCFamilyQuery(query)
    out = []
    for params in alphac.enumerate_params(query.max_order):
        if query.p_power_only and prime_power(params.order) is None:
            continue
        if query.primes is not None and not set(prime_factors(params.order)) <= set(query.primes):
            continue
        out.append(params)
    return out


def alpha_c_orders(max_order: int) -> list[int]:
    """Orders <= max_order realized by some alpha-C group."""
    return sorted({p.order for p in enumerate_alpha_c(max_order)})


# -- claim checking ---------------------------------------------------------


@dataclass
class Check:
    claim: str
    group_id: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


class Checks(list):
    """Collects claim outcomes without stopping at the first failure."""

    def record(self, claim: str, group_id: str, passed, detail="") -> bool:
        self.append(Check(claim, group_id, bool(passed), str(detail)))
        if not passed:
            log.warning("claim failed: %s [%s] %s", claim, group_id, detail)
        return bool(passed)

    def guard(self, claim: str, group_id: str, fn):
        """Run ``fn``; a CGroupsError becomes a failed check instead of escaping."""
        try:
            return fn()
        except OrderCapExceeded:
            raise
        except CGroupsError as exc:
            self.record(claim, group_id, False, f"{type(exc).__name__}: {exc}")
            return None

    @property
    def failures(self) -> list[Check]:
        return [c for c in self if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures


def _alpha_commutator_table(params: AlphaCParams, idx: np.ndarray, jdx: np.ndarray) -> np.ndarray:
    n1, n2 = params.n1, params.n2
    uy, uz = (idx // n1) % n2, idx // (n1 * n2)
    vy, vz = (jdx // n1) % n2, jdx // (n1 * n2)
    return (vy * uz + (n2 - 1) * uy * vz) % n1  # x-coordinate; y = z = 0 so this is the index


def check_alpha_c(params: AlphaCParams, limits: Limits = DEFAULT_LIMITS) -> tuple[InvariantReport | None, Checks]:
    """Build alpha-C(params) and test every structural claim made about it."""
    gid = str(params)
    checks = Checks()
    g = alpha_c(params, limits)
    n1, n2, n3 = params.n1, params.n2, params.n3
    checks.record("order = n1*n2*n3", gid, g.order == params.order, g.order)

    a, b = alphac.encode(params, alphac.GEN_A), alphac.encode(params, alphac.GEN_B)
    checks.record("a=(0,1,0), b=(0,0,1) generate G", gid, closure(g, [a, b]).order == g.order)

    z = center(g)
    checks.record("|Z(G)| = n1*(n2/n1)*(n3/n1)", gid, z.order == params.center_order, z.order)
    expected = {alphac.encode(params, AlphaCElement(x, n1 * y, n1 * w))
                for x in range(n1) for y in range(n2 // n1) for w in range(n3 // n1)}
    checks.record("Z(G) = {(x, n1*y, n1*z)}", gid, set(z.to_list()) == expected)
    zg = z.as_group(limits)
    if zg.order <= limits.iso_cap:
        iso = checks.guard("Z(G) ~ Z_n1 x Z_(n2/n1) x Z_(n3/n1)", gid,
                           lambda: is_isomorphic(zg, abelian_product(params.center_factors, limits), limits))
        if iso is not None:
            checks.record("Z(G) ~ Z_n1 x Z_(n2/n1) x Z_(n3/n1)", gid, iso.isomorphic, iso.obstruction or "")
    else:
        checks.record("Z(G) ~ Z_n1 x Z_(n2/n1) x Z_(n3/n1)", gid,
                      sorted(zg.element_orders.tolist()) ==
                      sorted(abelian_product(params.center_factors, limits).element_orders.tolist()),
                      "element-order profile (center above iso cap)")

    report = checks.guard("invariants computable", gid, lambda: invariant_report(g, gid, limits))
    if report is not None:
        checks.record("rk(G) = 2", gid, report.rank == 2, report.rank)
        checks.record("rk(Z(G)) = 3", gid, report.center_rank == 3, report.center_rank)
        checks.record("is a C-group", gid, report.is_c_group)
        checks.record("nilpotent of class 2", gid, report.nilpotency_class == 2, report.nilpotency_class)
        checks.record("solvable", gid, report.solvable)

    derived = commutator_subgroup(g)
    checks.record("|G'| divides n1", gid, n1 % derived.order == 0, derived.order)

    idx = np.arange(g.order)
    if g.order <= 1024:
        closed = _alpha_commutator_table(params, idx[:, None], idx[None, :])
        table = g.all_commutators()
        scope = "all pairs"
    else:
        rng = np.random.default_rng(limits.seed)
        i, j = rng.integers(0, g.order, size=(2, 1000))
        closed = _alpha_commutator_table(params, i, j)
        table = np.array([g.commutator(int(x), int(y)) for x, y in zip(i, j)])
        scope = "1000 sampled pairs"
    checks.record("[x,y] = (y2 x3 + (n2-1) x2 y3, 0, 0)", gid, np.array_equal(closed, table), scope)

    inv_ok = all(alphac.encode(params, alphac.inverse(params, alphac.decode(params, k))) == g.inverse(k)
                 for k in range(g.order))
    checks.record("(x,y,z)^-1 = ((n1-x)+yz, n2-y, n3-z)", gid, inv_ok)

    words = [alphac.canonical_decompose(params, alphac.decode(params, k)) for k in range(g.order)]
    bounds = alphac.canonical_ranges(params)
    in_range = all(0 <= w[i] < bounds[i] for w in words for i in range(5))
    roundtrip = all(alphac.canonical_word(params, w) == alphac.decode(params, k) for k, w in enumerate(words))
    checks.record("canonical words biject onto G", gid, in_range and roundtrip and len(set(words)) == g.order)
    return report, checks


def verify_alpha_c(params: AlphaCParams, limits: Limits = DEFAULT_LIMITS) -> InvariantReport:
    report, checks = check_alpha_c(params, limits)
    if not checks.passed:
        raise VerificationFailure(checks.failures)
    return report


def check_p5(p: int, limits: Limits = DEFAULT_LIMITS) -> Checks:
    """Existence and structure of the C-group of order p^5, plus the presentation isomorphism."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p ** 5 > limits.iso_cap:
        raise OrderCapExceeded(f"p^5 = {p ** 5} exceeds the isomorphism cap {limits.iso_cap}")
    params = AlphaCParams(p, p * p, p * p)
    gid = str(params)
    _, checks = check_alpha_c(params, limits)
    g = alpha_c(params, limits)
    z = center(g)
    phi = checks.guard("Phi(G) = Z(G)", gid, lambda: frattini(g, limits))
    if phi is not None:
        checks.record("Phi(G) = Z(G)", gid, phi == z, f"|Phi| = {phi.order}, |Z| = {z.order}")
    q, _ = quotient(g, z, limits)
    checks.record("G/Z(G) elementary abelian of order p^2", gid, is_elementary_abelian(q) == (p, 2),
                  is_elementary_abelian(q))
    a, b = alphac.encode(params, alphac.GEN_A), alphac.encode(params, alphac.GEN_B)
    orders = (int(g.element_orders[a]), int(g.element_orders[b]), int(g.element_orders[g.commutator(a, b)]))
    checks.record("|a| = |b| = p^2, |[a,b]| = p", gid, orders == (p * p, p * p, p), orders)

    pres = parse_presentation(p5_presentation(p))
    pid = f"pres(p5,p={p})"
    h = checks.guard("presentation enumerates", pid, lambda: coset_enumerate(pres, limits=limits))
    if h is not None:
        checks.record("presentation group has order p^5", pid, h.order == p ** 5, h.order)
        if h.order == g.order:
            iso = is_isomorphic(h, g, limits)
            checks.record("presentation group ~ alpha-C(p,p^2,p^2)", pid, iso.isomorphic, iso.obstruction or "")
    return checks


def verify_p5_claim(p: int, limits: Limits = DEFAULT_LIMITS) -> Checks:
    checks = check_p5(p, limits)
    if not checks.passed:
        raise VerificationFailure(checks.failures)
    return checks


def check_multiple_of_p5(p: int, k_max: int, limits: Limits = DEFAULT_LIMITS) -> tuple[list[InvariantReport], Checks]:
    """alpha-C(p,p^2,p^2) x Z_(kp) is a C-group for k = 1..k_max, by brute-force ranks."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    largest = p ** 5 * k_max * p
    if largest > limits.order_cap:
        raise OrderCapExceeded(f"largest product order {largest} exceeds order cap {limits.order_cap}")
    base = alpha_c(AlphaCParams(p, p * p, p * p), limits)
    checks = Checks()
    reports = []
    for k in range(1, k_max + 1):
        gid = f"alphaC({p},{p * p},{p * p})xZ{k * p}"
        g = direct_product(base, cyclic(k * p, limits), limits)
        report = checks.guard("product is a C-group", gid,
                              lambda: invariant_report(g, gid, limits, rank_method=BRUTE_FORCE))
        if report is not None:
            reports.append(report)
            checks.record("product is a C-group", gid, report.is_c_group,
                          f"rk = {report.rank}, rk(Z) = {report.center_rank}")
    return reports, checks


def verify_multiple_of_p5(p: int, k_max: int, limits: Limits = DEFAULT_LIMITS) -> list[InvariantReport]:
    reports, checks = check_multiple_of_p5(p, k_max, limits)
    if not checks.passed:
        raise VerificationFailure(checks.failures)
    return reports


def check_order64(limits: Limits = DEFAULT_LIMITS) -> Checks:
    gid = "pres(order64)"
    checks = Checks()
    g = checks.guard("order-64 presentation enumerates", gid, lambda: coset_enumerate(ORDER64_PRESENTATION, limits=limits))
    if g is None:
        return checks
    checks.record("exactly 64 cosets", gid, g.order == 64, g.order)
    report = invariant_report(g, gid, limits)
    checks.record("nilpotent of class 3", gid, report.nilpotency_class == 3, report.nilpotency_class)
    checks.record("is a C-group", gid, report.is_c_group, f"rk = {report.rank}, rk(Z) = {report.center_rank}")
    return checks


# -- corpus -----------------------------------------------------------------


@dataclass(frozen=True)
class CorpusSpec:
    cyclic_max: int = 16
    abelian_max_order: int = 64
    abelian_max_factors: int = 3
    dihedral_max_n: int = 8
    alpha_c_max_order: int = 256
    product_cyclics: tuple[int, ...] = (2, 3, 4)
    product_max_order: int = 256
    include_presentations: bool = True


def abelian_tuples(max_order: int, max_factors: int, min_factors: int = 2):
    """Nondecreasing tuples of integers >= 2 with product <= max_order."""
    out = []

    def grow(prefix, product, low):
        if len(prefix) >= min_factors:
            out.append(tuple(prefix))
        if len(prefix) == max_factors:
            return
        for m in range(low, max_order // product + 1):
            grow(prefix + [m], product * m, m)

    grow([], 1, 2)
    return out


def build_corpus(spec: CorpusSpec = CorpusSpec(), limits: Limits = DEFAULT_LIMITS) -> list[tuple[str, FiniteGroup]]:
    corpus = []
    for n in range(1, spec.cyclic_max + 1):
        corpus.append((f"cyclic({n})", cyclic(n, limits)))
    for ns in abelian_tuples(spec.abelian_max_order, spec.abelian_max_factors):
        corpus.append((f"abelian({','.join(map(str, ns))})", abelian_product(ns, limits)))
    for n in range(3, spec.dihedral_max_n + 1):
        corpus.append((f"dihedral({n})", dihedral(n, limits)))
    for params in enumerate_alpha_c(spec.alpha_c_max_order):
        g = alpha_c(params, limits)
        corpus.append((str(params), g))
        for m in spec.product_cyclics:
            if params.order * m <= spec.product_max_order:
                corpus.append((f"{params}xZ{m}", direct_product(g, cyclic(m, limits), limits)))
    if spec.include_presentations:
        corpus.append(("pres(order64)", coset_enumerate(ORDER64_PRESENTATION, limits=limits)))
        corpus.append(("pres(p5,p=2)", coset_enumerate(p5_presentation(2), limits=limits)))
        corpus.append(("pres(S3)", coset_enumerate(S3_PRESENTATION, limits=limits)))
    return corpus


def _corpus_entry_checks(args) -> tuple[InvariantReport | None, list[Check]]:
    gid, g, limits = args
    checks = Checks()
    report = checks.guard("invariants computable", gid, lambda: invariant_report(g, gid, limits))
    if report is None:
        return None, list(checks)
    p = report.p_group

    if p is not None:
        checks.record("p-groups are nilpotent", gid, report.nilpotency_class != NOT_NILPOTENT)
    if report.nilpotency_class != NOT_NILPOTENT:
        checks.record("nilpotent implies solvable", gid, report.solvable)
    if report.is_c_group:
        checks.record("C-groups are solvable (corpus observation)", gid, report.solvable)

    if g.order <= 256:
        brute = brute_force_rank(g, limits).rank
        brute_z = brute_force_rank(center(g).as_group(limits), limits).rank
        checks.record("is_c_group = rk < rk(Z) (brute-force recomputation)", gid,
                      report.is_c_group == (brute < brute_z), f"rk = {brute}, rk(Z) = {brute_z}")
    else:
        brute = None

    if g.is_abelian and g.order <= 200:
        checks.record("abelian_rank = brute-force rank", gid, abelian_rank(g) == brute_force_rank(g, limits).rank)

    if p is not None and g.order <= 128:
        phi_pc = frattini_power_commutator(g, p)
        phi_max = frattini_by_maximals(g, limits)
        checks.record("Phi by powers/commutators = Phi by maximal subgroups", gid, phi_pc == phi_max)
        checks.record("log_p |G/Phi(G)| = brute-force rank", gid,
                      exact_log(g.order // phi_pc.order, p) == brute)
        ump_ok = True
        for n in normal_subgroups(g):
            q, _ = quotient(g, n, limits)
            if q.order > 1 and is_elementary_abelian(q) is not None and not phi_pc.issubset(n):
                ump_ok = False
        checks.record("Phi(G) <= N whenever G/N is elementary abelian", gid, ump_ok)

    pk = prime_power(g.order)
    if pk and pk[1] == 2 and pk[0] <= 7:
        checks.record("order p^2 groups are cyclic or elementary abelian", gid,
                      report.rank == 1 or is_elementary_abelian(g) is not None)
    if not g.is_abelian:
        z = center(g)
        q, _ = quotient(g, z, limits)
        qpk = prime_power(q.order)
        if qpk and qpk[1] == 2 and qpk[0] <= 7:
            checks.record("order p^2 quotients G/Z(G) are cyclic or elementary abelian", gid,
                          rank(q, limits).rank == 1 or is_elementary_abelian(q) is not None)
    return report, list(checks)


def _product_bound_checks(corpus, reports) -> Checks:
    checks = Checks()
    by_id = {r.group_id: r for r in reports if r is not None}
    for gid, g in corpus:
        if g.provenance.get("kind") != "direct-product" or gid not in by_id:
            continue
        left, _, right = gid.rpartition("x")
        m = int(right.lstrip("Z"))
        if left in by_id:
            bound = by_id[left].rank + (1 if m > 1 else 0)
            checks.record("rk(G x H) <= rk(G) + rk(H)", gid, by_id[gid].rank <= bound,
                          f"{by_id[gid].rank} <= {bound}")
    return checks


def parallel_map(fn, items, jobs: int = 1):
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def check_corpus(spec: CorpusSpec = CorpusSpec(), limits: Limits = DEFAULT_LIMITS, jobs: int = 1):
    corpus = build_corpus(spec, limits)
    results = parallel_map(_corpus_entry_checks, [(gid, g, limits) for gid, g in corpus], jobs)
    checks = Checks()
    reports = []
    for report, entry_checks in results:
        reports.append(report)
        checks.extend(entry_checks)
    checks.extend(_product_bound_checks(corpus, reports))
    reports = sorted((r for r in reports if r is not None), key=lambda r: r.group_id)
    return reports, checks


def check_common_factor_ranks(max_order: int = 200, max_factors: int = 3, limits: Limits = DEFAULT_LIMITS) -> Checks:
    """Z_n1 x ... x Z_nk with a common factor needs exactly k generators."""
    checks = Checks()
    for ns in abelian_tuples(max_order, max_factors, min_factors=1):
        g_ = 0
        for m in ns:
            g_ = gcd(g_, m)
        if g_ <= 1:
            continue
        gid = f"abelian({','.join(map(str, ns))})"
        g = abelian_product(ns, limits)
        r = brute_force_rank(g, limits).rank
        checks.record("rank = k when gcd > 1", gid, r == len(ns), f"rank {r}, k {len(ns)}")
        checks.record("abelian_rank = brute-force rank", gid, abelian_rank(g) == r)
    return checks


def check_s3_oracle(limits: Limits = DEFAULT_LIMITS) -> Checks:
    """Coset enumeration of <a,b | a^2, b^2, (ab)^3> against closure of two transpositions."""
    checks = Checks()
    g = coset_enumerate(S3_PRESENTATION, limits=limits)
    perms = {(0, 1, 2)}
    gens = [(1, 0, 2), (0, 2, 1)]
    frontier = list(perms)
    while frontier:
        nxt = []
        for p in frontier:
            for s in gens:
                q = tuple(p[s[i]] for i in range(3))
                if q not in perms:
                    perms.add(q)
                    nxt.append(q)
        frontier = nxt
    checks.record("coset enumeration order = permutation closure order", "pres(S3)",
                  g.order == len(perms), f"{g.order} vs {len(perms)}")
    return checks


# -- suites -----------------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    checks: list[Check]
    reports: list[InvariantReport]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "checks": [c.to_dict() for c in self.checks],
            "failures": [c.to_dict() for c in self.checks if not c.passed],
            "reports": [r.to_dict() for r in self.reports],
        }


def _alpha_entry(args):
    params, limits = args
    return check_alpha_c(params, limits)


def run_suite(name: str, limits: Limits = DEFAULT_LIMITS, *, max_order: int = 512, p: int = 2,
              k_max: int = 4, jobs: int = 1, corpus: CorpusSpec = CorpusSpec()) -> SuiteResult:
    """Run one named suite: ``alpha-c``, ``p5``, ``multiple``, ``corpus`` or ``paper`` (all of them)."""
    start = time.perf_counter()
    checks = Checks()
    reports: list[InvariantReport] = []
    if name in ("alpha-c", "paper"):
        families = enumerate_alpha_c(max_order)
        for report, entry in parallel_map(_alpha_entry, [(q, limits) for q in families], jobs):
            checks.extend(entry)
            if report is not None:
                reports.append(report)
    if name in ("p5", "paper"):
        for prime in ([2, 3] if name == "paper" else [p]):
            checks.extend(check_p5(prime, limits))
    if name in ("multiple", "paper"):
        more, entry = check_multiple_of_p5(p if name == "multiple" else 2, k_max, limits)
        checks.extend(entry)
        reports.extend(more)
    if name == "paper":
        checks.extend(check_order64(limits))
        checks.extend(check_common_factor_ranks(limits=limits))
        checks.extend(check_s3_oracle(limits))
    if name in ("corpus", "paper"):
        more, entry = check_corpus(corpus, limits, jobs)
        checks.extend(entry)
        reports.extend(more)
    if name not in ("alpha-c", "p5", "multiple", "corpus", "paper"):
        raise ValueError(f"unknown suite {name!r}")
    return SuiteResult(name, list(checks), reports, time.perf_counter() - start)
