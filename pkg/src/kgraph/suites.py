"""Verification suites.  Each suite takes a graph and returns CheckReports;
graphs outside a suite's scope get a report marked skipped."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import degree as deg
from .algebra import AlgebraElement, all_monomials, ck_ideal, delta, delta_closed_form, delta_product, grade, mul
from .bimodule import (
    Bimodule,
    CheckReport,
    check_toeplitz_axioms,
    inner_product,
    verify_left_adjointable,
    verify_omega_isometry,
    verify_omega_multiplicativity,
)
from .combinatorics import (
    DEFAULT_BUDGET,
    edges_into,
    enumerate_edge_fe_sets,
    enumerate_fe_sets,
    exhaustive_witness,
    ext,
    extends,
    is_exhaustive,
    is_exhaustive_brute_force,
    is_locally_convex,
    lambda_leq,
    lambda_min,
)
from .errors import BudgetExceeded, KGraphError, NotLocallyConvex
from .graph import KGraph, remove_color
from .katsura import (
    extension_pairs,
    fe_compact_expansion,
    h_jx,
    katsura_report,
    verify_covariance,
    verify_edge_exhaustive,
    verify_expansion,
    verify_kerpsi_perp,
    verify_phi_delta,
    verify_report_ideal,
    verify_splitting_sum,
)
from .linalg import RowSpace
from .pathspace import TruncatedRep, delta_witness, rep_element, rep_w, rep_w_star
from .reduction import reduce, in_edge_level_ideal, verify_certificate

SUITES = ("combinatorics", "toeplitz", "bimodule", "katsura", "reduction")
RANDOM_TRIPLES = 10_000
REDUCTION_MAX_L = 4


def _skip(name: str, reason: str) -> CheckReport:
    return CheckReport(name, skipped=reason)


def path_cap(graph: KGraph) -> deg.Degree:
    """Degree cap for enumerations: everything on acyclic graphs, degree
    (2, ..., 2) otherwise."""
    return graph.max_degree() if graph.is_acyclic() else (2,) * graph.k


def fe_inventory(graph: KGraph, v: str, max_l: int = 3, budget: int = DEFAULT_BUDGET):
    """Finite exhaustive sets at v with L <= max_l (paths of degree <= cap),
    falling back to edge-level sets when the search exceeds the budget."""
    try:
        return enumerate_fe_sets(graph, v, path_cap(graph), max_l=max_l, budget=budget)
    except BudgetExceeded:
        return enumerate_edge_fe_sets(graph, v, budget=budget)


# -- combinatorics ---------------------------------------------------------------


def check_factorising_mce(graph: KGraph) -> CheckReport:
    """Lambda^min(eta, rho) is assembled from Lambda^min(eta, rho(0, m)) and
    Lambda^min(beta, rho(m, d(rho))) for every m <= d(rho)."""
    rep = CheckReport("factorising_mce")
    paths = graph.all_paths(None, path_cap(graph))
    for eta in paths:
        for rho in paths:
            if eta.r != rho.r:
                continue
            whole = set(lambda_min(graph, eta, rho))
            for m in deg.below(rho.degree):
                head = graph.segment(rho, deg.zero(graph.k), m)
                tail = graph.segment(rho, m, rho.degree)
                built = {
                    (graph.compose(a, g), d)
                    for a, b in lambda_min(graph, eta, head)
                    for g, d in lambda_min(graph, b, tail)
                }
                rep.record(built == whole, eta=str(eta), rho=str(rho), m=list(m))
    return rep


def check_lambda_min_symmetry(graph: KGraph) -> CheckReport:
    rep = CheckReport("lambda_min_symmetry")
    paths = graph.all_paths(None, path_cap(graph))
    for mu in paths:
        for nu in paths:
            if mu.r == nu.r:
                swapped = {(b, a) for a, b in lambda_min(graph, nu, mu)}
                rep.record(set(lambda_min(graph, mu, nu)) == swapped, mu=str(mu), nu=str(nu))
    return rep


def check_automaton(graph: KGraph, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Every edge subset at every vertex: automaton against brute force (acyclic
    graphs), and every non-exhaustiveness witness is checked directly."""
    rep = CheckReport("automaton_vs_brute_force")
    everything = {v: graph.all_paths(v, path_cap(graph)) for v in graph.vertices}
    for v in graph.vertices:
        es = edges_into(graph, v)
        if 2 ** len(es) > budget:
            raise BudgetExceeded(f"{2 ** len(es)} edge subsets at {v}")
        for size in range(len(es) + 1):
            for E in itertools.combinations(es, size):
                witness = exhaustive_witness(graph, list(E), v)
                if graph.is_acyclic():
                    rep.record((witness is None) == is_exhaustive_brute_force(graph, list(E), v), v=v, E=[str(p) for p in E])
                if witness is not None:
                    stuck = not any(
                        extends(graph, rho, witness) and extends(graph, rho, nu) for nu in E for rho in everything[v]
                    )
                    rep.record(stuck and witness.r == v, v=v, E=[str(p) for p in E], witness=str(witness))
    return rep


def check_lambda_leq_products(graph: KGraph, bound: int = 2) -> CheckReport:
    """Lambda^{<=m} Lambda^{<=n} inside Lambda^{<=m+n}, with equality on
    locally convex graphs, for m, n <= (bound, ..., bound)."""
    rep = CheckReport("lambda_leq_products")
    lc = is_locally_convex(graph)
    box = deg.below((bound,) * graph.k)
    for v in graph.vertices:
        for m in box:
            firsts = lambda_leq(graph, v, m)
            for n in box:
                made = {graph.compose(a, b) for a in firsts for b in lambda_leq(graph, a.s, n)}
                target = set(lambda_leq(graph, v, deg.add(m, n)))
                rep.record(made <= target, v=v, m=list(m), n=list(n), check="inclusion")
                if lc:
                    rep.record(made == target, v=v, m=list(m), n=list(n), check="equality")
    return rep


def check_subgraph_fe(graph: KGraph, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """FE(Lambda^i) inside FE(Lambda) for every color i (locally convex graphs)."""
    if not is_locally_convex(graph):
        return _skip("subgraph_fe_inclusion", "not locally convex")
    rep = CheckReport("subgraph_fe_inclusion")
    for i in range(1, graph.k + 1):
        sub = remove_color(graph, i)
        if sub.k == 0:
            continue
        for v in sub.vertices:
            for E in fe_inventory(sub, v, budget=budget):
                lifted = [graph.path(p.word) for p in E]
                rep.record(is_exhaustive(graph, lifted, v), color=i, E=str(E))
    return rep


def check_ext_degree_bound(graph: KGraph, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Members of Ext(mu; E) have degree <= the join of the degrees in E."""
    rep = CheckReport("ext_degree_bound")
    for v in graph.vertices:
        paths = graph.all_paths(v, path_cap(graph))
        for E in fe_inventory(graph, v, budget=budget):
            top = deg.zero(graph.k)
            for p in E:
                top = deg.join(top, p.degree)
            for mu in paths:
                for a in ext(graph, mu, E.paths):
                    rep.record(deg.leq(a.degree, top), E=str(E), mu=str(mu), member=str(a))
    return rep


def check_products_to_sums(graph: KGraph, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Delta^E by repeated multiplication equals the closed form over MCEs."""
    rep = CheckReport("products_to_sums")
    for v in graph.vertices:
        for E in fe_inventory(graph, v, budget=budget):
            rep.record(delta_product(graph, v, E.paths) == delta_closed_form(graph, v, E.paths), E=str(E))
    return rep


def combinatorics_suite(graph: KGraph, seed: int = 0, budget: int = DEFAULT_BUDGET) -> list[CheckReport]:
    return [
        check_factorising_mce(graph),
        check_lambda_min_symmetry(graph),
        check_automaton(graph, budget),
        check_lambda_leq_products(graph),
        check_subgraph_fe(graph, budget),
        check_ext_degree_bound(graph, budget),
        check_products_to_sums(graph, budget),
    ]


# -- Toeplitz algebra ------------------------------------------------------------


def _monomial_cap(graph: KGraph) -> deg.Degree:
    return graph.max_degree() if graph.is_acyclic() else (1,) * graph.k


def check_random_triples(graph: KGraph, rng: random.Random, count: int = RANDOM_TRIPLES) -> CheckReport:
    """Associativity, *-compatibility and additivity of the grading on random
    monomial triples."""
    rep = CheckReport("random_triples")
    monos = all_monomials(graph, _monomial_cap(graph))
    for _ in range(count):
        a, b, c = (AlgebraElement(graph, {rng.choice(monos): 1}) for _ in range(3))
        ab = mul(a, b)
        rep.record(mul(ab, c) == mul(a, mul(b, c)), check="associativity", a=str(a), b=str(b), c=str(c))
        rep.record(ab.adjoint() == mul(b.adjoint(), a.adjoint()), check="star", a=str(a), b=str(b))
        (ma,), (mb,) = a.terms, b.terms
        want = deg.add(grade(ma), grade(mb))
        rep.record(all(grade(m) == want for m in ab.terms), check="grading", a=str(a), b=str(b))
    return rep


def _rep_setup(graph: KGraph) -> TruncatedRep:
    if graph.is_acyclic():
        return TruncatedRep(graph, graph.max_degree(), deg.zero(graph.k))
    top = _monomial_cap(graph)
    return TruncatedRep(graph, deg.add(deg.add(top, top), deg.add(top, top)), deg.add(top, top))


def check_representation(graph: KGraph, rng: random.Random, pairs: int = 500) -> CheckReport:
    """rep(ab) = rep(a) rep(b) on the safe zone, rep(a^*) = rep(a)^T, the
    stripping formula for w_lam^*, and linear independence of the represented
    monomials (so nonzero elements represent nonzero)."""
    rep = CheckReport("path_space_representation")
    tr = _rep_setup(graph)
    safe = [tr.index[p] for p in tr.safe_zone()]
    monos = all_monomials(graph, _monomial_cap(graph))
    for p in tr.basis:
        rep.record(rep_w_star(p, tr) == rep_w(p, tr).transpose(), check="w_star", path=str(p))
    for _ in range(pairs):
        a = AlgebraElement(graph, {rng.choice(monos): rng.randint(1, 3), rng.choice(monos): rng.randint(-3, -1)})
        b = AlgebraElement(graph, {rng.choice(monos): 1})
        lhs = rep_element(mul(a, b), tr)
        rhs = rep_element(a, tr) @ rep_element(b, tr)
        ok = all(lhs.apply({j: Fraction(1)}) == rhs.apply({j: Fraction(1)}) for j in safe)
        rep.record(ok, check="multiplicative", a=str(a), b=str(b))
        rep.record(rep_element(a.adjoint(), tr) == rep_element(a, tr).transpose(), check="adjoint", a=str(a))
    space = RowSpace()
    for m in monos:
        space.add(rep_element(AlgebraElement(graph, {m: 1}), tr).entries)
    rep.record(space.dim == len(monos), check="independence", monomials=len(monos), rank=space.dim)
    return rep


def check_delta_witnesses(graph: KGraph, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Delta(w)^E xi_v = xi_v, so Delta^E is nonzero in the Toeplitz algebra."""
    rep = CheckReport("delta_nonzero_on_path_space")
    tr = _rep_setup(graph)
    for v in graph.vertices:
        for E in fe_inventory(graph, v, budget=budget):
            try:
                flag, _ = delta_witness(E, tr)
            except AssertionError as exc:
                flag = False
                rep.record(False, E=str(E), error=str(exc))
                continue
            rep.record(flag, E=str(E))
    return rep


def check_ck_ideal_closure(graph: KGraph) -> CheckReport:
    if not graph.is_acyclic():
        return _skip("ck_ideal_closure", "cyclic graph: the formal algebra is infinite dimensional")
    rep = CheckReport("ck_ideal_closure")
    ideal = ck_ideal(graph, verify=False)
    bad = ideal.closure_failures()
    rep.record(not bad, failures=bad[:5])
    for g in ideal.generators:
        rep.record(ideal.contains(g), generator=str(g))
    return rep


def toeplitz_suite(graph: KGraph, seed: int = 0, budget: int = DEFAULT_BUDGET, triples: int = RANDOM_TRIPLES) -> list[CheckReport]:
    rng = random.Random(seed)
    return [
        check_random_triples(graph, rng, triples),
        check_representation(graph, rng),
        check_delta_witnesses(graph, budget),
        check_ck_ideal_closure(graph),
    ]


# -- bimodule --------------------------------------------------------------------


def check_graph_correspondence(graph: KGraph) -> CheckReport:
    """k = 1: X is the graph correspondence, <e, f> = [e = f] p_{s(e)}."""
    rep = CheckReport("graph_correspondence")
    bm = Bimodule(graph, 1, None if graph.is_acyclic() else (1,))
    edges = [graph.edge(e) for e in sorted(graph.edges)]
    for e in edges:
        x = bm.element(1, (e, graph.vertex(e.s)))
        for f in edges:
            y = bm.element(1, (f, graph.vertex(f.s)))
            want = AlgebraElement.vertex(bm.sub, e.s) if e == f else AlgebraElement.zero(bm.sub)
            rep.record(inner_product(bm, x, y) == want, e=str(e), f=str(f))
    if is_locally_convex(graph):
        receiving = {v for v in graph.vertices if graph.edges_at(v, 1)}
        rep.record(set(h_jx(graph, 1)) == receiving, check="J_X vertices")
    return rep


def bimodule_suite(graph: KGraph, seed: int = 0, budget: int = DEFAULT_BUDGET) -> list[CheckReport]:
    out = []
    acyclic = graph.is_acyclic()
    lc = is_locally_convex(graph)
    top = 3 if acyclic else 2
    for i in range(1, graph.k + 1):
        bm = Bimodule(graph, i, None if acyclic else (2,) * graph.k)
        out.append(_tag(check_toeplitz_axioms(bm, "toeplitz"), i))
        if lc and acyclic:
            out.append(_tag(check_toeplitz_axioms(bm, "ck"), i))
        elif not lc:
            refused = CheckReport("ck_level_refused")
            try:
                bm.phi(AlgebraElement.unit(bm.sub), "ck")
                refused.record(False, detail="phi accepted a non locally convex graph")
            except NotLocallyConvex:
                refused.record(True)
            out.append(_tag(refused, i))
        for m in range(top + 1):
            for n in range(top + 1 - m):
                out.append(_tag(verify_omega_multiplicativity(bm, m, n), i))
        for n in range(top + 1):
            out.append(_tag(verify_omega_isometry(bm, n), i))
        out.append(_tag(verify_left_adjointable(bm, 1), i))
    if graph.k == 1:
        out.append(check_graph_correspondence(graph))
    return out


def _tag(report: CheckReport, color: int) -> CheckReport:
    report.name = f"{report.name}[color {color}]"
    return report


# -- Katsura ideal ---------------------------------------------------------------


def katsura_suite(graph: KGraph, seed: int = 0, budget: int = DEFAULT_BUDGET) -> list[CheckReport]:
    if not is_locally_convex(graph):
        return [_skip("katsura", "not locally convex")]
    if not graph.is_acyclic():
        return [_skip("katsura", "cyclic graph: quotient checks need a finite-dimensional algebra")]
    out = []
    for i in range(1, graph.k + 1):
        report = katsura_report(graph, i, budget)
        bm = Bimodule(graph, i)
        exp = CheckReport("generator_expansions")
        for a, op in zip(report.generators, report.expansions):
            exp.merge(verify_expansion(bm, op, a))
        out.append(_tag(exp, i))
        split = CheckReport("splitting_sum")
        pairs = CheckReport("fe_compact_expansion")
        for entry in report.B_tilde:
            if entry.F:
                split.merge(verify_splitting_sum(graph, i, entry.E.paths, entry.F))
            else:
                # E alone is exhaustive in Lambda: Delta^E lies in the ideal
                split.record(ck_ideal(graph).contains(delta(graph, entry.E.root, entry.E.paths)), E=str(entry.E))
        for v in graph.vertices:
            for E, F in extension_pairs(graph, i, v, budget):
                split.merge(verify_splitting_sum(graph, i, E, F))
                a = delta(bm.sub, v, [bm.lower(p) for p in E]) if E else AlgebraElement.vertex(bm.sub, v)
                pairs.merge(verify_expansion(bm, fe_compact_expansion(graph, i, E, F), a))
        out.append(_tag(split, i))
        out.append(_tag(pairs, i))
        homog = CheckReport("generators_grade_zero")
        for g in report.generators:
            homog.record(all(grade(m) == deg.zero(bm.sub.k) for m in g.terms), generator=str(g))
        out.append(_tag(homog, i))
        for r in (
            verify_covariance(bm, report),
            verify_kerpsi_perp(graph, i),
            verify_edge_exhaustive(graph, i),
            verify_phi_delta(graph, i),
            verify_report_ideal(graph, report),
        ):
            out.append(_tag(r, i))
    return out


# -- reduction certificates ----------------------------------------------------


def reduction_suite(graph: KGraph, seed: int = 0, budget: int = DEFAULT_BUDGET, max_l: int = REDUCTION_MAX_L) -> list[CheckReport]:
    if not graph.is_acyclic():
        return [_skip("reduction", "cyclic graph: certificates are verified in a finite-dimensional algebra")]
    certs = CheckReport("certificates")
    member = CheckReport("edge_level_membership")
    bound = CheckReport("node_ext_degree_bound")
    for v in graph.vertices:
        for F in enumerate_fe_sets(graph, v, graph.max_degree(), max_l=max_l, budget=budget):
            try:
                cert = reduce(graph, F)
                ok = verify_certificate(graph, cert)
            except KGraphError as exc:
                certs.record(False, F=str(F), error=f"{type(exc).__name__}: {exc}")
                continue
            certs.record(ok, F=str(F))
            member.record(in_edge_level_ideal(graph, F), F=str(F))
            for node in cert.root.walk():
                top = deg.zero(graph.k)
                for p in node.F:
                    top = deg.join(top, p.degree)
                for b in node.branches:
                    bound.record(all(deg.leq(a.degree, top) for a in b.ext), F=str(F), mu=str(b.mu))
    return [certs, member, bound]


SUITE_FUNCTIONS = {
    "combinatorics": combinatorics_suite,
    "toeplitz": toeplitz_suite,
    "bimodule": bimodule_suite,
    "katsura": katsura_suite,
    "reduction": reduction_suite,
}


def run_suite(name: str, graph: KGraph, seed: int = 0, budget: int = DEFAULT_BUDGET) -> dict[str, list[CheckReport]]:
    names = SUITES if name == "all" else (name,)
    if any(n not in SUITE_FUNCTIONS for n in names):
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return {n: SUITE_FUNCTIONS[n](graph, seed=seed, budget=budget) for n in names}
