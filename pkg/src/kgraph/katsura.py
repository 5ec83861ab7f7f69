"""Katsura ideal data for the bimodule X at color i.

On a finite locally convex graph the vertex set H_JX is {v : v Lambda^{e_i}
nonempty}; the condition 0 < |v Lambda^{e_i}| < oo that allows infinite
receivers collapses to nonemptiness.  The finite-exhaustive part of the data
lives in the complement of H_JX inside Lambda^i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraElement, Monomial, ck_ideal, delta, delta_closed_form, ideal_from_generators, is_homogeneous, mul
from .bimodule import Bimodule, BimoduleElement, CheckReport
from .combinatorics import DEFAULT_BUDGET, FESet, enumerate_edge_fe_sets, is_exhaustive, is_locally_convex, mce_of_set
from .errors import BudgetExceeded, NotAcyclic, NotLocallyConvex, PreconditionViolated
from .graph import KGraph, Path, restrict_to_complement

INFINITE_BRANCH = "not representable: every vertex of a finite graph receives finitely many edges"


def _require_lc(graph: KGraph) -> None:
    if not is_locally_convex(graph):
        raise NotLocallyConvex("Katsura data is computed for locally convex graphs")


def color_edges(graph: KGraph, v: str, i: int) -> list[Path]:
    """v Lambda^{e_i}."""
    return [graph.edge(e) for e in graph.edges_at(v, i)]


def ker_psi_vertices(graph: KGraph, i: int) -> list[str]:
    _require_lc(graph)
    return [v for v in graph.vertices if not graph.edges_at(v, i)]


def h_jx(graph: KGraph, i: int) -> list[str]:
    _require_lc(graph)
    return [v for v in graph.vertices if graph.edges_at(v, i)]


@dataclass
class CompactOperatorSum:
    """sum of c * Theta_{x, y} with x, y monomials of X."""

    terms: dict = field(default_factory=dict)

    def add(self, x: Monomial, y: Monomial, c) -> None:
        c = self.terms.get((x, y), 0) + Fraction(c)
        if c:
            self.terms[(x, y)] = c
        else:
            self.terms.pop((x, y), None)

    def apply(self, bm: Bimodule, g: BimoduleElement) -> BimoduleElement:
        """sum of c * x <y, g>."""
        G = bm.graph
        out = AlgebraElement(G)
        for (x, y), c in self.terms.items():
            ip = bm.phi_inverse(mul(AlgebraElement(G, {y: 1}).adjoint(), g.value))
            out = out + mul(AlgebraElement(G, {x: 1}), bm.phi(ip)).scale(c)
        return BimoduleElement(g.n, out, bm.color)

    def as_element(self, graph: KGraph) -> AlgebraElement:
        """The image under Theta_{x,y} -> x y^*."""
        out = AlgebraElement(graph)
        for (x, y), c in self.terms.items():
            out = out + mul(AlgebraElement(graph, {x: 1}), AlgebraElement(graph, {y: 1}).adjoint()).scale(c)
        return out

    def to_records(self) -> list[dict]:
        return [
            {"x": [str(x[0]), str(x[1])], "y": [str(y[0]), str(y[1])], "coeff": str(c)}
            for (x, y), c in sorted(self.terms.items(), key=lambda t: (str(t[0][0]), str(t[0][1])))
        ]


def _x(graph: KGraph, mu: Path) -> Monomial:
    return (mu, graph.vertex(mu.s))


def vertex_compact_expansion(graph: KGraph, i: int, v: str) -> CompactOperatorSum:
    """psi(s_v) as the sum of Theta_{s_lam, s_lam} over v Lambda^{e_i}."""
    op = CompactOperatorSum()
    for lam in color_edges(graph, v, i):
        op.add(_x(graph, lam), _x(graph, lam), 1)
    return op


def fe_compact_expansion(graph: KGraph, i: int, E, F) -> CompactOperatorSum:
    """Sum over G in E u F meeting F, and mu in MCE(G), of
    (-1)^(|G|+1) Theta_{s_mu, s_mu}.  E holds paths of Lambda^i (given as paths
    of Lambda) and F color-i edges, with E u F exhaustive at their range."""
    E, F = list(E), list(F)
    allp = E + F
    if not allp:
        raise PreconditionViolated("E and F are both empty")
    v = allp[0].r
    if any(p.r != v for p in allp):
        raise PreconditionViolated("E and F must share a range")
    if any(p.degree[i - 1] != 0 for p in E):
        raise PreconditionViolated("E must avoid color i")
    if any(p.degree != tuple(1 if c == i - 1 else 0 for c in range(graph.k)) for p in F):
        raise PreconditionViolated("F must consist of color-i edges")
    if not is_exhaustive(graph, allp, v):
        raise PreconditionViolated("E u F is not exhaustive")
    op = CompactOperatorSum()
    for size in range(1, len(allp) + 1):
        for G in itertools.combinations(allp, size):
            if not any(p in F for p in G):
                continue
            for mu in mce_of_set(graph, G):
                if mu.degree[i - 1] != 1:
                    raise AssertionError(f"{mu} has color-{i} degree {mu.degree[i - 1]}")
                op.add(_x(graph, mu), _x(graph, mu), (-1) ** (size + 1))
    return op


@dataclass
class BTildeEntry:
    E: FESet
    F: tuple[Path, ...]
    in_generator_list: bool


def _search_f(graph: KGraph, i: int, E: list[Path], v: str, budget: int):
    cands = color_edges(graph, v, i)
    if 2 ** len(cands) > budget:
        raise BudgetExceeded(f"{2 ** len(cands)} candidate sets F exceed the budget")
    for size in range(len(cands) + 1):
        for F in itertools.combinations(cands, size):
            if is_exhaustive(graph, E + list(F), v):
                return F
    return None


def complement_graph(graph: KGraph, i: int) -> tuple[Bimodule, KGraph]:
    bm = Bimodule(graph, i)
    return bm, restrict_to_complement(bm.sub, h_jx(graph, i))


def b_tilde(graph: KGraph, i: int, budget: int = DEFAULT_BUDGET) -> list[BTildeEntry]:
    """Edge-level finite exhaustive sets E of Lambda^i minus Lambda^i H_JX that
    extend to an exhaustive set E u F of Lambda with F of color i."""
    _require_lc(graph)
    _, sigma = complement_graph(graph, i)
    out = []
    for v in sigma.vertices:
        for E in enumerate_edge_fe_sets(sigma, v, budget=budget):
            lifted = [graph.path(p.word) for p in E.paths]
            F = _search_f(graph, i, lifted, v, budget)
            if F is None:
                continue
            out.append(BTildeEntry(FESet(v, lifted), tuple(F), bool(graph.edges_at(v, i))))
    return out


def extension_pairs(graph: KGraph, i: int, v: str, budget: int = DEFAULT_BUDGET) -> list[tuple[tuple[Path, ...], tuple[Path, ...]]]:
    """All (E, F) at v with E a set of edges of Lambda^i, F a nonempty set of
    color-i edges and E u F exhaustive in Lambda."""
    others = [graph.edge(e) for c in range(1, graph.k + 1) if c != i for e in graph.edges_at(v, c)]
    mine = color_edges(graph, v, i)
    if 2 ** (len(others) + len(mine)) > budget:
        raise BudgetExceeded("too many candidate pairs")
    out = []
    for a in range(len(others) + 1):
        for E in itertools.combinations(others, a):
            for b in range(1, len(mine) + 1):
                for F in itertools.combinations(mine, b):
                    if is_exhaustive(graph, list(E) + list(F), v):
                        out.append((E, F))
    return out


@dataclass
class KatsuraReport:
    color: int
    H_ker: list[str]
    H_JX: list[str]
    B_tilde: list[BTildeEntry]
    generators: list[AlgebraElement]
    expansions: list[CompactOperatorSum]
    infinite_branch: str = INFINITE_BRANCH

    def to_dict(self) -> dict:
        return {
            "color": self.color,
            "H_ker": list(self.H_ker),
            "H_JX": list(self.H_JX),
            "H_JX_infinite_receivers": self.infinite_branch,
            "B_tilde": [
                {"root": e.E.root, "E": [str(p) for p in e.E], "F": [str(p) for p in e.F], "in_generator_list": e.in_generator_list}
                for e in self.B_tilde
            ],
            "generators": [g.to_records() for g in self.generators],
            "expansions": [op.to_records() for op in self.expansions],
        }


def katsura_report(graph: KGraph, i: int, budget: int = DEFAULT_BUDGET) -> KatsuraReport:
    _require_lc(graph)
    bm = Bimodule(graph, i)
    H = h_jx(graph, i)
    entries = b_tilde(graph, i, budget)
    gens, exps = [], []
    for v in H:
        gens.append(AlgebraElement.vertex(bm.sub, v))
        exps.append(vertex_compact_expansion(graph, i, v))
    for e in entries:
        if e.in_generator_list:
            gens.append(delta(bm.sub, e.E.root, [bm.lower(p) for p in e.E]))
            exps.append(fe_compact_expansion(graph, i, e.E.paths, e.F))
    for g in gens:
        if not is_homogeneous(g, (0,) * bm.sub.k):
            raise AssertionError(f"generator {g} is not of grade 0")
    return KatsuraReport(i, ker_psi_vertices(graph, i), H, entries, gens, exps)


# -- verification ----------------------------------------------------------------


def _acyclic(graph: KGraph) -> None:
    if not graph.is_acyclic():
        raise NotAcyclic("quotient checks need an acyclic graph")


def verify_expansion(bm: Bimodule, op: CompactOperatorSum, a: AlgebraElement) -> CheckReport:
    """op(g) = phi(a) g modulo the Cuntz-Krieger ideal, for every generator g of X."""
    _acyclic(bm.graph)
    ideal = ck_ideal(bm.graph)
    rep = CheckReport("compact_expansion")
    left = bm.phi(a)
    for g in bm.generators(1):
        x = bm.element(1, g)
        lhs = op.apply(bm, x).value
        rhs = mul(left, x.value)
        rep.record(ideal.contains(lhs - rhs), g=str(g), lhs=str(lhs), rhs=str(rhs))
    return rep


def verify_splitting_sum(graph: KGraph, i: int, E, F) -> CheckReport:
    """Delta^E (expanded) equals the alternating sum over sets meeting F,
    modulo the Cuntz-Krieger ideal."""
    _acyclic(graph)
    E, F = list(E), list(F)
    v = (E + F)[0].r
    rep = CheckReport("splitting_sum")
    lhs = delta_closed_form(graph, v, E)
    rhs = fe_compact_expansion(graph, i, E, F).as_element(graph)
    rep.record(ck_ideal(graph).contains(lhs - rhs), E=[str(p) for p in E], F=[str(p) for p in F], lhs=str(lhs), rhs=str(rhs))
    return rep


def verify_covariance(bm: Bimodule, report: KatsuraReport) -> CheckReport:
    """(iota, phi)^(1)(psi(a)) = phi(a) modulo the ideal, for each generator a
    and for b a c with b, c monomials of Lambda^i."""
    _acyclic(bm.graph)
    ideal = ck_ideal(bm.graph)
    rep = CheckReport("cp_covariance")
    monos = [AlgebraElement(bm.sub, {m: 1}) for m in bm.sub_monomials]
    for a, op in zip(report.generators, report.expansions):
        image = op.as_element(bm.graph)
        rep.record(ideal.contains(image - bm.phi(a)), generator=str(a))
        for b in monos:
            left = mul(bm.phi(b), image)
            for c in monos:
                lhs = mul(left, bm.phi(c))
                rhs = bm.phi(mul(mul(b, a), c))
                rep.record(ideal.contains(lhs - rhs), generator=str(a), b=str(b), c=str(c))
    return rep


def verify_kerpsi_perp(graph: KGraph, i: int) -> CheckReport:
    """s_v m s_w = 0 in the formal algebra of Lambda^i for v in H_JX, w with no
    color-i edge, and every monomial m."""
    bm = Bimodule(graph, i)
    rep = CheckReport("kerpsi_perp")
    for v in h_jx(graph, i):
        sv = AlgebraElement.vertex(bm.sub, v)
        for w in ker_psi_vertices(graph, i):
            sw = AlgebraElement.vertex(bm.sub, w)
            for m in bm.sub_monomials:
                prod = mul(mul(sv, AlgebraElement(bm.sub, {m: 1})), sw)
                rep.record(prod.is_zero(), v=v, w=w, m=str(m))
    return rep


def verify_edge_exhaustive(graph: KGraph, i: int) -> CheckReport:
    """v Lambda^{e_i} is exhaustive when nonempty, hence s_v = sum s_lam s_lam^*
    in the quotient."""
    rep = CheckReport("color_edges_exhaustive")
    ideal = ck_ideal(graph) if graph.is_acyclic() else None
    for v in h_jx(graph, i):
        es = color_edges(graph, v, i)
        rep.record(is_exhaustive(graph, es, v), v=v, check="exhaustive")
        if ideal is not None:
            total = AlgebraElement(graph)
            for lam in es:
                total = total + AlgebraElement.projection(graph, lam)
            rep.record(ideal.contains(AlgebraElement.vertex(graph, v) - total), v=v, check="sum of range projections")
    return rep


def verify_phi_delta(graph: KGraph, i: int) -> CheckReport:
    """phi(Delta^E over Lambda^i) = Delta^E over Lambda for E inside Lambda^i."""
    bm = Bimodule(graph, i)
    rep = CheckReport("phi_delta")
    for v in bm.sub.vertices:
        for E in enumerate_edge_fe_sets(bm.sub, v):
            lhs = bm.phi(delta(bm.sub, v, E.paths))
            rhs = delta(graph, v, [bm.lift(p) for p in E.paths])
            rep.record(lhs == rhs, E=str(E))
    return rep


def verify_report_ideal(graph: KGraph, report: KatsuraReport) -> CheckReport:
    """The ideal generated by the report's generators is closed under
    multiplication by monomials and adjoints."""
    bm = Bimodule(graph, report.color)
    rep = CheckReport("report_ideal_closure")
    ideal = ideal_from_generators(bm.sub, report.generators, verify=False)
    bad = ideal.closure_failures()
    rep.record(not bad, failures=bad[:5])
    for g in report.generators:
        rep.record(ideal.contains(g), generator=str(g))
    return rep
