"""The formal Toeplitz-Cuntz-Krieger algebra of a finite k-graph.

Elements are finite rational combinations of monomials (lam, mu), standing for
q_lam q_mu^*, with s(lam) = s(mu).  Products are put in normal form by

    (lam, mu)(nu, eta) = sum over (alpha, beta) in Lambda^min(mu, nu) of (lam alpha, eta beta)

and the adjoint swaps the two paths.  For acyclic graphs the span of all
monomials is finite dimensional, and the Cuntz-Krieger ideal can be computed
exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import degree as deg
from .combinatorics import FESet, common_range, enumerate_edge_fe_sets, enumerate_fe_sets, lambda_min, mce_of_set
from .errors import ClosedFormDisagreement, GraphMismatch, NotAcyclic, RangeMismatch
from .graph import KGraph, Path
from .linalg import RowSpace

Monomial = tuple[Path, Path]


def _mkey(m: Monomial):
    return (m[0].sort_key(), m[1].sort_key())


class AlgebraElement:
    """Immutable finite combination of monomials with Fraction coefficients."""

    __slots__ = ("graph", "terms", "_hash")

    def __init__(self, graph: KGraph, terms: dict | None = None):
        self.graph = graph
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                if m[0].s != m[1].s:
                    raise ValueError(f"monomial ({m[0]}, {m[1]}) has mismatched sources")
                clean[m] = Fraction(c)
        self.terms: dict[Monomial, Fraction] = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, graph: KGraph) -> AlgebraElement:
        return cls(graph)

    @classmethod
    def monomial(cls, graph: KGraph, lam: Path, mu: Path, coeff=1) -> AlgebraElement:
        return cls(graph, {(lam, mu): coeff})

    @classmethod
    def vertex(cls, graph: KGraph, v: str) -> AlgebraElement:
        p = graph.vertex(v)
        return cls(graph, {(p, p): 1})

    @classmethod
    def q(cls, graph: KGraph, lam: Path) -> AlgebraElement:
        """The partial isometry q_lam = (lam, s(lam))."""
        return cls(graph, {(lam, graph.vertex(lam.s)): 1})

    @classmethod
    def projection(cls, graph: KGraph, lam: Path) -> AlgebraElement:
        """q_lam q_lam^*."""
        return cls(graph, {(lam, lam): 1})

    @classmethod
    def unit(cls, graph: KGraph) -> AlgebraElement:
        return cls(graph, {(graph.vertex(v), graph.vertex(v)): 1 for v in graph.vertices})

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: AlgebraElement) -> None:
        if other.graph is not self.graph:
            raise GraphMismatch("elements live over different graphs")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return AlgebraElement(self.graph, out)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.graph, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def scale(self, c) -> AlgebraElement:
        return AlgebraElement(self.graph, {m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def adjoint(self) -> AlgebraElement:
        return AlgebraElement(self.graph, {(mu, lam): c for (lam, mu), c in self.terms.items()})

    @property
    def star(self) -> AlgebraElement:
        return self.adjoint()

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.graph is other.graph and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def support(self) -> list[Monomial]:
        return sorted(self.terms, key=_mkey)

    def support_degree(self) -> deg.Degree:
        """Join of the degrees of all paths appearing in the support."""
        d = deg.zero(self.graph.k)
        for lam, mu in self.terms:
            d = deg.join(d, deg.join(lam.degree, mu.degree))
        return d

    def left_degree(self) -> deg.Degree:
        d = deg.zero(self.graph.k)
        for lam, _ in self.terms:
            d = deg.join(d, lam.degree)
        return d

    def to_records(self) -> list[dict]:
        return [{"lambda": str(lam), "mu": str(mu), "coeff": str(c)} for (lam, mu), c in sorted(self.terms.items(), key=lambda t: _mkey(t[0]))]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (lam, mu), c in sorted(self.terms.items(), key=lambda t: _mkey(t[0])):
            parts.append(f"{c}*({lam},{mu})")
        return " + ".join(parts)

    __repr__ = __str__


def element_from_records(graph: KGraph, records: Iterable[dict]) -> AlgebraElement:
    terms = {}
    for r in records:
        m = (graph.path(r["lambda"]), graph.path(r["mu"]))
        terms[m] = terms.get(m, 0) + Fraction(r["coeff"])
    return AlgebraElement(graph, terms)


def monomial_product(graph: KGraph, a: Monomial, b: Monomial) -> list[Monomial]:
    lam, mu = a
    nu, eta = b
    return [(graph.compose(lam, alpha), graph.compose(eta, beta)) for alpha, beta in lambda_min(graph, mu, nu)]


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    g = a.graph
    out: dict[Monomial, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            c = ca * cb
            for m in monomial_product(g, ma, mb):
                out[m] = out.get(m, 0) + c
    return AlgebraElement(g, out)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return a.adjoint()


def product(elements: Iterable[AlgebraElement], graph: KGraph) -> AlgebraElement:
    out = AlgebraElement.unit(graph)
    for e in elements:
        out = mul(out, e)
    return out


def delta_product(graph: KGraph, v: str, E: Iterable[Path]) -> AlgebraElement:
    """prod over lam in E of (q_v - q_lam q_lam^*), by repeated multiplication."""
    qv = AlgebraElement.vertex(graph, v)
    out = qv
    for lam in E:
        if lam.r != v:
            raise RangeMismatch(f"{lam} does not have range {v}")
        out = mul(out, qv - AlgebraElement.projection(graph, lam))
    return out


def delta_closed_form(graph: KGraph, v: str, E: Iterable[Path]) -> AlgebraElement:
    """q_v plus, for each nonempty G in E and each lam in MCE(G), (-1)^|G| (lam, lam)."""
    E = list(E)
    terms = {(graph.vertex(v), graph.vertex(v)): Fraction(1)}
    for size in range(1, len(E) + 1):
        for G in itertools.combinations(E, size):
            for lam in mce_of_set(graph, G):
                terms[(lam, lam)] = terms.get((lam, lam), 0) + (-1) ** size
    return AlgebraElement(graph, terms)


def delta(graph: KGraph, v: str | None, E) -> AlgebraElement:
    """Delta(q)^E, computed two ways which must agree."""
    if isinstance(E, FESet):
        v, E = E.root, list(E.paths)
    E = list(E)
    if v is None:
        v = common_range(E)
    for lam in E:
        if lam.r != v:
            raise RangeMismatch(f"{lam} does not have range {v}")
    a = delta_product(graph, v, E)
    b = delta_closed_form(graph, v, E)
    if a != b:
        raise ClosedFormDisagreement(f"product {a} differs from closed form {b}")
    return a


def grade(m: Monomial) -> tuple[int, ...]:
    return deg.sub(m[0].degree, m[1].degree)


def spectral_decompose(a: AlgebraElement) -> dict[tuple[int, ...], AlgebraElement]:
    parts: dict = {}
    for m, c in a.terms.items():
        parts.setdefault(grade(m), {})[m] = c
    return {g: AlgebraElement(a.graph, t) for g, t in sorted(parts.items())}


def is_homogeneous(a: AlgebraElement, of_grade=None) -> bool:
    grades = set(spectral_decompose(a))
    if not grades:
        return True
    if len(grades) != 1:
        return False
    return of_grade is None or grades == {tuple(of_grade)}


def all_monomials(graph: KGraph, cap: deg.Degree | None = None) -> list[Monomial]:
    """Every monomial (lam, mu); needs a degree cap on cyclic graphs."""
    by_source: dict[str, list[Path]] = {}
    for p in graph.all_paths(None, cap):
        by_source.setdefault(p.s, []).append(p)
    out = []
    for v in graph.vertices:
        ps = by_source.get(v, [])
        out.extend((a, b) for a in ps for b in ps)
    return sorted(out, key=_mkey)


def as_vector(a: AlgebraElement) -> dict:
    return dict(a.terms)


@dataclass
class IdealBasis:
    """Row-reduced basis of a two-sided ideal of the formal algebra of an
    acyclic graph."""

    graph: KGraph
    generators: list[AlgebraElement]
    space: RowSpace
    monomials: list[Monomial] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.space.dim

    def contains(self, a: AlgebraElement) -> bool:
        if a.graph is not self.graph:
            raise GraphMismatch("element and ideal live over different graphs")
        return self.space.contains(a.terms)

    def basis(self) -> list[AlgebraElement]:
        return [AlgebraElement(self.graph, v) for v in self.space.basis()]

    def closure_failures(self) -> list[str]:
        """Products of basis vectors with monomials, and adjoints, that leave
        the span.  Empty for a genuine two-sided *-ideal."""
        bad = []
        for b in self.basis():
            if not self.contains(b.adjoint()):
                bad.append(f"adjoint of {b}")
            for m in self.monomials:
                x = AlgebraElement(self.graph, {m: 1})
                if not self.contains(mul(x, b)):
                    bad.append(f"{m} * {b}")
                if not self.contains(mul(b, x)):
                    bad.append(f"{b} * {m}")
        return bad


def ideal_from_generators(graph: KGraph, generators: Iterable[AlgebraElement], verify: bool = True) -> IdealBasis:
    """The two-sided ideal generated by the given elements.

    The left ideal L = span{m g} is built first; then span{l m} over a basis of L
    is a two-sided ideal, since left multiples of l m are (m' l) m."""
    if not graph.is_acyclic():
        raise NotAcyclic("ideal computations need a finite-dimensional algebra")
    gens = list(generators)
    monos = all_monomials(graph)
    mono_elems = [AlgebraElement(graph, {m: 1}) for m in monos]
    left = RowSpace()
    for g in gens:
        for x in mono_elems:
            left.add(mul(x, g).terms)
    two = RowSpace()
    for row in left.basis():
        l = AlgebraElement(graph, row)
        for x in mono_elems:
            two.add(mul(l, x).terms)
    ideal = IdealBasis(graph, gens, two, monos)
    if verify:
        bad = ideal.closure_failures()
        if bad:
            raise AssertionError(f"ideal is not closed: {bad[:3]}")
    return ideal


def ck_generators(graph: KGraph, full: bool = False) -> list[AlgebraElement]:
    """Delta(q)^E for every edge-level finite exhaustive set E (or for every
    finite exhaustive set of paths when full is set)."""
    gens = []
    for v in graph.vertices:
        if full:
            sets = enumerate_fe_sets(graph, v, graph.max_degree())
        else:
            sets = enumerate_edge_fe_sets(graph, v)
        gens.extend(delta(graph, E.root, E.paths) for E in sets)
    return gens


def ck_ideal(graph: KGraph, full: bool = False, verify: bool = True) -> IdealBasis:
    if not graph.is_acyclic():
        raise NotAcyclic("the Cuntz-Krieger ideal is only computed for acyclic graphs")
    cache = graph.__dict__.setdefault("_ck_cache", {})
    key = (full,)
    if key not in cache:
        cache[key] = ideal_from_generators(graph, ck_generators(graph, full), verify)
    return cache[key]


def ideal_contains(ideal: IdealBasis, a: AlgebraElement) -> bool:
    return ideal.contains(a)


def ck_equal(a: AlgebraElement, b: AlgebraElement) -> bool:
    """Equality in the Cuntz-Krieger quotient (acyclic graphs only)."""
    a._check(b)
    return ck_ideal(a.graph).contains(a - b)
