"""The bimodule X over the algebra of Lambda^i, and its tensor powers.

Lambda^i is Lambda with the color-i edges removed.  phi relabels a path of
Lambda^i as the same path of Lambda.  X_n is spanned by the monomials (lam, mu)
of Lambda with d(lam)_i = n and d(mu)_i = 0; X = X_1.  The inner product is
<x, y> = phi^{-1}(x^* y) and both actions go through phi.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import degree as deg
from .algebra import AlgebraElement, Monomial, all_monomials, ck_ideal, mul
from .combinatorics import is_locally_convex
from .errors import DegreeMismatch, LengthMismatch, MixedDegrees, NotAcyclic, NotInPhiImage, NotLocallyConvex
from .graph import KGraph, Path, remove_color
from .linalg import RowSpace
from .pathspace import TruncatedRep, rep_element


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    skipped: str = ""

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, passed: bool, **detail) -> None:
        self.checked += 1
        if not passed:
            self.failures.append(detail)

    def merge(self, other: CheckReport) -> CheckReport:
        self.checked += other.checked
        self.failures.extend(other.failures)
        return self

    def summary(self) -> dict:
        if self.skipped:
            return {"check": self.name, "status": "skipped", "reason": self.skipped}
        return {"check": self.name, "checked": self.checked, "status": "pass" if self.ok else "fail", "failures": self.failures[:20]}


class Bimodule:
    def __init__(self, graph: KGraph, color: int, cap: deg.Degree | None = None):
        if not 1 <= color <= graph.k:
            raise ValueError(f"color {color} outside 1..{graph.k}")
        self.graph = graph
        self.color = color
        self.sub = remove_color(graph, color)
        self.cap = cap

    # -- phi ----------------------------------------------------------------
    def lift(self, p: Path) -> Path:
        return self.graph.vertex(p.r) if p.is_vertex else self.graph.path(p.word)

    def lower(self, p: Path) -> Path:
        if p.degree[self.color - 1] != 0:
            raise NotInPhiImage(f"{p} uses color {self.color}")
        return self.sub.vertex(p.r) if p.is_vertex else self.sub.path(p.word)

    def check_ck_level(self) -> None:
        if not is_locally_convex(self.graph):
            raise NotLocallyConvex("the Cuntz-Krieger level map needs a locally convex graph")

    def phi(self, a: AlgebraElement, level: str = "toeplitz") -> AlgebraElement:
        if level == "ck":
            self.check_ck_level()
        return AlgebraElement(self.graph, {(self.lift(l), self.lift(m)): c for (l, m), c in a.terms.items()})

    def phi_inverse(self, a: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.sub, {(self.lower(l), self.lower(m)): c for (l, m), c in a.terms.items()})

    def in_phi_image(self, m: Monomial) -> bool:
        i = self.color - 1
        return m[0].degree[i] == 0 and m[1].degree[i] == 0

    # -- generators ---------------------------------------------------------
    def _paths(self) -> list[Path]:
        if self.cap is None and not self.graph.is_acyclic():
            raise NotAcyclic("cyclic graphs need an explicit degree cap")
        return self.graph.all_paths(None, self.cap)

    def generators(self, n: int) -> list[Monomial]:
        """Monomials (lam, mu) spanning X_n."""
        i = self.color - 1
        by_source: dict[str, list[Path]] = {}
        for p in self._paths():
            by_source.setdefault(p.s, []).append(p)
        out = []
        for v in self.graph.vertices:
            ps = by_source.get(v, [])
            out.extend((l, m) for l in ps if l.degree[i] == n for m in ps if m.degree[i] == 0)
        return out

    @cached_property
    def sub_monomials(self) -> list[Monomial]:
        cap = None if self.cap is None else deg.drop(self.cap, self.color)
        return all_monomials(self.sub, cap)

    def element(self, n: int, m: Monomial) -> BimoduleElement:
        return BimoduleElement(n, AlgebraElement(self.graph, {m: 1}), self.color)


@dataclass(frozen=True)
class BimoduleElement:
    n: int
    value: AlgebraElement
    color: int

    def __post_init__(self):
        i = self.color - 1
        for lam, mu in self.value.terms:
            if lam.degree[i] != self.n or mu.degree[i] != 0:
                raise DegreeMismatch(f"({lam}, {mu}) is not in X_{self.n}")


def phi_apply(bm: Bimodule, a: AlgebraElement, level: str = "toeplitz") -> AlgebraElement:
    return bm.phi(a, level)


def phi_inverse(bm: Bimodule, a: AlgebraElement) -> AlgebraElement:
    return bm.phi_inverse(a)


def inner_product(bm: Bimodule, x: BimoduleElement, y: BimoduleElement) -> AlgebraElement:
    if x.n != y.n:
        raise MixedDegrees(f"X_{x.n} against X_{y.n}")
    return bm.phi_inverse(mul(x.value.adjoint(), y.value))


def act_left(bm: Bimodule, a: AlgebraElement, x: BimoduleElement) -> BimoduleElement:
    return BimoduleElement(x.n, mul(bm.phi(a), x.value), x.color)


def act_right(bm: Bimodule, x: BimoduleElement, a: AlgebraElement) -> BimoduleElement:
    return BimoduleElement(x.n, mul(x.value, bm.phi(a)), x.color)


# -- tensor powers -------------------------------------------------------------


@dataclass
class TensorElement:
    """A combination of elementary tensors x_1 (x) ... (x) x_n of X-monomials.
    Length 0 carries an element of the algebra of Lambda^i instead."""

    n: int
    terms: dict = field(default_factory=dict)
    scalar: AlgebraElement | None = None

    def __post_init__(self):
        self.terms = {t: Fraction(c) for t, c in self.terms.items() if c}

    def add(self, other: TensorElement, c=1) -> TensorElement:
        if other.n != self.n:
            raise LengthMismatch(f"{self.n} against {other.n}")
        if self.n == 0:
            a = self.scalar
            b = other.scalar.scale(c)
            return TensorElement(0, scalar=b if a is None else a + b)
        out = dict(self.terms)
        for t, x in other.terms.items():
            out[t] = out.get(t, 0) + c * x
        return TensorElement(self.n, out)


def omega(bm: Bimodule, n: int, g: Monomial) -> TensorElement:
    """Split the X_n generator g = (lam, mu) into n elementary factors by peeling
    off the color-i edges of lam one at a time."""
    lam, mu = g
    i = bm.color - 1
    if lam.degree[i] != n or mu.degree[i] != 0:
        raise DegreeMismatch(f"({lam}, {mu}) is not a generator of X_{n}")
    if n == 0:
        return TensorElement(0, scalar=bm.phi_inverse(AlgebraElement(bm.graph, {g: 1})))
    if n == 1:
        return TensorElement(1, {(g,): 1})
    G = bm.graph
    ei = deg.unit(G.k, bm.color)
    head = G.segment(lam, deg.zero(G.k), ei)
    rest = G.segment(lam, ei, lam.degree)
    tail = omega(bm, n - 1, (rest, mu))
    first = (head, G.vertex(head.s))
    return TensorElement(n, {(first,) + t: c for t, c in tail.terms.items()})


def omega_element(bm: Bimodule, x: BimoduleElement) -> TensorElement:
    if x.n == 0:
        return TensorElement(0, scalar=bm.phi_inverse(x.value))
    out = TensorElement(x.n)
    for m, c in x.value.terms.items():
        out = out.add(omega(bm, x.n, m), c)
    return out


def _elementary_ip(bm: Bimodule, xs: tuple, ys: tuple) -> AlgebraElement:
    G = bm.graph
    a = bm.phi_inverse(mul(AlgebraElement(G, {xs[0]: 1}).adjoint(), AlgebraElement(G, {ys[0]: 1})))
    for x, y in zip(xs[1:], ys[1:]):
        inner = mul(mul(AlgebraElement(G, {x: 1}).adjoint(), bm.phi(a)), AlgebraElement(G, {y: 1}))
        a = bm.phi_inverse(inner)
    return a


def tensor_inner_product(bm: Bimodule, s: TensorElement, t: TensorElement) -> AlgebraElement:
    """<x1 (x) ... (x) xn, y1 (x) ... (x) yn>, evaluated left to right with
    <x (x) y, w (x) z> = <y, <x, w> z>."""
    if s.n != t.n:
        raise LengthMismatch(f"{s.n} against {t.n}")
    if s.n == 0:
        return mul(s.scalar.adjoint(), t.scalar)
    out = AlgebraElement(bm.sub)
    for xs, c in s.terms.items():
        for ys, d in t.terms.items():
            out = out + _elementary_ip(bm, xs, ys).scale(c * d)
    return out


def glue(bm: Bimodule, s: TensorElement, t: TensorElement) -> TensorElement:
    """s (x) t, absorbing length-0 factors through the actions."""
    G = bm.graph
    if s.n == 0 and t.n == 0:
        return TensorElement(0, scalar=mul(s.scalar, t.scalar))
    if s.n == 0:
        a = bm.phi(s.scalar)
        out = {}
        for ys, c in t.terms.items():
            for m, d in mul(a, AlgebraElement(G, {ys[0]: 1})).terms.items():
                key = (m,) + ys[1:]
                out[key] = out.get(key, 0) + c * d
        return TensorElement(t.n, out)
    if t.n == 0:
        b = bm.phi(t.scalar)
        out = {}
        for xs, c in s.terms.items():
            for m, d in mul(AlgebraElement(G, {xs[-1]: 1}), b).terms.items():
                key = xs[:-1] + (m,)
                out[key] = out.get(key, 0) + c * d
        return TensorElement(s.n, out)
    return TensorElement(s.n + t.n, {xs + ys: c * d for xs, c in s.terms.items() for ys, d in t.terms.items()})


def x_inner(bm: Bimodule, n: int, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return inner_product(bm, BimoduleElement(n, a, bm.color), BimoduleElement(n, b, bm.color))


def verify_omega_multiplicativity(bm: Bimodule, m: int, n: int) -> CheckReport:
    """Gram test: <Omega_m(x) (x) Omega_n(y), Omega_{m+n}(g)> = <xy, g> for all
    generators x of X_m, y of X_n and g of X_{m+n}."""
    rep = CheckReport(f"omega_multiplicativity({m},{n})")
    G = bm.graph
    targets = [(g, omega(bm, m + n, g)) for g in bm.generators(m + n)]
    ys = [(y, omega(bm, n, y)) for y in bm.generators(n)]
    for x in bm.generators(m):
        ox = omega(bm, m, x)
        for y, oy in ys:
            xy = mul(AlgebraElement(G, {x: 1}), AlgebraElement(G, {y: 1}))
            glued = glue(bm, ox, oy)
            for g, og in targets:
                lhs = tensor_inner_product(bm, glued, og)
                rhs = x_inner(bm, m + n, xy, AlgebraElement(G, {g: 1}))
                rep.record(lhs == rhs, x=str(x), y=str(y), g=str(g), lhs=str(lhs), rhs=str(rhs))
    return rep


def verify_omega_isometry(bm: Bimodule, n: int) -> CheckReport:
    rep = CheckReport(f"omega_isometry({n})")
    G = bm.graph
    gens = bm.generators(n)
    om = {g: omega(bm, n, g) for g in gens}
    for g in gens:
        for h in gens:
            lhs = tensor_inner_product(bm, om[g], om[h])
            rhs = x_inner(bm, n, AlgebraElement(G, {g: 1}), AlgebraElement(G, {h: 1}))
            rep.record(lhs == rhs, g=str(g), h=str(h), lhs=str(lhs), rhs=str(rhs))
    return rep


def verify_left_adjointable(bm: Bimodule, n: int = 1) -> CheckReport:
    """<a x, y> = <x, a^* y> for monomials a of Lambda^i and generators x, y."""
    rep = CheckReport(f"left_adjointable({n})")
    G = bm.graph
    gens = [bm.element(n, g) for g in bm.generators(n)]
    for m in bm.sub_monomials:
        a = AlgebraElement(bm.sub, {m: 1})
        for x in gens:
            ax = act_left(bm, a, x)
            for y in gens:
                lhs = inner_product(bm, ax, y)
                rhs = inner_product(bm, x, act_left(bm, a.adjoint(), y))
                rep.record(lhs == rhs, a=str(m), x=str(x.value), y=str(y.value))
    return rep


def check_toeplitz_axioms(bm: Bimodule, level: str = "toeplitz", rep_cap: deg.Degree | None = None) -> CheckReport:
    """(T1) psi(x a) = psi(x) pi(a), (T2) psi(a x) = pi(a) psi(x) and
    (T3) psi(x)^* psi(y) = pi(<x, y>) for psi the inclusion of X and pi = phi.

    At the Toeplitz level equality is exact in the formal algebra, and T3 is
    also checked in the truncated path-space representation.  At the
    Cuntz-Krieger level equality is taken modulo the Cuntz-Krieger ideal, and
    phi must carry the ideal of Lambda^i into the ideal of Lambda."""
    if level not in ("toeplitz", "ck"):
        raise ValueError(level)
    G = bm.graph
    if level == "ck":
        bm.check_ck_level()
        if not G.is_acyclic():
            raise NotAcyclic("quotient checks need an acyclic graph")
        big = ck_ideal(G)

        def same(a, b):
            return big.contains(a - b)
    else:

        def same(a, b):
            return a == b

    rep = CheckReport(f"toeplitz_axioms[{level}]")
    gens = [bm.element(1, g) for g in bm.generators(1)]
    monos = [AlgebraElement(bm.sub, {m: 1}) for m in bm.sub_monomials]
    for x in gens:
        for a in monos:
            rep.record(same(act_right(bm, x, a).value, mul(x.value, bm.phi(a))), axiom="T1", x=str(x.value), a=str(a))
            rep.record(same(act_left(bm, a, x).value, mul(bm.phi(a), x.value)), axiom="T2", x=str(x.value), a=str(a))
        for y in gens:
            rep.record(same(mul(x.value.adjoint(), y.value), bm.phi(inner_product(bm, x, y))), axiom="T3", x=str(x.value), y=str(y.value))
    if level == "toeplitz" and G.is_acyclic():
        cap = rep_cap or deg.add(G.max_degree(), G.max_degree())
        tr = TruncatedRep(G, tuple(cap), G.max_degree())
        safe = [tr.index[p] for p in tr.safe_zone()]
        for x in gens:
            rx = rep_element(x.value, tr)
            for y in gens:
                lhs = rx.transpose() @ rep_element(y.value, tr)
                rhs = rep_element(bm.phi(inner_product(bm, x, y)), tr)
                ok = all(lhs.apply({j: Fraction(1)}) == rhs.apply({j: Fraction(1)}) for j in safe)
                rep.record(ok, axiom="T3-rep", x=str(x.value), y=str(y.value))
    if level == "ck":
        small = ck_ideal(bm.sub)
        for b in small.basis():
            rep.record(big.contains(bm.phi(b)), axiom="phi-ideal", element=str(b))
    return rep


def xxstar_in_phi_image(bm: Bimodule) -> bool:
    """Whether x y^* lies in phi(C*(Lambda^i)) + ideal for all generators x, y
    of X, decided in the Cuntz-Krieger quotient of an acyclic graph."""
    return not xxstar_failures(bm)


def xxstar_failures(bm: Bimodule) -> list[tuple[Monomial, Monomial]]:
    bm.check_ck_level()
    G = bm.graph
    if not G.is_acyclic():
        raise NotAcyclic("quotient checks need an acyclic graph")
    ideal = ck_ideal(G)

    def project(a: AlgebraElement) -> dict:
        return {m: c for m, c in a.terms.items() if not bm.in_phi_image(m)}

    space = RowSpace(project(b) for b in ideal.basis())
    bad = []
    gens = bm.generators(1)
    for x in gens:
        for y in gens:
            m = mul(AlgebraElement(G, {x: 1}), AlgebraElement(G, {y: 1}).adjoint())
            if not space.contains(project(m)):
                bad.append((x, y))
    return bad


def xxstar_formal(bm: Bimodule) -> bool:
    """Toeplitz-level version for any graph (with a cap when cyclic): whether
    every x y^* is literally a combination of phi-image monomials."""
    G = bm.graph
    gens = bm.generators(1)
    for x in gens:
        for y in gens:
            m = mul(AlgebraElement(G, {x: 1}), AlgebraElement(G, {y: 1}).adjoint())
            if any(not bm.in_phi_image(t) for t in m.terms):
                return False
    return True
