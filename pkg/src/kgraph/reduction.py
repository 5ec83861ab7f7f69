"""Reduction of Delta^F for a finite exhaustive set of paths F to Deltas of
finite exhaustive sets of edges, with a checkable certificate.

Work happens in Sigma = Lambda minus Lambda H (paths with source outside H).
A set of edges is a leaf (this covers every set with L(F) = 1).  Otherwise the
node records I(F), the set of initial edges of members
of F, and for each mu in I(F) the set Ext(mu; F) at s(mu).  When s(mu) itself
lies in Ext(mu; F) the branch is degenerate (its Delta is zero); otherwise the
branch recurses on Ext(mu; F), whose L-value is strictly smaller.  Two
identities justify the step:

    prod_{lam in Ext} (s_v - s_{mu lam} s_{mu lam}^*) = (s_v - s_mu s_mu^*) + s_mu Delta^Ext s_mu^*
    Delta^F = Delta^F prod_mu prod_{lam in Ext(mu;F)} (s_v - s_{mu lam} s_{mu lam}^*)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import degree as deg
from .algebra import AlgebraElement, ck_ideal, delta, delta_product, ideal_from_generators, mul
from .combinatorics import FESet, common_range, ext, is_exhaustive, l_value
from .errors import IdentityFailure, LBudgetExceeded, NotAcyclic, NotExhaustive
from .graph import KGraph, Path, restrict_to_complement, sort_paths

DEFAULT_L_BUDGET = 6


def is_edge_level(F: Iterable[Path]) -> bool:
    return all(sum(p.degree) == 1 for p in F)


def initial_segments(graph: KGraph, F: Iterable[Path]) -> list[Path]:
    """I(F): the first edge of each color appearing in members of F."""
    F = list(F)
    common_range(F)
    out = set()
    for lam in F:
        for j in range(graph.k):
            if lam.degree[j] >= 1:
                out.add(graph.segment(lam, deg.zero(graph.k), deg.unit(graph.k, j + 1)))
    return sort_paths(out)


@dataclass
class Branch:
    mu: Path
    ext: tuple[Path, ...]
    degenerate: bool
    child: "ReductionNode | None" = None


@dataclass
class ReductionNode:
    root: str
    F: tuple[Path, ...]
    L: int
    I: tuple[Path, ...] = ()
    branches: list[Branch] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return is_edge_level(self.F)

    def walk(self):
        yield self
        for b in self.branches:
            if b.child is not None:
                yield from b.child.walk()

    def to_dict(self) -> dict:
        out = {"root": self.root, "F": [str(p) for p in self.F], "L": self.L}
        if not self.is_leaf:
            out["I"] = [str(p) for p in self.I]
            out["branches"] = [
                {"mu": str(b.mu), "ext": [str(p) for p in b.ext], "degenerate": b.degenerate, "child": None if b.child is None else b.child.to_dict()}
                for b in self.branches
            ]
        return out


@dataclass
class ReductionCertificate:
    H: tuple[str, ...]
    root: ReductionNode

    def to_dict(self) -> dict:
        return {"H": list(self.H), "tree": self.root.to_dict()}


def reduce(graph: KGraph, F, H: Iterable[str] = (), l_budget: int = DEFAULT_L_BUDGET) -> ReductionCertificate:
    H = tuple(sorted(set(H)))
    sigma = restrict_to_complement(graph, H)
    paths = [_into(sigma, p) for p in (F.paths if isinstance(F, FESet) else F)]
    v = common_range(paths)
    if not is_exhaustive(sigma, paths, v):
        raise NotExhaustive(f"{[str(p) for p in paths]} is not exhaustive at {v}")
    if l_value(paths) > l_budget:
        raise LBudgetExceeded(f"L = {l_value(paths)} exceeds {l_budget}")
    return ReductionCertificate(H, _node(sigma, v, paths))


def _into(sigma: KGraph, p: Path) -> Path:
    if any(e not in sigma.edges for e in p.word) or p.r not in sigma.vertices:
        raise NotExhaustive(f"{p} is not a path of the complement graph")
    return sigma.vertex(p.r) if p.is_vertex else sigma.path(p.word)


def _node(sigma: KGraph, v: str, F: list[Path]) -> ReductionNode:
    F = sort_paths(set(F))
    L = l_value(F)
    node = ReductionNode(v, tuple(F), L)
    if node.is_leaf:
        return node
    node.I = tuple(initial_segments(sigma, F))
    for mu in node.I:
        X = sort_paths(ext(sigma, mu, F))
        degenerate = sigma.vertex(mu.s) in X
        child = None
        if not degenerate:
            child = _node(sigma, mu.s, X)
            if child.L >= L:
                raise IdentityFailure(str(mu), f"L did not decrease ({child.L} >= {L})")
        node.branches.append(Branch(mu, tuple(X), degenerate, child))
    return node


def _factor(sigma: KGraph, v: str, p: Path) -> AlgebraElement:
    return AlgebraElement.vertex(sigma, v) - AlgebraElement.projection(sigma, p)


def node_identities(sigma: KGraph, node: ReductionNode) -> list[tuple[str, AlgebraElement, AlgebraElement]]:
    """The two product identities at a node, as (label, lhs, rhs) triples."""
    v = node.root
    out = []
    tail = AlgebraElement.vertex(sigma, v)
    for b in node.branches:
        mu = b.mu
        prod = AlgebraElement.vertex(sigma, v)
        for lam in b.ext:
            f = _factor(sigma, v, sigma.compose(mu, lam))
            prod = mul(prod, f)
            tail = mul(tail, f)
        qmu = AlgebraElement.q(sigma, mu)
        inner = delta_product(sigma, mu.s, b.ext)
        rhs = _factor(sigma, v, mu) + mul(mul(qmu, inner), qmu.adjoint())
        out.append((f"branch {mu}", prod, rhs))
    dF = delta_product(sigma, v, node.F)
    out.append(("absorb", dF, mul(dF, tail)))
    return out


def certificate_generators(sigma: KGraph, cert: ReductionCertificate) -> list[AlgebraElement]:
    """Deltas the certificate reduces to: leaves and every node's I(F)."""
    gens = []
    for node in cert.root.walk():
        if node.is_leaf:
            gens.append(delta(sigma, node.root, node.F))
        else:
            gens.append(delta(sigma, node.root, node.I))
    return gens


def _ideal(sigma: KGraph, gens: list[AlgebraElement]):
    cache = sigma.__dict__.setdefault("_cert_ideals", {})
    key = frozenset(gens)
    if key not in cache:
        cache[key] = ideal_from_generators(sigma, gens, verify=False)
    return cache[key]


def verify_certificate(graph: KGraph, cert: ReductionCertificate) -> bool:
    """Replay a certificate: Ext sets and I(F) are recomputed, L decreases,
    both identities hold exactly at every node, and Delta^F lies in the ideal
    generated by the certificate's edge-level Deltas.  Raises IdentityFailure
    on the first problem."""
    if not graph.is_acyclic():
        raise NotAcyclic("certificates are verified in a finite-dimensional algebra")
    sigma = restrict_to_complement(graph, cert.H)
    for node in cert.root.walk():
        tag = f"{node.root}:{[str(p) for p in node.F]}"
        if l_value(node.F) != node.L:
            raise IdentityFailure(tag, "recorded L is wrong")
        if node.is_leaf:
            if node.branches:
                raise IdentityFailure(tag, "leaf with branches")
            continue
        if tuple(initial_segments(sigma, node.F)) != tuple(node.I):
            raise IdentityFailure(tag, "I(F) does not match")
        if [b.mu for b in node.branches] != list(node.I):
            raise IdentityFailure(tag, "branches do not match I(F)")
        for b in node.branches:
            if set(b.ext) != set(ext(sigma, b.mu, node.F)):
                raise IdentityFailure(tag, f"Ext({b.mu}; F) does not match")
            if b.degenerate != (sigma.vertex(b.mu.s) in b.ext):
                raise IdentityFailure(tag, f"degenerate flag wrong at {b.mu}")
            if b.child is not None:
                if b.child.L >= node.L:
                    raise IdentityFailure(tag, "L does not decrease")
                if set(b.child.F) != set(b.ext) or b.child.root != b.mu.s:
                    raise IdentityFailure(tag, f"child of {b.mu} is not Ext")
            elif not b.degenerate:
                raise IdentityFailure(tag, f"missing child at {b.mu}")
        for label, lhs, rhs in node_identities(sigma, node):
            if lhs != rhs:
                raise IdentityFailure(tag, f"{label}: {lhs} != {rhs}")
    ideal = _ideal(sigma, certificate_generators(sigma, cert))
    target = delta(sigma, cert.root.root, cert.root.F)
    if not ideal.contains(target):
        raise IdentityFailure("root", "Delta^F is not in the ideal of the certificate's generators")
    return True


def in_edge_level_ideal(graph: KGraph, F, H: Iterable[str] = ()) -> bool:
    """Independent check: Delta^F lies in the ideal generated by all Deltas of
    edge-level finite exhaustive sets of Sigma."""
    sigma = restrict_to_complement(graph, H)
    paths = [_into(sigma, p) for p in (F.paths if isinstance(F, FESet) else F)]
    return ck_ideal(sigma).contains(delta(sigma, common_range(paths), paths))
