"""Path-level combinatorics: common extensions, Ext sets, exhaustiveness."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from . import degree as deg
from .degree import Degree
from .errors import BudgetExceeded, EmptySet, MixedRanges, NotAcyclic, RangeMismatch
from .graph import KGraph, Path, sort_paths

DEFAULT_BUDGET = 2**20


@dataclass(frozen=True)
class FESet:
    """A finite set of non-vertex paths sharing the range ``root``."""

    root: str
    paths: tuple[Path, ...]

    def __post_init__(self):
        for p in self.paths:
            if p.r != self.root:
                raise MixedRanges(f"{p} has range {p.r}, expected {self.root}")
            if p.is_vertex:
                raise ValueError("a finite exhaustive set never contains its root vertex")
        object.__setattr__(self, "paths", tuple(sort_paths(set(self.paths))))

    def __iter__(self):
        return iter(self.paths)

    def __len__(self):
        return len(self.paths)

    def __str__(self):
        return "{" + ", ".join(str(p) for p in self.paths) + "}"


def common_range(paths: Iterable[Path]) -> str:
    ranges = {p.r for p in paths}
    if len(ranges) != 1:
        raise MixedRanges(f"ranges {sorted(ranges)}")
    return ranges.pop()


def extends(graph: KGraph, rho: Path, nu: Path) -> bool:
    """True when rho lies in nu Lambda."""
    if rho.r != nu.r or not deg.leq(nu.degree, rho.degree):
        return False
    return graph.segment(rho, deg.zero(graph.k), nu.degree) == nu


def lambda_min(graph: KGraph, mu: Path, nu: Path) -> tuple[tuple[Path, Path], ...]:
    """Pairs (alpha, beta) with mu alpha = nu beta of degree d(mu) v d(nu)."""
    key = (mu, nu)
    hit = graph._lmin.get(key)
    if hit is not None:
        return hit
    out = []
    if mu.r == nu.r:
        m = deg.join(mu.degree, nu.degree)
        for alpha in graph.paths_from(mu.s, deg.sub(m, mu.degree)):
            rho = graph.compose(mu, alpha)
            if graph.segment(rho, deg.zero(graph.k), nu.degree) == nu:
                out.append((alpha, graph.segment(rho, nu.degree, m)))
    hit = tuple(sorted(out, key=lambda ab: (ab[0].sort_key(), ab[1].sort_key())))
    graph._lmin[key] = hit
    return hit


def mce(graph: KGraph, mu: Path, nu: Path) -> list[Path]:
    return sort_paths({graph.compose(mu, a) for a, _ in lambda_min(graph, mu, nu)})


def ce(graph: KGraph, mu: Path, nu: Path, cap: Degree) -> list[Path]:
    """Common extensions of mu and nu with degree at most cap."""
    if mu.r != nu.r:
        return []
    return [rho for rho in graph.paths_upto(mu.r, cap) if extends(graph, rho, mu) and extends(graph, rho, nu)]


def mce_of_set(graph: KGraph, G: Iterable[Path]) -> list[Path]:
    G = list(G)
    if not G:
        raise ValueError("MCE of an empty set is undefined")
    v = common_range(G)
    n = deg.zero(graph.k)
    for p in G:
        n = deg.join(n, p.degree)
    return [rho for rho in graph.paths_from(v, n) if all(extends(graph, rho, p) for p in G)]


def ext(graph: KGraph, mu: Path, E: Iterable[Path]) -> frozenset[Path]:
    """Ext(mu; E): the alpha with mu alpha a minimal common extension of mu and
    some member of E."""
    out = set()
    for lam in E:
        if lam.r != mu.r:
            raise RangeMismatch(f"{lam} has range {lam.r}, {mu} has range {mu.r}")
        out.update(a for a, _ in lambda_min(graph, mu, lam))
    return frozenset(out)


def _as_paths(E) -> tuple[str | None, list[Path]]:
    if isinstance(E, FESet):
        return E.root, list(E.paths)
    E = list(E)
    return (common_range(E) if E else None), E


def exhaustive_witness(graph: KGraph, E, v: str | None = None) -> Path | None:
    """Decide exhaustiveness of E at v; return None if exhaustive, else a path
    at v with no common extension with any member of E.

    The search runs over residual states (vertex, Ext(mu; E)).  Appending an
    edge f moves the state to the union of Ext(f; {beta}) over its members.
    States containing the vertex itself are covered forever and are pruned;
    reaching the empty state certifies non-exhaustiveness.
    """
    root, paths = _as_paths(E)
    v = v if v is not None else root
    if v is None:
        raise ValueError("an empty set needs an explicit root vertex")
    if root is not None and root != v:
        raise RangeMismatch(f"set has range {root}, asked about {v}")
    start = (v, frozenset(paths))
    if graph.vertex(v) in start[1]:
        return None
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        cur, S = state
        if not S:
            word = []
            while parent[state] is not None:
                state, f = parent[state]
                word.append(f)
            word.reverse()
            return graph.path(word) if word else graph.vertex(v)
        for c in range(1, graph.k + 1):
            for f in graph.edges_at(cur, c):
                fp = graph.edge(f)
                nxt = set()
                for beta in S:
                    nxt.update(ext(graph, fp, (beta,)))
                if graph.vertex(fp.s) in nxt:
                    continue
                key = (fp.s, frozenset(nxt))
                if key not in parent:
                    parent[key] = (state, f)
                    queue.append(key)
    return None


def is_exhaustive(graph: KGraph, E, v: str | None = None) -> bool:
    return exhaustive_witness(graph, E, v) is None


def is_exhaustive_brute_force(graph: KGraph, E, v: str | None = None) -> bool:
    """Definition-level check over all of v Lambda, using common extensions
    found by enumeration (not the Lambda^min machinery).  Acyclic graphs only."""
    if not graph.is_acyclic():
        raise NotAcyclic("brute force needs a finite path set")
    root, paths = _as_paths(E)
    v = v if v is not None else root
    everything = graph.all_paths(v)
    for mu in everything:
        if not any(extends(graph, rho, mu) and extends(graph, rho, nu) for nu in paths for rho in everything):
            return False
    return True


def lambda_leq(graph: KGraph, v: str, n: Degree) -> list[Path]:
    """v Lambda^{<= n}: paths of degree <= n which cannot be extended in any
    coordinate where they fall short of n."""
    out = []
    for m in deg.below(n):
        short = [i + 1 for i in range(graph.k) if m[i] < n[i]]
        for lam in graph.paths_from(v, m):
            if all(not graph.edges_at(lam.s, i) for i in short):
                out.append(lam)
    return sort_paths(out)


def edges_into(graph: KGraph, v: str) -> list[Path]:
    """All edges with range v, across colors."""
    return [graph.edge(e) for c in range(1, graph.k + 1) for e in graph.edges_at(v, c)]


def _subsets(items: list, budget: int):
    n = len(items)
    if 2**n - 1 > budget:
        raise BudgetExceeded(f"{2**n - 1} subsets exceed the budget {budget}")
    for size in range(1, n + 1):
        yield from itertools.combinations(items, size)


def _minimal(sets: list[FESet]) -> list[FESet]:
    keep = []
    for E in sets:
        s = set(E.paths)
        if not any(set(F.paths) < s for F in sets):
            keep.append(E)
    return keep


def enumerate_edge_fe_sets(graph: KGraph, v: str, minimal: bool = False, budget: int = DEFAULT_BUDGET) -> list[FESet]:
    """All exhaustive subsets of the edges with range v."""
    found = [FESet(v, S) for S in _subsets(edges_into(graph, v), budget) if is_exhaustive(graph, S, v)]
    return _minimal(found) if minimal else found


def enumerate_fe_sets(
    graph: KGraph,
    v: str,
    cap: Degree,
    max_l: int | None = None,
    minimal: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> list[FESet]:
    """All finite exhaustive sets at v built from paths of degree <= cap,
    optionally restricted to sets with L-value at most max_l."""
    cands = [p for p in graph.paths_upto(v, cap) if not p.is_vertex]
    if max_l is not None:
        cands = [p for p in cands if sum(p.degree) <= max_l]
    found = []
    for S in _subsets(cands, budget):
        if max_l is not None and l_value(S) > max_l:
            continue
        if is_exhaustive(graph, S, v):
            found.append(FESet(v, S))
    return _minimal(found) if minimal else found


def l_value(E: Iterable[Path]) -> int:
    """Sum over colors of the largest degree in that color."""
    E = list(E)
    if not E:
        raise EmptySet("L is undefined on the empty set")
    return sum(max(p.degree[c] for p in E) for c in range(len(E[0].degree)))


@dataclass(frozen=True)
class Predicates:
    is_locally_convex: bool
    has_no_sources: bool
    is_acyclic: bool
    edge_counts: dict
    finitely_aligned: bool = True
    max_lambda_min: int = 0


def is_locally_convex(graph: KGraph) -> bool:
    for v in graph.vertices:
        for i in range(1, graph.k + 1):
            for j in range(1, graph.k + 1):
                if i == j:
                    continue
                if not graph.edges_at(v, j):
                    continue
                for lam in graph.edges_at(v, i):
                    if not graph.edges_at(graph.edges[lam].src, j):
                        return False
    return True


def has_no_sources(graph: KGraph) -> bool:
    return all(graph.edges_at(v, i) for v in graph.vertices for i in range(1, graph.k + 1))


def predicates(graph: KGraph) -> Predicates:
    counts = {i: sum(1 for e in graph.edges.values() if e.color == i) for i in range(1, graph.k + 1)}
    biggest = 0
    for v in graph.vertices:
        es = edges_into(graph, v)
        for a in es:
            for b in es:
                biggest = max(biggest, len(lambda_min(graph, a, b)))
    return Predicates(is_locally_convex(graph), has_no_sources(graph), graph.is_acyclic(), counts, True, biggest)
