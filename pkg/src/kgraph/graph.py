"""Finite k-graphs presented by a colored 1-skeleton and factorization squares.

A square [f, g, gp, fp] records the identity f g = gp fp where f, fp carry the
smaller color i and g, gp the larger color j.  Edges point from src to dst, so
for an edge e we write s(e) = src and r(e) = dst, and a word e1 e2 ... en is
composable when s(e_t) = r(e_{t+1}).
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Sequence

from . import degree as deg
from .degree import Degree
from .errors import (
    DanglingEdgeEndpoint,
    DegreeOutOfRange,
    InconsistentTriple,
    NonBijectiveSquares,
    NotComposable,
    ParseError,
)


@dataclass(frozen=True)
class EdgeSpec:
    id: str
    color: int
    src: str
    dst: str


@dataclass
class KGraphSpec:
    """Unvalidated description of a k-graph, as read from a graph file."""

    k: int
    vertices: list[str]
    edges: list[EdgeSpec]
    squares: list[tuple[str, str, str, str]] = field(default_factory=list)

    def __post_init__(self):
        self.vertices = list(self.vertices)
        self.edges = list(self.edges)
        self.squares = [tuple(sq) for sq in self.squares]


@dataclass(frozen=True, order=False)
class Path:
    """A morphism in canonical color-block form.

    ``word`` lists the edges with all color-1 edges first, then color 2, and so
    on.  Vertices are the paths with an empty word, in which case r = s.
    """

    r: str
    s: str
    word: tuple[str, ...]
    degree: Degree

    @property
    def is_vertex(self) -> bool:
        return not self.word

    def sort_key(self):
        return (self.degree, self.word, self.r)

    def __str__(self) -> str:
        return self.r if not self.word else ".".join(self.word)

    def __repr__(self) -> str:
        return f"Path({self})"


def sort_paths(paths: Iterable[Path]) -> list[Path]:
    return sorted(paths, key=Path.sort_key)


class KGraph:
    """A validated finite k-graph.  Instances are immutable; the memo tables
    below only ever cache pure functions of their keys."""

    def __init__(self, spec: KGraphSpec):
        self.k = spec.k
        self.vertices: tuple[str, ...] = tuple(spec.vertices)
        self.edges: dict[str, EdgeSpec] = {e.id: e for e in spec.edges}
        self.squares: tuple[tuple[str, str, str, str], ...] = tuple(tuple(s) for s in spec.squares)
        self.ij_to_ji: dict[tuple[str, str], tuple[str, str]] = {}
        self.ji_to_ij: dict[tuple[str, str], tuple[str, str]] = {}
        for f, g, gp, fp in self.squares:
            self.ij_to_ji[(f, g)] = (gp, fp)
            self.ji_to_ij[(gp, fp)] = (f, g)
        # edges indexed by (range vertex, color)
        self.in_edges: dict[tuple[str, int], tuple[str, ...]] = {}
        idx = defaultdict(list)
        for e in spec.edges:
            idx[(e.dst, e.color)].append(e.id)
        for key, ids in idx.items():
            self.in_edges[key] = tuple(sorted(ids))
        self._vertex_set = frozenset(self.vertices)
        self._paths_from: dict = {}
        self._compose: dict = {}
        self._lmin: dict = {}
        self._segment: dict = {}
        self._acyclic = None

    # -- basic accessors -------------------------------------------------
    def spec(self) -> KGraphSpec:
        return KGraphSpec(self.k, list(self.vertices), list(self.edges.values()), list(self.squares))

    def color(self, e: str) -> int:
        return self.edges[e].color

    def edges_at(self, v: str, color: int) -> tuple[str, ...]:
        """Edges with range v and the given color, i.e. v Lambda^{e_color}."""
        return self.in_edges.get((v, color), ())

    def vertex(self, v: str) -> Path:
        if v not in self._vertex_set:
            raise KeyError(v)
        return Path(v, v, (), deg.zero(self.k))

    def edge(self, e: str) -> Path:
        spec = self.edges[e]
        return Path(spec.dst, spec.src, (e,), deg.unit(self.k, spec.color))

    def path(self, word: Sequence[str] | str) -> Path:
        """Build a path from any composable edge word, or a vertex name."""
        if isinstance(word, str):
            if word in self._vertex_set:
                return self.vertex(word)
            word = word.split(".")
        word = tuple(word)
        if not word:
            raise ValueError("empty word needs a vertex name")
        for a, b in zip(word, word[1:]):
            if self.edges[a].src != self.edges[b].dst:
                raise NotComposable(f"{a} then {b}")
        d = deg.zero(self.k)
        for e in word:
            d = deg.add(d, deg.unit(self.k, self.color(e)))
        return Path(self.edges[word[0]].dst, self.edges[word[-1]].src, self._canonical(list(word)), d)

    # -- reordering -------------------------------------------------------
    def _swap(self, a: str, b: str) -> tuple[str, str]:
        ca, cb = self.color(a), self.color(b)
        if ca < cb:
            return self.ij_to_ji[(a, b)]
        return self.ji_to_ij[(a, b)]

    def _canonical(self, word: list[str]) -> tuple[str, ...]:
        word = list(word)
        changed = True
        while changed:
            changed = False
            for t in range(len(word) - 1):
                if self.color(word[t]) > self.color(word[t + 1]):
                    word[t], word[t + 1] = self._swap(word[t], word[t + 1])
                    changed = True
        return tuple(word)

    def reorder(self, word: Sequence[str], colors: Sequence[int]) -> list[str]:
        """Rewrite a word into the equivalent word with the given color sequence."""
        word = list(word)
        for p, c in enumerate(colors):
            q = next(t for t in range(p, len(word)) if self.color(word[t]) == c)
            while q > p:
                word[q - 1], word[q] = self._swap(word[q - 1], word[q])
                q -= 1
        return word

    # -- path operations ---------------------------------------------------
    def compose(self, lam: Path, mu: Path) -> Path:
        if lam.s != mu.r:
            raise NotComposable(f"s({lam}) = {lam.s} but r({mu}) = {mu.r}")
        if mu.is_vertex:
            return lam
        if lam.is_vertex:
            return mu
        key = (lam.word, mu.word)
        hit = self._compose.get(key)
        if hit is None:
            hit = Path(lam.r, mu.s, self._canonical(list(lam.word + mu.word)), deg.add(lam.degree, mu.degree))
            self._compose[key] = hit
        return hit

    def segment(self, lam: Path, m: Degree, n: Degree) -> Path:
        """The factor lam(m, n) of degree n - m."""
        if not (deg.leq(deg.zero(self.k), m) and deg.leq(m, n) and deg.leq(n, lam.degree)):
            raise DegreeOutOfRange(f"need 0 <= {m} <= {n} <= {lam.degree}")
        key = (lam, m, n)
        hit = self._segment.get(key)
        if hit is None:
            hit = self._segment[key] = self._cut(lam, m, n)
        return hit

    def _cut(self, lam: Path, m: Degree, n: Degree) -> Path:
        first = deg.colors_of(m)
        middle = deg.colors_of(deg.sub(n, m))
        word = self.reorder(lam.word, first + middle + deg.colors_of(deg.sub(lam.degree, n)))
        piece = word[len(first): len(first) + len(middle)]
        if piece:
            return self.path(piece)
        if first:
            return self.vertex(self.edges[word[len(first) - 1]].src)
        return self.vertex(lam.r)

    def paths_from(self, v: str, n: Degree) -> list[Path]:
        """All paths in v Lambda^n, sorted."""
        key = (v, n)
        hit = self._paths_from.get(key)
        if hit is not None:
            return hit
        colors = deg.colors_of(n)
        out = []

        def walk(cur: str, t: int, acc: list[str]):
            if t == len(colors):
                out.append(Path(v, cur, tuple(acc), n) if acc else self.vertex(v))
                return
            for e in self.edges_at(cur, colors[t]):
                acc.append(e)
                walk(self.edges[e].src, t + 1, acc)
                acc.pop()

        walk(v, 0, [])
        out = sort_paths(out)
        self._paths_from[key] = out
        return out

    def paths_upto(self, v: str | None, cap: Degree) -> list[Path]:
        """All paths of degree <= cap, with range v (or any range if v is None)."""
        vs = self.vertices if v is None else (v,)
        out = []
        for n in deg.below(cap):
            for w in vs:
                out.extend(self.paths_from(w, n))
        return sort_paths(out)

    def is_acyclic(self) -> bool:
        if self._acyclic is None:
            ts = TopologicalSorter({v: set() for v in self.vertices})
            for e in self.edges.values():
                ts.add(e.dst, e.src)
            try:
                ts.prepare()
                self._acyclic = True
            except CycleError:
                self._acyclic = False
        return self._acyclic

    def max_degree(self) -> Degree:
        """A degree bounding every path: coordinate i is the longest color-i
        path.  Only defined for acyclic graphs."""
        if not self.is_acyclic():
            raise ValueError("cyclic graphs have unbounded degrees")
        return tuple(self._longest(i) for i in range(1, self.k + 1))

    def _longest(self, i: int) -> int:
        memo: dict[str, int] = {}

        def longest(v: str) -> int:
            if v not in memo:
                memo[v] = max((1 + longest(self.edges[e].src) for e in self.edges_at(v, i)), default=0)
            return memo[v]

        return max((longest(v) for v in self.vertices), default=0)

    def all_paths(self, v: str | None = None, cap: Degree | None = None) -> list[Path]:
        """Every path (with range v if given).  Needs a cap on cyclic graphs."""
        if cap is None:
            cap = self.max_degree()
        return self.paths_upto(v, cap)

    def __repr__(self) -> str:
        return f"KGraph(k={self.k}, |V|={len(self.vertices)}, |E|={len(self.edges)})"


def _check_spec_shape(spec: KGraphSpec) -> None:
    if spec.k < 0:
        raise ParseError("k must be non-negative")
    vs = set(spec.vertices)
    if len(vs) != len(spec.vertices):
        raise ParseError("duplicate vertex id")
    seen = set()
    for e in spec.edges:
        if e.id in seen or e.id in vs:
            raise ParseError(f"duplicate id {e.id}")
        seen.add(e.id)
        if "." in e.id:
            raise ParseError(f"edge id {e.id} may not contain '.'")
        if not 1 <= e.color <= spec.k:
            raise ParseError(f"edge {e.id} has color {e.color} outside 1..{spec.k}")
        if e.src not in vs or e.dst not in vs:
            raise DanglingEdgeEndpoint(f"edge {e.id} joins {e.src} -> {e.dst}")
    edges = {e.id: e for e in spec.edges}
    for sq in spec.squares:
        if len(sq) != 4 or any(x not in edges for x in sq):
            raise ParseError(f"square {sq} names unknown edges")


def validate(spec: KGraphSpec) -> KGraph:
    """Check the factorization property and return an immutable graph."""
    _check_spec_shape(spec)
    edges = {e.id: e for e in spec.edges}
    g = KGraph(spec)
    by_pair: dict[tuple[int, int], list] = defaultdict(list)
    for sq in g.squares:
        f, gg, gp, fp = sq
        i, j = edges[f].color, edges[gg].color
        if not (i < j and edges[fp].color == i and edges[gp].color == j):
            raise NonBijectiveSquares((i, j), f"square {list(sq)} has wrong colors")
        ok = (
            edges[f].src == edges[gg].dst
            and edges[gp].src == edges[fp].dst
            and edges[f].dst == edges[gp].dst
            and edges[gg].src == edges[fp].src
        )
        if not ok:
            raise NonBijectiveSquares((i, j), f"square {list(sq)} does not commute on vertices")
        by_pair[(i, j)].append(sq)
    for i in range(1, spec.k + 1):
        for j in range(i + 1, spec.k + 1):
            ij = {(f.id, h.id) for f in spec.edges if f.color == i for h in spec.edges if h.color == j and f.src == h.dst}
            ji = {(h.id, f.id) for h in spec.edges if h.color == j for f in spec.edges if f.color == i and h.src == f.dst}
            sqs = by_pair.get((i, j), [])
            lhs = [(s[0], s[1]) for s in sqs]
            rhs = [(s[2], s[3]) for s in sqs]
            if len(set(lhs)) != len(lhs) or len(set(rhs)) != len(rhs):
                raise NonBijectiveSquares((i, j), "a pair appears in two squares")
            if set(lhs) != ij:
                raise NonBijectiveSquares((i, j), f"unmatched {sorted(ij.symmetric_difference(lhs))}")
            if set(rhs) != ji:
                raise NonBijectiveSquares((i, j), f"unmatched {sorted(ji.symmetric_difference(rhs))}")
    if spec.k >= 3:
        _check_triples(g)
    return g


def _check_triples(g: KGraph) -> None:
    """Every composable word with three distinct colors must have exactly one
    representative per color order in its swap class."""
    for cs in itertools.combinations(range(1, g.k + 1), 3):
        n = deg.zero(g.k)
        for c in cs:
            n = deg.add(n, deg.unit(g.k, c))
        for v in g.vertices:
            for p in g.paths_from(v, n):
                _swap_class(g, p.word, cs)


def _swap_class(g: KGraph, start: tuple[str, ...], colors) -> None:
    seen = {start}
    by_colors = {tuple(g.color(e) for e in start): start}
    todo = [start]
    while todo:
        w = todo.pop()
        for t in range(len(w) - 1):
            a, b = w[t], w[t + 1]
            x, y = g._swap(a, b)
            nw = w[:t] + (x, y) + w[t + 2:]
            if nw in seen:
                continue
            seen.add(nw)
            cs = tuple(g.color(e) for e in nw)
            if cs in by_colors and by_colors[cs] != nw:
                raise InconsistentTriple(colors, list(start))
            by_colors[cs] = nw
            todo.append(nw)


def remove_color(graph: KGraph, i: int) -> KGraph:
    """The (k-1)-graph obtained by deleting every color-i edge."""
    if not 1 <= i <= graph.k:
        raise ValueError(f"color {i} outside 1..{graph.k}")
    # cached so that repeated calls return the same graph object, which keeps
    # algebra elements over Lambda^i comparable
    cache = graph.__dict__.setdefault("_removed", {})
    if i not in cache:
        cache[i] = _remove_color(graph, i)
    return cache[i]


def _remove_color(graph: KGraph, i: int) -> KGraph:
    keep = {e.id for e in graph.edges.values() if e.color != i}
    edges = [EdgeSpec(e.id, e.color - (e.color > i), e.src, e.dst) for e in graph.edges.values() if e.id in keep]
    squares = [list(s) for s in graph.squares if all(x in keep for x in s)]
    return validate(KGraphSpec(graph.k - 1, list(graph.vertices), edges, squares))


def restrict_to_complement(graph: KGraph, H: Iterable[str]) -> KGraph:
    """The subgraph of paths whose source lies outside H.

    Vertices of H that are still the range of a surviving edge are kept so the
    result is a graph; for hereditary H this never happens.
    """
    H = frozenset(H)
    cache = graph.__dict__.setdefault("_restricted", {})
    if H not in cache:
        cache[H] = _restrict(graph, H)
    return cache[H]


def _restrict(graph: KGraph, H: frozenset) -> KGraph:
    edges = [e for e in graph.edges.values() if e.src not in H]
    keep = {e.id for e in edges}
    needed = {e.dst for e in edges}
    vertices = [v for v in graph.vertices if v not in H or v in needed]
    squares = [list(s) for s in graph.squares if all(x in keep for x in s)]
    return validate(KGraphSpec(graph.k, vertices, edges, squares))
