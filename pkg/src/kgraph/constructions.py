"""Graph families used as fixtures and as random test inputs."""
from __future__ import annotations

import itertools
import random

from .errors import KGraphError
from .graph import EdgeSpec, KGraph, KGraphSpec, validate


def _name(x) -> str:
    return "p" + "".join(str(t) for t in x)


def grid(lengths: tuple[int, ...]) -> KGraph:
    """Product of k directed lines: vertices are lattice points 0 <= x <= lengths,
    and the color-c edge into x comes from x + e_c."""
    k = len(lengths)
    points = list(itertools.product(*(range(n + 1) for n in lengths)))
    inside = set(points)

    def shift(x, c):
        return tuple(t + (1 if i == c - 1 else 0) for i, t in enumerate(x))

    def edge(x, c):
        return f"c{c}_{_name(x)[1:]}"

    edges = []
    for x in points:
        for c in range(1, k + 1):
            if shift(x, c) in inside:
                edges.append(EdgeSpec(edge(x, c), c, _name(shift(x, c)), _name(x)))
    squares = []
    for x in points:
        for i, j in itertools.combinations(range(1, k + 1), 2):
            if shift(shift(x, i), j) in inside:
                squares.append([edge(x, i), edge(shift(x, i), j), edge(x, j), edge(shift(x, j), i)])
    return validate(KGraphSpec(k, [_name(x) for x in points], edges, squares))


def random_acyclic_2graph(rng: random.Random, max_vertices: int = 6, density: float = 0.35, tries: int = 1000) -> KGraph:
    """A random acyclic 2-graph on at most max_vertices vertices.

    Usually the skeleton is the product of two random acyclic directed
    multigraphs, so every vertex pair has as many 1-2 paths as 2-1 paths; the
    squares are then a random bijection, which generally gives a 2-graph that
    is not a product.  Otherwise a random skeleton is drawn directly and kept
    only when its bicolored path counts agree."""
    if max_vertices >= 4 and rng.random() < 0.75:
        return _twisted_product(rng, max_vertices, density)
    for _ in range(tries):
        n = rng.randint(2, max_vertices)
        vs = [f"v{t}" for t in range(n)]
        edges = []
        for s in range(n):
            for r in range(s):
                for c in (1, 2):
                    edges.extend(EdgeSpec(f"e{len(edges) + t}", c, vs[s], vs[r]) for t in range(_multiplicity(rng, density)))
        squares = _random_squares(rng, vs, edges)
        if squares is None:
            continue
        try:
            return validate(KGraphSpec(2, vs, edges, squares))
        except KGraphError:
            continue
    raise RuntimeError("no consistent skeleton found")


def _multiplicity(rng: random.Random, density: float) -> int:
    m = 0
    while m < 2 and rng.random() < density:
        m += 1
    return m


def _twisted_product(rng: random.Random, max_vertices: int, density: float) -> KGraph:
    a = rng.randint(2, min(3, max_vertices // 2))
    b = rng.randint(2, max_vertices // a)

    def line_graph(n):
        return [(s, r, t) for s in range(n) for r in range(s) for t in range(_multiplicity(rng, density + 0.2))]

    one, two = line_graph(a), line_graph(b)
    vs = [f"v{x}{y}" for x in range(a) for y in range(b)]
    edges = []
    for s, r, t in one:
        edges.extend(EdgeSpec(f"a{s}{r}{t}_{y}", 1, f"v{s}{y}", f"v{r}{y}") for y in range(b))
    for s, r, t in two:
        edges.extend(EdgeSpec(f"b{s}{r}{t}_{x}", 2, f"v{x}{s}", f"v{x}{r}") for x in range(a))
    return validate(KGraphSpec(2, vs, edges, _random_squares(rng, vs, edges)))


def _random_squares(rng, vs, edges):
    by = {}
    for f in edges:
        for g in edges:
            if f.src == g.dst and f.color != g.color:
                key = (f.dst, g.src)
                slot = by.setdefault(key, ([], []))
                if f.color == 1:
                    slot[0].append((f.id, g.id))
                else:
                    slot[1].append((f.id, g.id))
    squares = []
    for ij, ji in by.values():
        if len(ij) != len(ji):
            return None
        ji = list(ji)
        rng.shuffle(ji)
        squares.extend([f, g, gp, fp] for (f, g), (gp, fp) in zip(ij, ji))
    return squares
