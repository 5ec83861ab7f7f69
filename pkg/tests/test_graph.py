import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgraph import degree as deg
from kgraph.constructions import grid
from kgraph.errors import (
    DanglingEdgeEndpoint,
    DegreeOutOfRange,
    InconsistentTriple,
    NonBijectiveSquares,
    NotComposable,
    ParseError,
)
from kgraph.graph import EdgeSpec, KGraphSpec, Path, remove_color, restrict_to_complement, validate
from kgraph.io import cuntz

from strategies import random_2graph, seeds


def test_degree_helpers():
    assert deg.unit(3, 2) == (0, 1, 0)
    assert deg.join((2, 0), (1, 1)) == (2, 1)
    assert deg.meet((2, 0), (1, 1)) == (1, 0)
    assert deg.leq((1, 0), (1, 1)) and not deg.leq((2, 0), (1, 1))
    assert sorted(deg.below((1, 1))) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert deg.colors_of((2, 1)) == [1, 1, 2]
    assert deg.drop((1, 2, 3), 2) == (1, 3)
    assert deg.insert((1, 3), 2, 0) == (1, 0, 3)


def test_k1_graph_needs_no_squares():
    g = validate(KGraphSpec(1, ["u", "w"], [EdgeSpec("e", 1, "u", "w"), EdgeSpec("f", 1, "u", "w")], []))
    assert g.k == 1 and len(g.edges) == 2


def test_fixtures_validate(R, Q):
    assert set(R.edges) == {"λ", "μ"} and not R.squares
    assert Q.squares == (("f1", "g2", "g1", "f2"),)


def test_missing_square_rejected():
    edges = [EdgeSpec("f1", 1, "B", "A"), EdgeSpec("g2", 2, "D", "B"), EdgeSpec("g1", 2, "C", "A"), EdgeSpec("f2", 1, "D", "C")]
    with pytest.raises(NonBijectiveSquares) as info:
        validate(KGraphSpec(2, ["A", "B", "C", "D"], edges, []))
    assert info.value.pair == (1, 2)


def test_square_with_wrong_vertices_rejected():
    edges = [EdgeSpec("f1", 1, "B", "A"), EdgeSpec("g2", 2, "D", "B"), EdgeSpec("g1", 2, "C", "A"), EdgeSpec("f2", 1, "E", "C")]
    with pytest.raises(NonBijectiveSquares):
        validate(KGraphSpec(2, list("ABCDE"), edges, [["f1", "g2", "g1", "f2"]]))


def test_dangling_edge():
    with pytest.raises(DanglingEdgeEndpoint):
        validate(KGraphSpec(1, ["u"], [EdgeSpec("e", 1, "u", "nowhere")], []))


def test_bad_color_and_duplicate_ids():
    with pytest.raises(ParseError):
        validate(KGraphSpec(1, ["u"], [EdgeSpec("e", 2, "u", "u")], []))
    with pytest.raises(ParseError):
        validate(KGraphSpec(1, ["u"], [EdgeSpec("e", 1, "u", "u"), EdgeSpec("e", 1, "u", "u")], []))


def _doubled_cube(rng):
    """Every edge of the unit cube doubled, with random squares: the face
    conditions hold but the three-color consistency usually fails."""
    cube = grid((1, 1, 1))
    edges = []
    for e in cube.edges.values():
        edges += [EdgeSpec(e.id + "a", e.color, e.src, e.dst), EdgeSpec(e.id + "b", e.color, e.src, e.dst)]
    squares = []
    for f, g, gp, fp in cube.squares:
        left = [(f + x, g + y) for x in "ab" for y in "ab"]
        right = [(gp + x, fp + y) for x in "ab" for y in "ab"]
        rng.shuffle(right)
        squares += [[a, b, c, d] for (a, b), (c, d) in zip(left, right)]
    return KGraphSpec(3, list(cube.vertices), edges, squares)


def test_inconsistent_triple_detected():
    found = False
    for seed in range(50):
        try:
            validate(_doubled_cube(random.Random(seed)))
        except InconsistentTriple as exc:
            assert len(exc.colors) == 3 and len(exc.word) == 3
            found = True
            break
    assert found


def test_cube_is_consistent(graphs):
    cube = graphs["cube"]
    assert cube.k == 3
    top = cube.paths_from("p000", (1, 1, 1))
    assert len(top) == 1


def test_compose_examples(Q):
    f1g2 = Q.compose(Q.edge("f1"), Q.edge("g2"))
    assert f1g2.word == ("f1", "g2") and f1g2.degree == (1, 1)
    assert Q.compose(Q.edge("g1"), Q.edge("f2")) == f1g2
    lam = Q.edge("f1")
    assert Q.compose(Q.vertex("A"), lam) == lam
    assert Q.compose(lam, Q.vertex("B")) == lam
    with pytest.raises(NotComposable):
        Q.compose(Q.edge("f1"), Q.edge("f2"))


def test_path_accepts_any_order(Q):
    assert Q.path("g1.f2") == Q.path(["f1", "g2"])
    assert Q.path("A").is_vertex


def test_segment_examples(Q):
    p = Q.path("f1.g2")
    assert Q.segment(p, (0, 0), (1, 1)) == p
    assert Q.segment(p, (1, 0), (1, 1)) == Q.edge("g2")
    assert Q.segment(p, (0, 1), (1, 1)) == Q.edge("f2")
    assert Q.segment(p, (0, 1), (0, 1)) == Q.vertex("C")
    with pytest.raises(DegreeOutOfRange):
        Q.segment(p, (0, 0), (2, 0))


def test_paths_from_examples(R, Q):
    assert R.paths_from("v", (0, 0)) == [R.vertex("v")]
    assert R.paths_from("v", (1, 0)) == [R.edge("λ")]
    assert R.paths_from("v", (1, 1)) == []
    assert Q.paths_from("A", (1, 1)) == [Q.path("f1.g2")]


def test_degree_zero_paths_are_vertices(graphs):
    for g in graphs.values():
        cap = g.max_degree() if g.is_acyclic() else (2,) * g.k
        for p in g.all_paths(None, cap):
            assert p.is_vertex == (p.degree == deg.zero(g.k))


def test_acyclicity_and_max_degree(graphs):
    assert not graphs["cuntz_2"].is_acyclic()
    assert graphs["grid"].max_degree() == (3, 1)
    assert graphs["cube"].max_degree() == (1, 1, 1)
    assert graphs["line_k1"].max_degree() == (3,)


def test_remove_color_examples(R, Q):
    r2 = remove_color(R, 2)
    assert r2.k == 1 and set(r2.edges) == {"λ"}
    q1 = remove_color(Q, 1)
    assert set(q1.edges) == {"g1", "g2"} and q1.k == 1
    assert all(e.color == 1 for e in q1.edges.values())
    zero = remove_color(cuntz(2), 1)
    assert zero.k == 0 and not zero.edges and zero.vertices == ("v",)
    assert remove_color(Q, 1) is q1


def test_restrict_to_complement_examples(R, Q):
    assert restrict_to_complement(Q, []).edges.keys() == Q.edges.keys()
    sub = restrict_to_complement(remove_color(Q, 1), ["A", "C"])
    assert set(sub.vertices) == {"B", "D"} and set(sub.edges) == {"g2"}
    # H = {v} is not hereditary: both edges survive and keep their range v
    r = restrict_to_complement(R, ["v"])
    assert set(r.edges) == {"λ", "μ"} and set(r.vertices) == {"a", "b", "v"}


@settings(max_examples=40, deadline=None)
@given(seeds, st.data())
def test_reordering_canonicalizes(seed, data):
    g = random_2graph(seed)
    paths = [p for p in g.all_paths() if len(p.word) >= 2]
    if not paths:
        return
    p = data.draw(st.sampled_from(paths))
    colors = data.draw(st.permutations(deg.colors_of(p.degree)))
    word = g.reorder(p.word, colors)
    assert [g.color(e) for e in word] == list(colors)
    assert g.path(word) == p


@settings(max_examples=40, deadline=None)
@given(seeds, st.data())
def test_segments_recompose(seed, data):
    g = random_2graph(seed)
    p = data.draw(st.sampled_from(g.all_paths()))
    cut = data.draw(st.sampled_from(deg.below(p.degree)))
    head = g.segment(p, deg.zero(2), cut)
    tail = g.segment(p, cut, p.degree)
    assert g.compose(head, tail) == p
    assert head.degree == cut and tail.degree == deg.sub(p.degree, cut)


@settings(max_examples=40, deadline=None)
@given(seeds, st.data())
def test_composition_is_associative(seed, data):
    g = random_2graph(seed)
    a = data.draw(st.sampled_from(g.all_paths()))
    bs = g.all_paths(a.s)
    b = data.draw(st.sampled_from(bs))
    c = data.draw(st.sampled_from(g.all_paths(b.s)))
    assert g.compose(g.compose(a, b), c) == g.compose(a, g.compose(b, c))


def test_path_is_value_object(Q):
    p = Q.path("f1.g2")
    assert isinstance(p, Path) and hash(p) == hash(Q.path("g1.f2"))
    assert str(p) == "f1.g2"
