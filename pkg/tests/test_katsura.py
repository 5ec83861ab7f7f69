from fractions import Fraction

import pytest

from kgraph.algebra import AlgebraElement, ck_ideal, delta
from kgraph.bimodule import Bimodule
from kgraph.constructions import grid
from kgraph.errors import NotLocallyConvex, PreconditionViolated
from kgraph.graph import EdgeSpec, KGraphSpec, validate
from kgraph.katsura import (
    b_tilde,
    extension_pairs,
    fe_compact_expansion,
    h_jx,
    katsura_report,
    ker_psi_vertices,
    vertex_compact_expansion,
    verify_expansion,
    verify_splitting_sum,
)
from kgraph.suites import katsura_suite


def theta(g, *words):
    out = {}
    for w in words:
        p = g.path(w)
        out[((p, g.vertex(p.s)), (p, g.vertex(p.s)))] = Fraction(1)
    return out


def test_vertex_sets(Q, graphs):
    assert ker_psi_vertices(Q, 1) == ["B", "D"]
    assert h_jx(Q, 1) == ["A", "C"]
    assert ker_psi_vertices(graphs["cuntz_2"], 1) == []
    assert h_jx(grid((1, 0)), 2) == []
    line = graphs["line_k1"]
    # vertices receiving an edge carry J_X; the others span ker(psi)
    assert set(h_jx(line, 1)) == {"v0", "v1", "v2"}
    assert set(ker_psi_vertices(line, 1)) == {"v3", "w"}


def test_wedge_is_refused(R):
    with pytest.raises(NotLocallyConvex):
        h_jx(R, 1)
    with pytest.raises(NotLocallyConvex):
        katsura_report(R, 1)


def test_b_tilde_on_square(Q):
    entries = b_tilde(Q, 1)
    assert [(e.E.root, [str(p) for p in e.E], e.F, e.in_generator_list) for e in entries] == [("B", ["g2"], (), False)]
    report = katsura_report(Q, 1)
    sub = Bimodule(Q, 1).sub
    assert report.generators == [AlgebraElement.vertex(sub, "A"), AlgebraElement.vertex(sub, "C")]


def test_b_tilde_on_receivers(graphs):
    g = graphs["receivers"]
    entries = {(e.E.root, frozenset(str(p) for p in e.E), e.F, e.in_generator_list) for e in b_tilde(g, 2)}
    assert entries == {
        ("y", frozenset({"bc", "bd", "β"}), (), False),
        ("g", frozenset({"be"}), (), False),
        ("h", frozenset({"bf"}), (), False),
    }


def test_empty_color_report():
    flat = grid((1, 0))
    report = katsura_report(flat, 2)
    assert report.H_JX == [] and report.generators == []
    assert all(not e.in_generator_list and e.F == () for e in report.B_tilde)


def test_vertex_expansions(Q):
    assert vertex_compact_expansion(Q, 1, "B").terms == {}
    assert vertex_compact_expansion(Q, 1, "A").terms == theta(Q, "f1")
    one = validate(KGraphSpec(1, ["v", "w"], [EdgeSpec("e", 1, "v", "w")], []))
    assert vertex_compact_expansion(one, 1, "w").terms == theta(one, "e")
    assert vertex_compact_expansion(one, 1, "v").terms == {}


def test_fe_expansions(Q, graphs):
    assert fe_compact_expansion(Q, 1, [], [Q.edge("f1")]).terms == theta(Q, "f1")
    op = fe_compact_expansion(Q, 1, [Q.edge("g1")], [Q.edge("f1")])
    want = theta(Q, "f1")
    want.update({k: -v for k, v in theta(Q, "f1.g2").items()})
    assert op.terms == want
    g = graphs["receivers"]
    op = fe_compact_expansion(g, 2, [g.edge("λ")], [g.edge("μ")])
    want = theta(g, "μ")
    want.update({k: -v for k, v in theta(g, "μ.β").items()})
    assert op.terms == want
    bm = Bimodule(g, 2)
    assert verify_expansion(bm, op, delta(bm.sub, "v", [bm.sub.edge("λ")])).ok
    assert verify_splitting_sum(g, 2, [g.edge("λ")], [g.edge("μ")]).ok


def test_fe_expansion_preconditions(Q):
    with pytest.raises(PreconditionViolated):
        fe_compact_expansion(Q, 1, [], [])
    with pytest.raises(PreconditionViolated):
        fe_compact_expansion(Q, 1, [Q.edge("f1")], [Q.edge("f1")])
    with pytest.raises(PreconditionViolated):
        fe_compact_expansion(Q, 1, [Q.edge("g1")], [Q.edge("f2")])
    with pytest.raises(PreconditionViolated):
        fe_compact_expansion(Q, 1, [Q.edge("g1")], [Q.edge("g1")])


def test_extension_pairs_on_square(Q):
    pairs = {(tuple(map(str, E)), tuple(map(str, F))) for E, F in extension_pairs(Q, 1, "A")}
    assert pairs == {((), ("f1",)), (("g1",), ("f1",))}


def test_k1_report_is_graph_ideal(graphs):
    line = graphs["line_k1"]
    report = katsura_report(line, 1)
    sub = Bimodule(line, 1).sub
    assert set(report.generators) == {AlgebraElement.vertex(sub, v) for v in ("v0", "v1", "v2")}
    assert report.B_tilde == []


def test_report_serializes(graphs):
    d = katsura_report(graphs["receivers"], 2).to_dict()
    assert d["color"] == 2 and d["H_JX"] == ["v", "x", "a", "b"]
    assert "finitely many" in d["H_JX_infinite_receivers"]


def test_suite_passes(Q, graphs):
    for g in (Q, graphs["receivers"]):
        assert all(r.ok for r in katsura_suite(g))


def test_quotient_facts_on_square(Q):
    # s_A = s_f1 s_f1^* in the quotient, matching psi(s_A) = Theta_{f1, f1}
    I = ck_ideal(Q)
    assert I.contains(AlgebraElement.vertex(Q, "A") - AlgebraElement.projection(Q, Q.edge("f1")))
