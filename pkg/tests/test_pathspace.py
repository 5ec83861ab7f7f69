import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from kgraph.algebra import AlgebraElement, all_monomials, delta, mul
from kgraph.combinatorics import FESet
from kgraph.pathspace import SparseMatrix, TruncatedRep, delta_w, delta_witness, rep_element, rep_w, rep_w_star

from strategies import random_2graph, seeds


def test_vertex_acts_as_range_projection(Q):
    tr = TruncatedRep(Q, (1, 1), (0, 0))
    m = rep_w(Q.vertex("A"), tr)
    want = {(tr.index[p], tr.index[p]): 1 for p in tr.basis if p.r == "A"}
    assert m == SparseMatrix(want)


def test_edge_actions(R, Q):
    tr = TruncatedRep(R, (1, 1), (0, 0))
    lam = R.edge("λ")
    assert tr.decode(rep_w(lam, tr).apply(tr.xi(R.vertex("a")))) == {lam: 1}
    tq = TruncatedRep(Q, (1, 1), (0, 0))
    got = tq.decode(rep_w(Q.edge("f1"), tq).apply(tq.xi(Q.edge("g2"))))
    assert got == {Q.path("f1.g2"): 1}


def test_truncation_drops_long_paths(Q):
    tr = TruncatedRep(Q, (1, 0), (0, 0))
    assert rep_w(Q.edge("g1"), tr).apply(tr.xi(Q.edge("f2"))) == {}


def test_rep_of_difference_is_zero(Q):
    tr = TruncatedRep.default(Q)
    a = AlgebraElement.projection(Q, Q.path("f1.g2"))
    assert rep_element(a - a, tr).is_zero()


def test_wedge_delta_fixes_xi_v(R):
    tr = TruncatedRep(R, (1, 1), (0, 0))
    d = delta(R, "v", [R.edge("λ"), R.edge("μ")])
    assert tr.decode(rep_element(d, tr).apply(tr.xi(R.vertex("v")))) == {R.vertex("v"): 1}


def test_delta_witness_examples(R, Q):
    flag, vec = delta_witness(FESet("v", (R.edge("λ"),)), TruncatedRep.default(R))
    assert flag and vec == {R.vertex("v"): Fraction(1)}
    flag, vec = delta_witness([Q.edge("f1"), Q.edge("g1")], TruncatedRep.default(Q))
    assert flag and vec == {Q.vertex("A"): Fraction(1)}
    flag, vec = delta_witness([], TruncatedRep.default(Q), v="A")
    assert flag and vec == {Q.vertex("A"): Fraction(1)}


def test_delta_w_matches_rep_of_delta(Q):
    tr = TruncatedRep(Q, (1, 1), (0, 0))
    E = [Q.edge("f1"), Q.edge("g1")]
    assert delta_w(E, "A", tr) == rep_element(delta(Q, "A", E), tr)


def test_stripping_formula_is_transpose(graphs):
    for g in graphs.values():
        tr = TruncatedRep.default(g)
        for p in tr.basis:
            assert rep_w_star(p, tr) == rep_w(p, tr).transpose()


def test_safe_zone(Q):
    tr = TruncatedRep(Q, (1, 1), (1, 0))
    assert {p.degree for p in tr.safe_zone()} <= {(0, 0), (0, 1)}


def test_cuntz_truncation_is_exact_on_safe_zone(graphs):
    c = graphs["cuntz_2"]
    tr = TruncatedRep(c, (4,), (2,))
    rng = random.Random(3)
    monos = all_monomials(c, (1,))
    safe = [tr.index[p] for p in tr.safe_zone()]
    for _ in range(200):
        a, b = (AlgebraElement(c, {rng.choice(monos): 1}) for _ in range(2))
        lhs, rhs = rep_element(mul(a, b), tr), rep_element(a, tr) @ rep_element(b, tr)
        for j in safe:
            assert lhs.apply({j: Fraction(1)}) == rhs.apply({j: Fraction(1)})


@settings(max_examples=30, deadline=None)
@given(seeds, st.data())
def test_rep_is_multiplicative(seed, data):
    g = random_2graph(seed)
    tr = TruncatedRep(g, g.max_degree(), (0, 0))
    monos = all_monomials(g, g.max_degree())
    a = AlgebraElement(g, {data.draw(st.sampled_from(monos)): 1})
    b = AlgebraElement(g, {data.draw(st.sampled_from(monos)): 1})
    assert rep_element(mul(a, b), tr) == rep_element(a, tr) @ rep_element(b, tr)
    assert rep_element(a.adjoint(), tr) == rep_element(a, tr).transpose()


def test_sparse_matrix_text():
    m = SparseMatrix({(1, 0): Fraction(1, 2), (0, 1): 3})
    assert m.to_text() == "0 1 3\n1 0 1/2"
    assert (m - m).is_zero() and m.transpose().transpose() == m
