"""Truncated path-space representation on the span of {xi_mu : d(mu) <= M}.

w_lam sends xi_mu to xi_{lam mu} when the composite still has degree <= M and
to 0 otherwise; its transpose is w_lam^*, which strips a prefix lam.  Vectors
xi_mu with d(mu) <= M - h form the safe zone: products whose left factors have
total degree at most h act on them exactly as on the full path space.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import degree as deg
from .algebra import AlgebraElement
from .combinatorics import _as_paths, extends
from .degree import Degree
from .graph import KGraph, Path


class SparseMatrix:
    """Dictionary-of-keys matrix with Fraction entries."""

    def __init__(self, entries: dict | None = None):
        self.entries: dict[tuple[int, int], Fraction] = {k: Fraction(v) for k, v in (entries or {}).items() if v}

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return SparseMatrix(out)

    def scale(self, c) -> SparseMatrix:
        return SparseMatrix({k: c * v for k, v in self.entries.items()})

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + other.scale(-1)

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        rows: dict[int, list] = {}
        for (j, k), v in other.entries.items():
            rows.setdefault(j, []).append((k, v))
        out: dict = {}
        for (i, j), a in self.entries.items():
            for k, b in rows.get(j, ()):
                out[(i, k)] = out.get((i, k), 0) + a * b
        return SparseMatrix(out)

    def transpose(self) -> SparseMatrix:
        return SparseMatrix({(j, i): v for (i, j), v in self.entries.items()})

    def apply(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict = {}
        for (i, j), a in self.entries.items():
            x = vec.get(j)
            if x:
                out[i] = out.get(i, 0) + a * x
        return {i: v for i, v in out.items() if v}

    def column(self, j: int) -> dict[int, Fraction]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseMatrix) and self.entries == other.entries

    def triplets(self) -> list[tuple[int, int, Fraction]]:
        return sorted((i, j, v) for (i, j), v in self.entries.items())

    def to_text(self) -> str:
        return "\n".join(f"{i} {j} {v}" for i, j, v in self.triplets())


@dataclass
class TruncatedRep:
    graph: KGraph
    cap: Degree
    headroom: Degree
    basis: list[Path] = field(init=False)
    index: dict[Path, int] = field(init=False)

    def __post_init__(self):
        self.basis = self.graph.paths_upto(None, self.cap)
        self.index = {p: t for t, p in enumerate(self.basis)}
        self._w: dict[Path, SparseMatrix] = {}

    @classmethod
    def default(cls, graph: KGraph, cap: Degree | None = None, headroom: Degree | None = None) -> TruncatedRep:
        cap = cap if cap is not None else (3,) * graph.k
        headroom = headroom if headroom is not None else (1,) * graph.k
        return cls(graph, tuple(cap), tuple(headroom))

    def safe_zone(self) -> list[Path]:
        limit = deg.sub(self.cap, self.headroom)
        return [p for p in self.basis if deg.leq(p.degree, limit)]

    def xi(self, p: Path) -> dict[int, Fraction]:
        return {self.index[p]: Fraction(1)}

    def decode(self, vec: dict[int, Fraction]) -> dict[Path, Fraction]:
        return {self.basis[i]: v for i, v in vec.items()}


def rep_w(lam: Path, rep: TruncatedRep) -> SparseMatrix:
    hit = rep._w.get(lam)
    if hit is None:
        g = rep.graph
        entries = {}
        for mu in rep.basis:
            if mu.r == lam.s and deg.leq(deg.add(lam.degree, mu.degree), rep.cap):
                entries[(rep.index[g.compose(lam, mu)], rep.index[mu])] = 1
        hit = rep._w[lam] = SparseMatrix(entries)
    return hit


def rep_w_star(lam: Path, rep: TruncatedRep) -> SparseMatrix:
    """Directly from the stripping formula: xi_nu -> xi_eta when nu = lam eta."""
    g = rep.graph
    entries = {}
    for nu in rep.basis:
        if extends(g, nu, lam):
            eta = g.segment(nu, lam.degree, nu.degree)
            entries[(rep.index[eta], rep.index[nu])] = 1
    return SparseMatrix(entries)


def rep_element(a: AlgebraElement, rep: TruncatedRep) -> SparseMatrix:
    out = SparseMatrix()
    for (lam, mu), c in a.terms.items():
        out = out + (rep_w(lam, rep) @ rep_w(mu, rep).transpose()).scale(c)
    return out


def delta_w(E: Iterable[Path], v: str, rep: TruncatedRep) -> SparseMatrix:
    """prod over lam in E of (w_v - w_lam w_lam^*) as a matrix product."""
    g = rep.graph
    wv = rep_w(g.vertex(v), rep)
    out = wv
    for lam in E:
        w = rep_w(lam, rep)
        out = out @ (wv - w @ w.transpose())
    return out


def delta_witness(E, rep: TruncatedRep, v: str | None = None) -> tuple[bool, dict[Path, Fraction]]:
    """Apply Delta(w)^E to xi_{r(E)}; the result is xi_{r(E)} itself, so the
    operator is nonzero.  Returns (nonzero flag, vector)."""
    root, paths = _as_paths(E)
    v = v if v is not None else root
    vec = delta_w(paths, v, rep).apply(rep.xi(rep.graph.vertex(v)))
    out = rep.decode(vec)
    expected = {rep.graph.vertex(v): Fraction(1)}
    if out != expected:
        raise AssertionError(f"Delta(w)^E xi_{v} = {out}, expected xi_{v}")
    return bool(out), out
