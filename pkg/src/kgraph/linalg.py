"""Exact sparse row reduction over the rationals.

Vectors are dicts from hashable coordinates to Fractions.  Coordinates are
numbered in order of first appearance; every stored row is scaled so that its
largest coordinate (the pivot) has coefficient 1.  Eliminating a pivot only
introduces smaller coordinates, so reduction always terminates, and a vector
lies in the span exactly when it reduces to zero.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping


class RowSpace:
    def __init__(self, vectors: Iterable[Mapping] = ()):
        self._index: dict[Hashable, int] = {}
        self._keys: list[Hashable] = []
        self._rows: dict[int, dict[int, Fraction]] = {}
        for v in vectors:
            self.add(v)

    def _encode(self, vec: Mapping) -> dict[int, Fraction]:
        out = {}
        for key, c in vec.items():
            if c == 0:
                continue
            i = self._index.get(key)
            if i is None:
                i = self._index[key] = len(self._keys)
                self._keys.append(key)
            out[i] = Fraction(c)
        return out

    def _reduce(self, v: dict[int, Fraction]) -> dict[int, Fraction]:
        while v:
            top = max(v)
            row = self._rows.get(top)
            if row is None:
                return v
            c = v[top]
            for i, x in row.items():
                y = v.get(i, 0) - c * x
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
        return v

    def add(self, vec: Mapping) -> bool:
        """Insert a vector; return True when it enlarged the span."""
        v = self._reduce(self._encode(vec))
        if not v:
            return False
        top = max(v)
        lead = v[top]
        self._rows[top] = {i: x / lead for i, x in v.items()}
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self._reduce(self._encode(vec))

    def remainder(self, vec: Mapping) -> dict:
        return {self._keys[i]: x for i, x in self._reduce(self._encode(vec)).items()}

    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self) -> list[dict]:
        return [{self._keys[i]: x for i, x in row.items()} for _, row in sorted(self._rows.items())]
