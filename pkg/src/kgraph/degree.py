"""Degrees in N^k are plain tuples; colors are numbered from 1."""
from __future__ import annotations

Degree = tuple[int, ...]


def zero(k: int) -> Degree:
    return (0,) * k


def unit(k: int, i: int) -> Degree:
    return tuple(1 if c == i - 1 else 0 for c in range(k))


def add(m: Degree, n: Degree) -> Degree:
    return tuple(a + b for a, b in zip(m, n))


def sub(m: Degree, n: Degree) -> Degree:
    return tuple(a - b for a, b in zip(m, n))


def join(m: Degree, n: Degree) -> Degree:
    return tuple(max(a, b) for a, b in zip(m, n))


def meet(m: Degree, n: Degree) -> Degree:
    return tuple(min(a, b) for a, b in zip(m, n))


def leq(m: Degree, n: Degree) -> bool:
    return all(a <= b for a, b in zip(m, n))


def below(n: Degree):
    """All degrees m with 0 <= m <= n, in lexicographic order."""
    out = [()]
    for c in n:
        out = [m + (x,) for m in out for x in range(c + 1)]
    return out


def colors_of(n: Degree) -> list[int]:
    """Color sequence of the canonical word of degree n."""
    seq = []
    for i, c in enumerate(n):
        seq.extend([i + 1] * c)
    return seq


def insert(n: Degree, i: int, value: int = 0) -> Degree:
    """Insert a coordinate at color position i (1-based)."""
    return n[: i - 1] + (value,) + n[i - 1:]


def drop(n: Degree, i: int) -> Degree:
    return n[: i - 1] + n[i:]
