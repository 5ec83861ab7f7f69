"""Reading and writing graph files (.kg, YAML) and serialized elements."""
from __future__ import annotations

from importlib import resources
from pathlib import Path as FsPath

import yaml

from .errors import ParseError
from .graph import EdgeSpec, KGraph, KGraphSpec, validate

FIXTURES = ("wedge", "square", "cuntz_2", "line_k1", "grid", "cube", "receivers")


def parse_spec(text: str) -> KGraphSpec:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise ParseError(f"malformed graph file{where}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("graph file must be a mapping")
    missing = {"k", "vertices", "edges"} - set(data)
    if missing:
        raise ParseError(f"missing fields {sorted(missing)}")
    try:
        edges = [EdgeSpec(str(e["id"]), int(e["color"]), str(e["src"]), str(e["dst"])) for e in data["edges"] or []]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad edge entry: {exc}") from exc
    squares = [tuple(str(x) for x in sq) for sq in data.get("squares") or []]
    return KGraphSpec(int(data["k"]), [str(v) for v in data["vertices"] or []], edges, squares)


def dump_spec(spec: KGraphSpec) -> str:
    data = {
        "k": spec.k,
        "vertices": list(spec.vertices),
        "edges": [{"id": e.id, "color": e.color, "src": e.src, "dst": e.dst} for e in spec.edges],
        "squares": [list(sq) for sq in spec.squares],
    }
    return yaml.safe_dump(data, sort_keys=False, allow_unicode=True)


def load_graph(path) -> KGraph:
    return validate(parse_spec(FsPath(path).read_text(encoding="utf-8")))


def fixture_text(name: str) -> str:
    return resources.files("kgraph.fixtures").joinpath(f"{name}.kg").read_text(encoding="utf-8")


def load_fixture(name: str) -> KGraph:
    return validate(parse_spec(fixture_text(name)))


def cuntz(n: int) -> KGraph:
    """One vertex with n loops of color 1."""
    edges = [EdgeSpec(f"e{t}", 1, "v", "v") for t in range(1, n + 1)]
    return validate(KGraphSpec(1, ["v"], edges, []))
