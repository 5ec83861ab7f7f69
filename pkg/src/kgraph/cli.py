"""Command-line interface: kgraph {validate,analyze,fe,katsura,reduce-fe,verify,fixtures}.

GRAPH arguments are paths to .kg files or names of bundled fixtures.  Reports
are YAML on stdout, or in the file given by --out.  Exit status is 0 when every
requested check passes, 1 when a check fails and 2 on input errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path as FsPath

import yaml

from .algebra import ck_ideal
from .bimodule import Bimodule, xxstar_formal, xxstar_in_phi_image
from .combinatorics import DEFAULT_BUDGET, enumerate_edge_fe_sets, enumerate_fe_sets, predicates
from .errors import KGraphError
from .graph import KGraph, Path
from .io import FIXTURES, fixture_text, load_fixture, load_graph
from .katsura import katsura_report
from .reduction import DEFAULT_L_BUDGET, reduce, verify_certificate
from .suites import SUITES, run_suite


def open_graph(arg: str) -> KGraph:
    if FsPath(arg).exists():
        return load_graph(arg)
    if arg in FIXTURES:
        return load_fixture(arg)
    raise FileNotFoundError(f"{arg}: no such file or bundled fixture")


def _emit(data, out: str | None) -> None:
    text = yaml.safe_dump(data, sort_keys=False, allow_unicode=True)
    if out:
        FsPath(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _sets(sets) -> list[list[str]]:
    return [[str(p) for p in E] for E in sets]


def k_group_report(graph: KGraph) -> dict:
    """K-theory of the Toeplitz algebra: free abelian on the vertices, K1 = 0."""
    n = len(graph.vertices)
    return {"K0": f"Z^{n}" if n != 1 else "Z", "K0_basis": [f"[p_{v}]" for v in graph.vertices], "K1": "0"}


def analysis_report(graph: KGraph, budget: int = DEFAULT_BUDGET) -> dict:
    pred = predicates(graph)
    stats = {
        "k": graph.k,
        "vertices": len(graph.vertices),
        "edges": len(graph.edges),
        "edges_per_color": {i: pred.edge_counts[i] for i in sorted(pred.edge_counts)},
        "squares": len(graph.squares),
    }
    if graph.is_acyclic():
        stats["max_degree"] = list(graph.max_degree())
    report = {
        "stats": stats,
        "predicates": {
            "locally_convex": pred.is_locally_convex,
            "no_sources": pred.has_no_sources,
            "acyclic": pred.is_acyclic,
            "finitely_aligned": pred.finitely_aligned,
            "max_lambda_min_on_edges": pred.max_lambda_min,
        },
        "fe_edge_sets": {v: _sets(enumerate_edge_fe_sets(graph, v, budget=budget)) for v in graph.vertices},
    }
    if graph.is_acyclic():
        report["ck_ideal_dimension"] = ck_ideal(graph).dim
    if pred.is_locally_convex:
        report["katsura"] = {i: katsura_report(graph, i, budget).to_dict() for i in range(1, graph.k + 1)}
        xx = {}
        for i in range(1, graph.k + 1):
            bm = Bimodule(graph, i, None if graph.is_acyclic() else (2,) * graph.k)
            entry = {"toeplitz_level": xxstar_formal(bm)}
            if graph.is_acyclic():
                entry["ck_level"] = xxstar_in_phi_image(bm)
            xx[i] = entry
        report["xx_star_in_phi_image"] = xx
    report["k_theory_toeplitz"] = k_group_report(graph)
    return report


def cmd_validate(args) -> int:
    g = open_graph(args.graph)
    _emit({"valid": True, "k": g.k, "vertices": len(g.vertices), "edges": len(g.edges), "squares": len(g.squares)}, args.out)
    return 0


def cmd_analyze(args) -> int:
    _emit(analysis_report(open_graph(args.graph), args.budget), args.out)
    return 0


def cmd_fe(args) -> int:
    g = open_graph(args.graph)
    _vertex(g, args.vertex)
    if args.max_l is None:
        sets = enumerate_edge_fe_sets(g, args.vertex, minimal=args.minimal, budget=args.budget)
        kind = "edges"
    else:
        cap = g.max_degree() if g.is_acyclic() else (args.max_l,) * g.k
        sets = enumerate_fe_sets(g, args.vertex, cap, max_l=args.max_l, minimal=args.minimal, budget=args.budget)
        kind = f"paths with L <= {args.max_l}"
    _emit({"vertex": args.vertex, "kind": kind, "minimal_only": args.minimal, "count": len(sets), "sets": _sets(sets)}, args.out)
    return 0


def cmd_katsura(args) -> int:
    g = open_graph(args.graph)
    if not 1 <= args.color <= g.k:
        raise KGraphError(f"color {args.color} outside 1..{g.k}")
    _emit(katsura_report(g, args.color, args.budget).to_dict(), args.out)
    return 0


def _vertex(g: KGraph, v: str) -> Path:
    try:
        return g.vertex(v)
    except KeyError:
        raise KGraphError(f"unknown vertex {v!r}") from None


def _parse_paths(g: KGraph, text: str) -> list[Path]:
    try:
        return [g.path(w.strip()) for w in text.split(",") if w.strip()]
    except KeyError as exc:
        raise KGraphError(f"unknown edge {exc.args[0]!r}") from None


def cmd_reduce_fe(args) -> int:
    g = open_graph(args.graph)
    _vertex(g, args.vertex)
    F = _parse_paths(g, args.set)
    for p in F:
        if p.r != args.vertex:
            raise KGraphError(f"{p} does not have range {args.vertex}")
    H = [h.strip() for h in (args.h or "").split(",") if h.strip()]
    for h in H:
        _vertex(g, h)
    cert = reduce(g, F, H, args.l_budget)
    data = cert.to_dict()
    code = 0
    if g.is_acyclic():
        try:
            data["verified"] = verify_certificate(g, cert)
        except KGraphError as exc:
            data["verified"] = False
            data["verification_error"] = str(exc)
            code = 1
    else:
        data["verified"] = "not attempted: cyclic graph"
    _emit(data, args.out)
    return code


def cmd_verify(args) -> int:
    g = open_graph(args.graph)
    results = run_suite(args.suite, g, seed=args.seed, budget=args.budget)
    out, passed = {}, True
    for name, reports in results.items():
        out[name] = [r.summary() for r in reports]
        passed &= all(r.ok for r in reports)
    _emit({"graph": args.graph, "seed": args.seed, "passed": passed, "suites": out}, args.out)
    return 0 if passed else 1


def cmd_fixtures(args) -> int:
    if args.dump:
        if args.dump not in FIXTURES:
            raise FileNotFoundError(f"no bundled fixture {args.dump}")
        text = fixture_text(args.dump)
        if args.out:
            FsPath(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    else:
        _emit({"fixtures": list(FIXTURES)}, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kgraph", description="Exact computations with finite k-graphs and their Toeplitz algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, func, help_text, graph=True):
        c = sub.add_parser(name, help=help_text)
        if graph:
            c.add_argument("graph", help=".kg file or bundled fixture name")
        c.add_argument("--out", help="write the report to this file")
        c.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="cap on enumerated candidate sets")
        c.set_defaults(func=func)
        return c

    command("validate", cmd_validate, "check the factorisation rules of a graph file")
    command("analyze", cmd_analyze, "statistics, predicates, FE inventories, Katsura data, K-theory")
    c = command("fe", cmd_fe, "finite exhaustive sets at a vertex")
    c.add_argument("--vertex", required=True)
    c.add_argument("--max-l", type=int, help="enumerate sets of paths with L <= this (default: edges only)")
    c.add_argument("--minimal", action="store_true", help="only inclusion-minimal sets")
    c = command("katsura", cmd_katsura, "Katsura ideal data for one color")
    c.add_argument("--color", type=int, required=True)
    c = command("reduce-fe", cmd_reduce_fe, "certificate reducing Delta^F to edge-level sets")
    c.add_argument("--vertex", required=True)
    c.add_argument("--set", required=True, help="comma-separated paths, edges joined by '.'")
    c.add_argument("--h", help="comma-separated vertex set H; paths with source in H are dropped")
    c.add_argument("--l-budget", type=int, default=DEFAULT_L_BUDGET)
    c = command("verify", cmd_verify, "run verification suites")
    c.add_argument("--suite", default="all", choices=SUITES + ("all",))
    c.add_argument("--seed", type=int, default=0)
    c = command("fixtures", cmd_fixtures, "list or print bundled fixtures", graph=False)
    c.add_argument("--dump", help="print this fixture")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (KGraphError, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
