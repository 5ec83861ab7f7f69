import yaml

from kgraph import suites
from kgraph.bimodule import CheckReport
from kgraph.cli import main
from kgraph.io import FIXTURES, fixture_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (yaml.safe_load(out.out) if out.out else None), out.err


def test_analyze_wedge(capsys):
    code, report, _ = run(capsys, "analyze", "wedge")
    assert code == 0
    assert report["predicates"]["locally_convex"] is False
    assert report["fe_edge_sets"]["v"] == [["μ", "λ"]]
    assert "katsura" not in report


def test_analyze_cuntz(capsys):
    code, report, _ = run(capsys, "analyze", "cuntz_2")
    assert code == 0
    assert report["k_theory_toeplitz"]["K0"] == "Z" and report["k_theory_toeplitz"]["K1"] == "0"
    assert report["xx_star_in_phi_image"][1]["toeplitz_level"] is False


def test_k_theory_line_on_every_fixture(capsys):
    for name in FIXTURES:
        code, report, _ = run(capsys, "analyze", name)
        n = report["stats"]["vertices"]
        assert code == 0
        assert report["k_theory_toeplitz"]["K0"] == ("Z" if n == 1 else f"Z^{n}")
        assert report["k_theory_toeplitz"]["K1"] == "0"


def test_validate_file_and_errors(capsys, tmp_path):
    good = tmp_path / "q.kg"
    good.write_text(fixture_text("square"), encoding="utf-8")
    code, report, _ = run(capsys, "validate", str(good))
    assert code == 0 and report["valid"] and report["squares"] == 1
    bad = tmp_path / "bad.kg"
    bad.write_text("k: 2\nvertices: [a\nedges: []\n", encoding="utf-8")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "line" in err and "ParseError" in err
    broken = tmp_path / "broken.kg"
    broken.write_text(fixture_text("square").replace("squares:", "unused:"), encoding="utf-8")
    code, _, err = run(capsys, "validate", str(broken))
    assert code == 2 and "NonBijectiveSquares" in err
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.kg"))
    assert code == 2


def test_fe_command(capsys):
    code, report, _ = run(capsys, "fe", "square", "--vertex", "A")
    assert code == 0 and report["count"] == 3
    code, report, _ = run(capsys, "fe", "square", "--vertex", "A", "--max-l", "2", "--minimal")
    assert code == 0 and ["f1.g2"] in report["sets"]


def test_katsura_command(capsys):
    code, report, _ = run(capsys, "katsura", "square", "--color", "1")
    assert code == 0 and report["H_JX"] == ["A", "C"] and report["H_ker"] == ["B", "D"]
    code, _, err = run(capsys, "katsura", "wedge", "--color", "1")
    assert code == 2 and "NotLocallyConvex" in err


def test_reduce_fe_command(capsys, tmp_path):
    out = tmp_path / "cert.yaml"
    code, _, _ = run(capsys, "reduce-fe", "square", "--vertex", "A", "--set", "f1.g2", "--out", str(out))
    cert = yaml.safe_load(out.read_text(encoding="utf-8"))
    assert code == 0 and cert["verified"] is True
    assert sorted(b["mu"] for b in cert["tree"]["branches"]) == ["f1", "g1"]
    code, _, err = run(capsys, "reduce-fe", "wedge", "--vertex", "v", "--set", "λ")
    assert code == 2 and "NotExhaustive" in err
    code, cert, _ = run(capsys, "reduce-fe", "square", "--vertex", "A", "--set", "f1,g1", "--h", "D")
    assert code == 0 and cert["H"] == ["D"]


def test_verify_square_all(capsys):
    code, report, _ = run(capsys, "verify", "square", "--suite", "all", "--seed", "3")
    assert code == 0 and report["passed"] is True
    assert set(report["suites"]) == set(suites.SUITES)


def test_verify_exit_code_on_failure(capsys, monkeypatch):
    def failing(graph, seed=0, budget=0):
        rep = CheckReport("always_fails")
        rep.record(False, reason="forced")
        return [rep]

    monkeypatch.setitem(suites.SUITE_FUNCTIONS, "combinatorics", failing)
    code, report, _ = run(capsys, "verify", "square", "--suite", "combinatorics")
    assert code == 1 and report["passed"] is False


def test_fixtures_command(capsys):
    code, report, _ = run(capsys, "fixtures")
    assert code == 0 and report["fixtures"] == list(FIXTURES)
    code, spec, _ = run(capsys, "fixtures", "--dump", "wedge")
    assert code == 0 and spec["k"] == 2


def test_unknown_names_are_input_errors(capsys):
    for argv in (
        ("reduce-fe", "square", "--vertex", "A", "--set", "x"),
        ("reduce-fe", "square", "--vertex", "Z", "--set", "f1"),
        ("reduce-fe", "square", "--vertex", "A", "--set", "f1,g1", "--h", "Q"),
        ("fe", "square", "--vertex", "Z"),
        ("katsura", "square", "--color", "3"),
    ):
        code, _, err = run(capsys, *argv)
        assert code == 2 and err.startswith("error: KGraphError"), argv
