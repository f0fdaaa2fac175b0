import json

import pytest

from u3cubature.cli.main import run


def lines(capsys):
    return capsys.readouterr().out.splitlines()


def test_classes(capsys):
    assert run(["classes", "--n", "10", "--format", "machine"]) == 0
    assert lines(capsys) == ["10 139"]


def test_classes_range(capsys):
    assert run(["classes", "--n", "4", "--start", "1", "--format", "machine", "--brute"]) == 0
    assert lines(capsys) == ["1 2", "2 4", "3 7", "4 12"]


def test_search_first_minima(capsys):
    assert run(["search", "--m", "2", "--format", "machine", "--quiet"]) == 0
    assert lines(capsys) == [
        "2 1 1 14 1 0 0 1 0 0 4",
        "2 2 1 18 1 1 0 0 0 0 4",
        "2 3 1 20 0 1 0 1 0 0 4",
        "2 4 1 24 0 0 0 0 1 0 3",
        "2 4 2 24 0 0 1 0 0 0 3",
        "2 5 1 26 1 1 0 1 0 0 6",
    ]


def test_search_text_has_header(capsys):
    assert run(["search", "--m", "1", "--nmax", "8", "--quiet"]) == 0
    out = lines(capsys)
    assert out[0].split() == ["m", "i.j", "N", "structure", "v"]
    assert "(1,0,0,0,0,0)" in out[1]


def test_lowerbound(capsys):
    assert run(["lowerbound", "--m", "8", "--format", "machine"]) == 0
    fields = lines(capsys)[0].split()
    assert fields[:2] == ["8", "110"]
    assert len(fields) == 8


def test_moments(capsys):
    assert run(["moments", "--m", "1", "--format", "machine"]) == 0
    assert lines(capsys) == ["0 0 0 4 1", "0 0 1 4 3"]


def test_star(capsys):
    assert run(["star", "--m", "1", "--structure", "1,0,0,0,0,0"]) == 0
    assert lines(capsys)[-1] == "There are a total of 3 equations."


def test_solve_and_verify(tmp_path, capsys):
    out = tmp_path / "m2.json"
    code = run(["solve", "--m", "2", "--structure", "1,0,0,1,0,0", "--workers", "2", "--out", str(out), "--quiet"])
    assert code == 0
    text = capsys.readouterr().out
    assert "U3:5-1.1(1,0,0,1,0,0)-14" in text
    assert "good" in text
    assert json.loads(out.read_text())["kind"] == "generator"

    assert run(["verify", "--rule", str(out), "--format", "machine"]) == 0
    assert lines(capsys)[0].split()[:2] == ["5", "1"]


def test_solve_not_converging(capsys):
    code = run(["solve", "--m", "5", "--structure", "1,1,0,1,1,0", "--restarts", "1",
                "--max-iterations", "1", "--workers", "1", "--quiet"])
    assert code == 1


def test_verify_bundled(capsys):
    assert run(["verify", "--rule", "bundled:m5"]) == 0
    out = capsys.readouterr().out
    assert "passes at degree 11" in out


def test_verify_failure_exit_code(capsys):
    assert run(["verify", "--rule", "bundled:m1", "--degree", "5"]) == 1


def test_verify_reports_not_good(capsys):
    assert run(["verify", "--rule", "bundled:m6fsm"]) == 0
    assert "not good: d1" in capsys.readouterr().out


def test_product_and_load(tmp_path, capsys):
    out = tmp_path / "product.json"
    assert run(["product", "--m", "4", "--out", str(out), "--format", "machine", "--quiet"]) == 0
    assert lines(capsys) == ["U3:product-7-32 32 7"]
    assert run(["verify", "--rule", str(out), "--format", "machine"]) == 0
    assert lines(capsys)[0].split()[:2] == ["7", "1"]


def test_product_compare(capsys):
    assert run(["product", "--compare", "--format", "machine"]) == 0
    out = lines(capsys)
    assert out[0] == "3 6 8 75"
    assert out[-1] == "17 110 162 68"


def test_integrate(capsys):
    assert run(["integrate", "--rule", "bundled:m3", "--function", "monomial", "--exponents", "1,1,2",
                "--format", "machine"]) == 0
    value, exact, error = lines(capsys)[0].split()
    assert float(exact) == 0.0
    assert float(error) < 1e-12


def test_integrate_needs_exponents(capsys):
    assert run(["integrate", "--rule", "bundled:m3", "--function", "monomial"]) == 1
    assert "exponents" in capsys.readouterr().err


def test_rules_list_and_export(tmp_path, capsys):
    assert run(["rules", "list", "--format", "machine"]) == 0
    out = lines(capsys)
    assert len(out) == 9
    assert out[5].split()[-1] == "0"
    assert run(["rules", "export", "--all", "--out", str(tmp_path), "--quiet"]) == 0
    assert len(list(tmp_path.glob("*.json"))) == 9
    assert run(["rules", "export", "--name", "U3:17-1.1(1,0,1,1,3,0)-110", "--out", str(tmp_path / "m8.json")]) == 0


def test_usage_errors(capsys):
    assert run([]) == 2
    assert run(["search"]) == 2
    assert run(["classes", "--n", "3", "--format", "xml"]) == 2


def test_domain_errors(capsys):
    assert run(["verify", "--rule", "bundled:m12"]) == 1
    assert run(["star", "--m", "2", "--structure", "1,2,3"]) == 1
    assert run(["product"]) == 1
    assert "❌" in capsys.readouterr().err


def test_output_is_deterministic(capsys):
    run(["solve", "--m", "3", "--structure", "1,1,0,1,0,0", "--format", "machine", "--quiet"])
    first = capsys.readouterr().out
    run(["solve", "--m", "3", "--structure", "1,1,0,1,0,0", "--format", "machine", "--quiet"])
    assert capsys.readouterr().out == first
