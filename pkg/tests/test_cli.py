import json

import jsonschema
import numpy as np
import pytest

from pf_lattice.cli import UsageError, main, parse_dims

from conftest import DATA, SCHEMA

VALIDATOR = jsonschema.Draft202012Validator(json.loads(SCHEMA.read_text()))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    report = json.loads(out) if out.strip() else None
    if report is not None:
        VALIDATOR.validate(report)
    return code, report, err


def fixture(name):
    return DATA / f"{name}.json"


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(json.loads(SCHEMA.read_text()))


def test_analyze_swap_identity(capsys):
    code, rep, _ = run(capsys, "analyze", fixture("swap_identity"))
    st = rep["structure"]
    assert code == 0 and rep["status"] == "ok"
    assert np.abs(np.array(st["projection"]) - np.eye(4)).max() <= 1e-9
    assert st["permutation"] == [2, 1, 3, 4] and st["period"] == 2


def test_analyze_nilpotent_exits_2(capsys):
    code, rep, err = run(capsys, "analyze", fixture("nilpotent2"))
    assert code == 2 and rep["status"] == "hypothesis_violated"
    assert rep["reason"] == "spectral radius below tolerance"
    assert "spectral radius below tolerance" in err


def test_analyze_cyclic3_single_cycle(capsys):
    code, rep, _ = run(capsys, "analyze", fixture("cyclic3"))
    assert code == 0
    assert len(rep["structure"]["cycles"]) == 1 and len(rep["structure"]["cycles"][0]) == 3


def test_irreducible_modes(capsys):
    assert run(capsys, "irreducible", "--plain", fixture("ones4"))[0] == 0
    code, rep, _ = run(capsys, "irreducible", "--super-right", fixture("diag21"))
    assert code == 3 and rep["certificate"]["witness"] == [2]
    for flag in ("--super-left", "--super-right"):
        code, rep, _ = run(capsys, "irreducible", flag, fixture("swap_identity"))
        assert code == 0 and rep["status"] == "irreducible"


def test_irreducible_collection(capsys):
    code, rep, _ = run(capsys, "irreducible", fixture("diag21"), fixture("nilpotent2"))
    assert code == 3 and rep["certificate"]["witness"] == [1]
    code, _, _ = run(capsys, "irreducible", "--super-left", fixture("diag21"), fixture("ones4"))
    assert code == 1


def test_commutant_gap(capsys):
    code, rep, _ = run(capsys, "commutant", "--gap", fixture("swap_identity"))
    assert code == 0 and rep["gap_right"] <= 1e-7 and rep["gap_left"] <= 1e-7


def test_commutant_relation(capsys):
    code, rep, _ = run(capsys, "commutant", "--relation", fixture("diag21"))
    edges = np.array(rep["relation"]["edges"])
    assert code == 0 and (edges - np.eye(2)).sum() == 1


def test_commutant_sample(capsys):
    code, rep, _ = run(capsys, "commutant", "--sample", 5, "--seed", 7, fixture("identity2"))
    assert code == 0 and len(rep["samples"]) == 5
    assert all(np.min(m["rows"]) >= 0 for m in rep["samples"])


def test_triangularize_examples(capsys):
    code, rep, _ = run(capsys, "triangularize", fixture("ones4"), fixture("swap_identity"))
    assert code == 0 and rep["certificate"]["index"] == 1
    assert np.abs(rep["certificate"]["commutator"]).max() == 0
    code, rep, _ = run(capsys, "triangularize", fixture("upper2"), fixture("proj2"))
    assert code == 0 and rep["certificate"]["index"] == 2
    assert rep["certificate"]["chain"] == [[], [1], [1, 2]]
    code, rep, _ = run(capsys, "triangularize", fixture("ones4"), fixture("ones4"))
    assert code == 0 and rep["certificate"]["index"] == 1


def test_triangularize_precondition(capsys, tmp_path):
    # T = E_12 and K = E_21: TK - KT = diag(1, -1) has both signs.
    t, k = tmp_path / "t.json", tmp_path / "k.json"
    t.write_text('{"n": 2, "rows": [[0, 1], [0, 0]]}')
    k.write_text('{"n": 2, "rows": [[0, 0], [1, 0]]}')
    code, rep, _ = run(capsys, "triangularize", t, k)
    assert code == 5 and rep["status"] == "precondition_violated"


def test_suite_examples(capsys):
    code, rep, _ = run(capsys, "suite", "--only", "turo", "--n", 3)
    assert code == 0 and rep["status"] == "pass"
    assert run(capsys, "suite", "--trials", 0)[0] == 1
    assert run(capsys, "suite", "--n", "1")[0] == 1
    assert run(capsys, "suite", "--only", "nope")[0] == 1


def test_suite_failure_exit(capsys, monkeypatch):
    from pf_lattice import verify

    spec = verify.resolve_property("oracle")
    bad = verify.PropertySpec(spec.name, spec.alias, lambda rng, n, tol, mats: verify.Outcome(False, None), "")
    monkeypatch.setitem(verify._BY_KEY, spec.name, bad)
    code, rep, _ = run(capsys, "suite", "--only", "oracle", "--trials", 2)
    assert code == 6 and rep["status"] == "fail" and rep["properties"][0]["counterexample"]


def test_parse_dims():
    assert parse_dims("4") == (4,)
    assert parse_dims("3,5") == (3, 5)
    assert parse_dims("3-6") == (3, 4, 5, 6)
    with pytest.raises(UsageError):
        parse_dims("x")


@pytest.mark.parametrize("argv", [
    ["analyze", "missing.json"], ["bogus"], [], ["commutant", "X"],
    ["analyze", "X", "--tol", "zero=abc"], ["analyze", "X", "--tol", "nope=1"],
])
def test_usage_and_io_errors(capsys, argv):
    argv = [str(fixture("ones4")) if a == "X" else a for a in argv]
    code, rep, err = run(capsys, *argv)
    assert code == 1 and rep is None and err


def test_bad_matrix_files(capsys, tmp_path):
    cases = {
        "neg.json": '{"n": 2, "rows": [[1, -1], [0, 1]]}',
        "ragged.json": '{"n": 2, "rows": [[1, 0], [0]]}',
        "bare.json": "[[1, 0], [0, 1]]",
        "junk.json": "{",
        "bad.csv": "1,x\n0,1\n",
    }
    for name, text in cases.items():
        p = tmp_path / name
        p.write_text(text)
        code, rep, err = run(capsys, "analyze", p)
        assert code == 1 and rep is None and err, name


def test_csv_input(capsys, tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("0,1,0\n0,0,1\n1,0,0\n")
    code, rep, _ = run(capsys, "analyze", p)
    assert code == 0 and rep["structure"]["period"] == 3


def test_report_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = main(["analyze", str(fixture("cyclic3")), "--report", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    VALIDATOR.validate(json.loads(out.read_text()))
    assert main(["analyze", str(fixture("cyclic3")), "--report", str(tmp_path / "no" / "r.json")]) == 1


def test_tolerance_environment(capsys, monkeypatch):
    monkeypatch.setenv("PF_LATTICE_TOL", "1e-3")
    code, _, _ = run(capsys, "analyze", fixture("identity2"))
    assert code == 0
    monkeypatch.setenv("PF_LATTICE_TOL", "not-a-number")
    assert run(capsys, "analyze", fixture("identity2"))[0] == 1
    monkeypatch.setenv("PF_LATTICE_TOL", "zero=1e-12,lp_eps=1e-8")
    assert run(capsys, "analyze", fixture("identity2"))[0] == 0


def test_tol_flag_changes_verdict(capsys, tmp_path):
    p = tmp_path / "tiny.json"
    p.write_text('{"n": 2, "rows": [[1e-6, 0], [0, 1e-6]]}')
    assert run(capsys, "analyze", p)[0] == 0
    code, rep, _ = run(capsys, "analyze", p, "--tol", "1e-3")
    assert code == 2 and rep["status"] == "hypothesis_violated"


@pytest.mark.parametrize("argv", [
    ["analyze", "swap_identity"],
    ["irreducible", "--super-right", "weighted_blocks"],
    ["commutant", "--sample", "4", "--seed", "3", "swap_identity"],
    ["triangularize", "ones4", "swap_identity"],
])
def test_commands_are_pure(capsys, argv):
    argv = [str(fixture(a)) if (DATA / f"{a}.json").exists() else a for a in argv]
    assert main(argv) in (0, 3)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
