import json

from modlie.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_algebra_writes_file(tmp_path, capsys):
    out = tmp_path / "w.json"
    code, _, _ = run_cli(capsys, "algebra", "witt:3,2", "--out", str(out))
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["dim"] == 9 and obj["p"] == 3
    # round trip through the loader is lossless
    from modlie.lie_core import algebra_from_json, algebra_to_json

    assert algebra_to_json(algebra_from_json(obj)) == obj


def test_algebra_envelope_includes_pmap_and_provenance(capsys):
    code, out, _ = run_cli(capsys, "algebra", "envelope:3,2")
    assert code == 0
    obj = json.loads(out)
    assert obj["dim"] == 10
    assert obj["provenance"][-1] == [0, 1]
    assert len(obj["pmap"]) == 10


def test_algebra_rejects_nonprime(capsys):
    code, _, err = run_cli(capsys, "algebra", "witt:4,1")
    assert code == 2
    assert "prime" in err


def test_module_json_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "module", "witt:3,1", "verma:2")
    assert code == 0
    obj = json.loads(out)
    assert obj["dim"] == 3 and obj["label"] == "V(2)"
    from modlie.repmod import module_from_json

    M = module_from_json(obj)
    assert M.dim == 3


def test_cohomology_command_values(capsys):
    code, out, _ = run_cli(
        capsys, "cohomology", "witt:3,1", "verma:2", "--max-degree", "2"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["dims"] == [1, 2, 1]
    code, out, _ = run_cli(
        capsys, "cohomology", "envelope:3,1", "verma:2", "--max-degree", "1"
    )
    assert code == 0
    assert json.loads(out)["dims"][1] == 2
    code, out, _ = run_cli(
        capsys, "cohomology", "witt:5,1", "trivial", "--max-degree", "2"
    )
    assert code == 0
    assert json.loads(out)["dims"][2] == 1


def test_cohomology_guard(capsys):
    code, _, err = run_cli(
        capsys,
        "cohomology",
        "witt:7,2",
        "adjoint",
        "--max-degree",
        "2",
    )
    assert code == 2
    assert "basis elements" in err


def test_cohomology_table_format(capsys):
    code, out, _ = run_cli(
        capsys,
        "cohomology",
        "witt:3,1",
        "verma",
        "--lambda",
        "2",
        "--format",
        "table",
    )
    assert code == 0
    assert "degree | dim H^n" in out


def test_restricted_h1_command(capsys):
    code, out, _ = run_cli(capsys, "restricted-h1", "envelope:3,2", "verma:1")
    assert code == 0
    assert json.loads(out)["restricted_h1"] == 1
    code, _, err = run_cli(capsys, "restricted-h1", "witt:3,2", "verma:1")
    assert code == 2


def test_composition_series_command(capsys):
    code, out, _ = run_cli(capsys, "composition-series", "witt:3,1", "verma:0")
    assert code == 0
    assert [f[0] for f in json.loads(out)["factors"]] == [2, 1]


def test_isomorphic_command(capsys):
    code, out, _ = run_cli(capsys, "isomorphic", "witt:3,1", "adjoint", "verma:1")
    assert code == 0
    assert json.loads(out)["isomorphic"] is True
    code, out, _ = run_cli(capsys, "isomorphic", "witt:3,1", "adjoint", "trivial")
    assert code == 0
    assert json.loads(out)["isomorphic"] is False


def test_verify_single_check(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--check", "2cohzas", "--p", "3", "--m", "2"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["pass"] is True
    assert obj["cases"][0]["expected"] == 1  # m - 1


def test_verify_all_small(capsys):
    code, out, _ = run_cli(capsys, "verify", "--all", "--p", "2", "--m", "1")
    assert code == 0
    reports = json.loads(out)
    assert all(r["pass"] for r in reports)


def test_verify_outside_grid(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--check", "1cohzas", "--p", "11", "--m", "2"
    )
    assert code == 2
    assert "basis elements" in err


def test_verify_table_format(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify",
        "--check",
        "invzas",
        "--p",
        "3",
        "--m",
        "1",
        "--format",
        "table",
    )
    assert code == 0
    assert "pass" in out


def test_json_output_is_byte_stable(capsys):
    _, out1, _ = run_cli(capsys, "cohomology", "witt:3,1", "verma:1")
    _, out2, _ = run_cli(capsys, "cohomology", "witt:3,1", "verma:1")
    assert out1 == out2


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("MODLIE_SEED", "not-an-int")
    code, _, err = run_cli(capsys, "composition-series", "witt:3,1", "verma:0")
    assert code == 2
    monkeypatch.setenv("MODLIE_SEED", "7")
    code, out, _ = run_cli(capsys, "composition-series", "witt:3,1", "verma:0")
    assert code == 0
