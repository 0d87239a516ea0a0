import json

import pytest

from grasstensor import fixtures
from grasstensor.cli import main
from grasstensor.tensor3 import from_json, flatten

from reference import WORKED_TENSOR_FLAT


def fx(name):
    return str(fixtures.path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_writes_tensor_and_sidecar(tmp_path, capsys):
    out = tmp_path / "t.json"
    code, _, _ = run(capsys, "build", "--input", fx("setup_k4_h322_a221"), "--output", str(out))
    assert code == 0
    t = from_json(json.loads(out.read_text()))
    assert flatten(t, 1).tolist() == WORKED_TENSOR_FLAT.tolist()
    side = json.loads((tmp_path / "t.sidecar.json").read_text())
    assert side["sign_convention"] == "block-ascending-v1" and side["dims"] == [6, 3, 3]


def test_build_to_stdout(capsys):
    code, out, _ = run(capsys, "build", "-i", fx("setup_k4_h322_a221"), "--method", "minors")
    assert code == 0 and json.loads(out)["tensor"]["dims"] == [6, 3, 3]


def test_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "build", "-i", str(bad))
    assert code == 2 and "parse error" in err
    assert run(capsys, "build", "-i", str(tmp_path / "missing.json"))[0] == 2


def test_profile_not_summing_exits_3(tmp_path, capsys):
    obj = fixtures.load_json("setup_k4_h322_a221")
    obj["profile"] = [2, 2, 2]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(obj))
    assert run(capsys, "build", "-i", str(path))[0] == 3


def test_rank_output(capsys):
    code, out, _ = run(capsys, "rank", "-i", fx("canonical_k7_h644_a332"))
    rep = json.loads(out)
    assert code == 0
    assert rep["frank_formula"] == rep["frank_oracle"] == [31, 10, 10]
    assert rep["per_mode"][0]["zero_rows"] == [20, 30, 34, 35]
    assert rep["per_mode"][0]["deficiency_triples"] == [[0, 3, 0], [1, 2, 0]]
    code, out, _ = run(capsys, "rank", "-i", fx("canonical_k7_h644_a332"), "--mode", "2")
    assert [m["mode"] for m in json.loads(out)["per_mode"]] == [2]


def test_rank_on_nongeneric_reports_oracle_only(capsys):
    code, out, _ = run(capsys, "rank", "-i", fx("nongeneric_degenerate"))
    rep = json.loads(out)
    assert code == 0 and rep["frank_formula"] is None and rep["frank_oracle"][0] <= 2


def test_canonical(capsys):
    code, out, _ = run(capsys, "canonical", "-i", fx("setup_k4_h322_a221"))
    rep = json.loads(out)
    assert code == 0 and len(rep["Phi"]) == 5 and len(rep["V"][0]) == 6
    assert run(capsys, "canonical", "-i", fx("nongeneric_free"))[0] == 3


@pytest.mark.parametrize("method", ["hosvd", "canonical"])
def test_core(method, capsys):
    code, out, _ = run(capsys, "core", "-i", fx("setup_k4_h322_a221"), "--method", method)
    rep = json.loads(out)
    assert code == 0 and rep["method"] == method and rep["dims"] == [5, 3, 3]
    assert max(rep["residuals"]["semi_orth"]) <= 1e-10 and rep["residuals"]["reconstruct"] <= 1e-9


def test_core_from_tensor_file(tmp_path, capsys):
    out = tmp_path / "t.json"
    run(capsys, "build", "-i", fx("setup_k4_h322_a221"), "-o", str(out))
    code, text, _ = run(capsys, "core", "-i", str(out))
    assert code == 0 and json.loads(text)["dims"] == [5, 3, 3]
    assert run(capsys, "core", "-i", str(out), "--method", "canonical")[0] == 3


def test_gen_is_deterministic_and_generic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "gen", "--k", "5", "--h", "2,4,4", "--profile", "2,2,2", "--seed", "7", "-o", str(p))[0] == 0
    assert a.read_text() == b.read_text()
    assert json.loads(a.read_text())["generation"]["attempts"] >= 1
    code, out, _ = run(capsys, "rank", "-i", str(a))
    assert json.loads(out)["frank_oracle"] == [3, 9, 9]


def test_gen_dims_k8_h555(tmp_path, capsys):
    p = tmp_path / "g.json"
    run(capsys, "gen", "--k", "8", "--h", "5,5,5", "--profile", "1,4,4", "--seed", "1", "-o", str(p))
    code, out, _ = run(capsys, "rank", "-i", str(p))
    assert json.loads(out)["frank_oracle"] == [6, 12, 12]


def test_gen_errors(capsys):
    assert run(capsys, "gen", "--k", "5", "--h", "2,4,4", "--profile", "3,2,1")[0] == 3
    assert run(capsys, "gen", "--k", "4", "--h", "2,2,2", "--profile", "2,2,1")[0] == 4
    assert run(capsys, "gen", "--k", "5", "--h", "2,4,4")[0] == 2


def test_verify_passes_on_worked_example(capsys):
    code, out, _ = run(capsys, "verify", "-i", fx("setup_k4_h322_a221"))
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["failed"] == []
    assert {"genericity", "formula_rank", "zero_rows", "hosvd_core", "canonical_core", "diagram"} <= set(rep["checks"])


def test_verify_nongeneric(capsys):
    code, out, err = run(capsys, "verify", "-i", fx("nongeneric_degenerate"))
    rep = json.loads(out)
    assert code == 1 and rep["failed"] == ["genericity"] and "formula_rank" in rep["skipped"]
    assert rep["frank_oracle"][0] <= 2 and "genericity" in err


def test_verify_tampered_tensor(tmp_path, capsys):
    t = tmp_path / "t.json"
    run(capsys, "build", "-i", fx("setup_k4_h322_a221"), "-o", str(t))
    obj = json.loads(t.read_text())
    obj["entries"][5] = "7"
    t.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "verify", "-i", fx("setup_k4_h322_a221"), "--tensor", str(t))
    rep = json.loads(out)
    assert code == 1
    assert "canonical_core" in rep["failed"]
    assert any("reconstruction" in f for f in rep["checks"]["canonical_core"]["failures"])


def test_tolerance_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("GRASSTENSOR_TOL", "-1")
    assert run(capsys, "rank", "-i", fx("setup_k4_h322_a221"))[0] == 2
    monkeypatch.setenv("GRASSTENSOR_TOL", "1e-30")
    code, out, _ = run(capsys, "core", "-i", fx("setup_k4_h322_a221"))
    assert code == 1  # nothing reconstructs to 1e-30


def test_bad_tol_flag_is_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rank", "--tol", "0"])
    assert exc.value.code == 2
