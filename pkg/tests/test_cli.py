import json
import shutil
from importlib import resources

from qgl3.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_single_solution(capsys):
    code, out, _ = run(capsys, "verify", "--solution", "A2", "--depth", "tensor")
    assert code == 0
    assert "1/1 solutions pass" in out


def test_verify_unknown_solution(capsys):
    code, _, err = run(capsys, "verify", "--solution", "Z9")
    assert code == 2
    assert "Z9" in err


def test_verify_selector_required(capsys):
    code, _, err = run(capsys, "verify")
    assert code == 2


def test_verify_json_is_byte_deterministic(capsys):
    args = ("verify", "--family", "D", "--depth", "tensor", "--format", "json", "--seed", "5")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["schema"] == "qgl3-report/1"
    assert doc["summary"]["total"] == 2


def test_verify_family_poincare(capsys):
    code, out, _ = run(
        capsys, "verify", "--solution", "E2", "--depth", "poincare", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    checks = {c["check"]: c for c in doc["solutions"][0]["checks"]}
    assert checks["poincare_group"]["status"] == "pass"


def test_verify_c1_confluence_expected(capsys):
    code, out, _ = run(
        capsys, "verify", "--solution", "C1", "--depth", "confluence", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    checks = {c["check"]: c["status"] for c in doc["solutions"][0]["checks"]}
    assert checks["nonorderable_plane"] == "expected"


def test_verify_detects_corrupted_catalog(tmp_path, capsys):
    src = resources.files("qgl3.catalog") / "data"
    for fam in "ABCDEFG":
        shutil.copy(str(src / f"{fam}.json"), tmp_path / f"{fam}.json")
    doc = json.loads((tmp_path / "B.json").read_text())
    doc["records"][0]["F"]["123"] = "1/(u+2)"  # breaks condition A
    (tmp_path / "B.json").write_text(json.dumps(doc))
    code, out, _ = run(
        capsys, "verify", "--solution", "B1", "--catalog", str(tmp_path), "--depth", "tensor"
    )
    assert code == 1
    assert "fail" in out


def test_ybe_file_roundtrip(tmp_path, capsys):
    code, out, _ = run(capsys, "catalog", "export-appendix", "--dir", str(tmp_path))
    assert code == 0
    code, out, _ = run(capsys, "ybe", str(tmp_path / "B2.json"))
    assert code == 0
    assert "yang_baxter" in out
    # corrupt an entry -> YBE failure, exit 1
    doc = json.loads((tmp_path / "A2.json").read_text())
    doc["entries"][1] = "1"
    (tmp_path / "A2.json").write_text(json.dumps(doc))
    code, _, _ = run(capsys, "ybe", str(tmp_path / "A2.json"))
    assert code == 1
    # unreadable file -> usage/input error, exit 2
    (tmp_path / "bad.json").write_text("{}")
    code, _, err = run(capsys, "ybe", str(tmp_path / "bad.json"))
    assert code == 2


def test_catalog_list_and_show(capsys):
    code, out, _ = run(capsys, "catalog", "list", "--family", "F")
    assert code == 0
    assert out.split() == [f"F{i}" for i in range(1, 13)]
    code, out, _ = run(capsys, "catalog", "show", "B2")
    assert code == 0
    doc = json.loads(out)
    assert doc["E"]["132"] == "-u^(1/3)"
    code, _, err = run(capsys, "catalog", "show", "Z9")
    assert code == 2


def test_twist_command(capsys):
    code, out, _ = run(
        capsys, "twist", "--solution", "A1", "--z", "diag(1,z3,z3^2)", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    sol = doc["solutions"][0]
    assert sol["ok"]
    assert sol["twisted_record"]["X"][0][0] == "1"
    checks = {c["check"]: c["status"] for c in sol["checks"]}
    assert checks["automorphism"] == "pass"
    assert checks["twist_invariants"] == "pass"


def test_twist_rejects_non_automorphism(capsys):
    code, out, _ = run(capsys, "twist", "--solution", "C1", "--z", "diag(1,2,3)")
    assert code == 1


def test_poincare_command(capsys):
    code, out, _ = run(
        capsys, "poincare", "--solution", "A1", "--object", "plane",
        "--max-degree", "4", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    check = doc["solutions"][0]["checks"][0]
    assert check["dims"] == [3, 6, 10, 15]
    assert check["agreement"] is True


def test_poincare_symbolic_rank(capsys):
    code, out, _ = run(
        capsys, "poincare", "--solution", "B1", "--object", "coplane",
        "--max-degree", "3", "--symbolic-rank", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    check = doc["solutions"][0]["checks"][0]
    assert check["dims"] == [3, 6, 10]
    assert check["method"] == "symbolic"


def test_verify_parallel_jobs(capsys):
    code, out, _ = run(
        capsys, "verify", "--family", "E", "--depth", "tensor", "--jobs", "2",
        "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert [s["solution"] for s in doc["solutions"]] == ["E1", "E2"]
