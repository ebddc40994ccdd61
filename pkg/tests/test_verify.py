import json
import shutil
from importlib import resources

import pytest

from qgl3.catalog import SolutionData, load
from qgl3.verify import VerifyConfig, verify_solution


def test_all_declared_choices_pass(catalog):
    """Every listed discrete root choice is a valid instance (D1/D2 g3)."""
    for sid in catalog.list():
        rec = catalog.get(sid)
        for choice in rec.choices:
            for value in choice.values:
                data = SolutionData.from_record(rec, choices={choice.name: value})
                rep = verify_solution(
                    data,
                    depth="tensor",
                    config=VerifyConfig(depth="tensor", retry_conjugate=False),
                )
                assert rep.ok, (sid, choice.name, value, [c.name for c in rep.failures()])


def test_unknown_choice_rejected(catalog):
    with pytest.raises(KeyError):
        SolutionData.from_record(catalog.get("D1"), choices={"nope": "1"})


def _swap_branch(text: str) -> str:
    return text.replace("z3^2", "@TMP@").replace("z3", "z3^2").replace("@TMP@", "z3")


def test_conjugate_branch_retry(tmp_path, catalog):
    """A printed block transcribed on the other root branch is accepted via
    the flagged conjugate retry."""
    src = resources.files("qgl3.catalog") / "data"
    for fam in "ABCDEFG":
        shutil.copy(str(src / f"{fam}.json"), tmp_path / f"{fam}.json")
    doc = json.loads((tmp_path / "A.json").read_text())
    for block in doc["appendix"]:
        if "A1" in block["applies"]:
            block["rows"] = [[_swap_branch(e) for e in row] for row in block["rows"]]
    (tmp_path / "A.json").write_text(json.dumps(doc))
    cat = load(tmp_path)
    rep = verify_solution(cat.get("A1"), depth="tensor")
    assert rep.ok
    assert rep.branch == "conjugate"
    assert any("conjugate branch" in note for note in rep.notes)


def test_branch_flag_defaults_to_principal(catalog):
    rep = verify_solution(catalog.get("E2"), depth="tensor")
    assert rep.ok and rep.branch == "principal"


def test_verify_depth_validation(catalog):
    with pytest.raises(ValueError):
        verify_solution(catalog.get("A1"), depth="everything")


def test_symbolic_rank_depth(catalog):
    cfg = VerifyConfig(depth="poincare", symbolic_rank=True)
    rep = verify_solution(catalog.get("B1"), depth="poincare", config=cfg)
    assert rep.ok
    checks = {c.name: c for c in rep.checks}
    assert "symbolic" in checks["poincare_plane"].notes[0]
