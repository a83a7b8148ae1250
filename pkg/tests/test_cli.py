import json
import shutil

import pytest

from ordlogic.casebook import FIXTURES
from ordlogic.cli import main

F = FIXTURES


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_classify(capsys):
    code, out = run(capsys, "classify", F / "classify/student.fo")
    assert code == 0 and out.split() == ["FO", "L_inf", "L_suf"]


def test_classify_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.fo"
    p.write_text("(and")
    assert main(["classify", str(p)]) == 2


def test_model_check_json(capsys):
    code, out = run(capsys, "--format", "json", "mc", F / "c6/A.txt", F / "c6/phi.fo",
                    "--engine", "windowed")
    assert code == 0 and json.loads(out)["value"] is True


def test_model_check_unknown_symbol_and_assignment(tmp_path, capsys):
    assert run(capsys, "mc", F / "c5/A.txt", F / "classify/requantify.fo")[0] == 2
    f = tmp_path / "succ.fo"
    f.write_text("(exists x2 (R x1 x2))")
    code, out = run(capsys, "mc", F / "gsuf-pair/A.txt", f, "--assign", "x1=0.1")
    assert out.strip() == "true"
    code, out = run(capsys, "mc", F / "gsuf-pair/A.txt", f, "--assign", "x1=0.0")
    assert out.strip() == "false"


def test_matrix_round_trip_via_cli(tmp_path, capsys):
    code, bits = run(capsys, "encode", "--matrix", F / "c5/A.txt")
    p = tmp_path / "m.txt"
    p.write_text(bits)
    code, out = run(capsys, "decode", "--matrix", p, "--sig", "R/2", "--domain", "a b c")
    assert code == 0 and "R/2: (a b) (a c) (b c) (c c)" in out


def test_bisim_commands(tmp_path, capsys):
    A, B = F / "b2-lemma18-repaired/A.txt", F / "b2-lemma18-repaired/B.txt"
    assert run(capsys, "bisim", "game", A, B, "--logic", "L_pre", "--rounds", "4")[0] == 0
    assert run(capsys, "bisim", "game", A, B, "--logic", "L_suf", "--rounds", "3")[0] == 1
    code, out = run(capsys, "bisim", "fixpoint", F / "b2-lemma19-repaired/A.txt",
                    F / "b2-lemma19-repaired/B.txt", "--logic", "G_suf")
    rel = tmp_path / "z.txt"
    rel.write_text(out)
    code, out = run(capsys, "bisim", "verify", F / "b2-lemma19-repaired/A.txt",
                    F / "b2-lemma19-repaired/B.txt", rel, "--logic", "G_suf")
    assert code == 0


def test_rewrite_commands(capsys):
    code, out = run(capsys, "rewrite", F / "c5/phi.fo", "--to-suf")
    assert code == 0 and out.startswith("(")
    code, out = run(capsys, "--format", "json", "rewrite", F / "gsuf-pair/phi.fo",
                    "--nf-guarded", "--model", F / "gsuf-pair/A.txt")
    data = json.loads(out)
    assert data["logic"] == "G_suf" and "model" in data


def test_unravel_with_checks(capsys):
    code, out = run(capsys, "unravel", F / "c5/A.txt", "--depth", "3", "--check")
    assert code == 0 and "hedge: True" in out


@pytest.mark.parametrize("logic", ["pre", "gsuf"])
def test_amalgam(capsys, logic):
    tag = "pre-pair" if logic == "pre" else "gsuf-pair"
    code, out = run(capsys, "amalgam", "--logic", logic, "--stages", "2",
                    F / tag / "phi.fo", F / tag / "psi.fo", F / tag / "A.txt", F / tag / "B.txt")
    assert code == 0 and out.startswith("domain:")


def test_verify_paper_filter(capsys):
    code, out = run(capsys, "verify-paper", "--only", "c5")
    lines = out.strip().splitlines()
    assert code == 0 and all("[c5]" in line for line in lines[:-1])


def test_verify_paper_unknown_block(capsys):
    assert main(["verify-paper", "--only", "nope"]) == 2


def test_verify_paper_negative_control(tmp_path, capsys):
    root = tmp_path / "fx"
    shutil.copytree(F, root)
    a = root / "b2-lemma18/A.txt"
    a.write_text(a.read_text().replace("T/2: (2 3) ", "T/2: "))
    code, out = run(capsys, "verify-paper", "--only", "b2-lemma18", "--fixtures", root)
    assert code == 1 and "FAIL  [b2-lemma18] b2-lemma18-formula" in out
