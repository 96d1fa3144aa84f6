import json
import re
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from mckayfix.cli import main


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def _dot_vertices(text: str) -> int:
    return len(re.findall(r"\[label=", text))


def _schema() -> dict:
    return json.loads(resources.files("mckayfix").joinpath("data/report.schema.json").read_text())


def test_verify_g12(capsys):
    code, out = run(capsys, "verify", "--group", "g12")
    assert code == 0
    assert "theorem_a: 6+1+1=8" in out
    assert out.rstrip().endswith("0 failed")
    assert re.search(r"^PASS\s+relation\.g12\s", out, re.M)
    assert re.search(r"^PASS\s+curve\.g12\.rho3\s", out, re.M)


def test_verify_g2mm2_m6(capsys):
    code, out = run(capsys, "verify", "--group", "g2mm2", "--m", "6")
    assert code == 0
    assert "branch_components: 3" in out


def test_verify_g22_json(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, _ = run(capsys, "verify", "--group", "g22", "--json", str(path))
    assert code == 0
    report = json.loads(path.read_text())
    jsonschema.validate(report, _schema())
    checks = {c["id"]: c for c in report["checks"]}
    assert "18 classes" in checks["classes.g22"]["detail"]
    assert checks["theorem_a.g22"]["detail"] == "theorem_a: 16+1+1=18"
    assert report["summary"]["fail"] == 0
    assert report["summary"]["pass"] == len(report["checks"])
    assert "relation.g22" in checks


def test_verify_gmm2_count_only(capsys):
    code, out = run(capsys, "verify", "--group", "gmm2", "--m", "5")
    assert code == 0
    assert "counts verified, fixed-locus geometry out of scope" in out
    assert "theorem_a: 2+1+1=4" in out


def test_quiver_g12_sl2_dot(capsys):
    code, out = run(capsys, "quiver", "--group", "g12", "--sl2", "--format", "dot")
    assert code == 0 and out.startswith("graph ")
    assert _dot_vertices(out) == 7
    assert out.count(" -- ") == 6


def test_quiver_g2mm2_json(capsys):
    code, out = run(capsys, "quiver", "--group", "g2mm2", "--m", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["vertices"]) == 14
    assert len(data["adjacency"]) == 14 and all(len(row) == 14 for row in data["adjacency"])


def test_quiver_g13_dot(capsys):
    code, out = run(capsys, "quiver", "--group", "g13", "--format", "dot")
    assert code == 0 and _dot_vertices(out) == 16


def test_fixed_locus_lines(capsys):
    _, out = run(capsys, "fixed-locus", "--group", "g13")
    assert "  E(rho_4): pointwise-fixed" in out.splitlines()
    _, out = run(capsys, "fixed-locus", "--group", "g12")
    assert "E(rho_1'): exchanged-with E(rho_1'')" in out
    assert "Moebius on E(rho_3)" in out
    _, out = run(capsys, "fixed-locus", "--group", "g2mm2", "--m", "4")
    assert "E(rho_2): pointwise-fixed" in out


def test_fixed_locus_gmm2(capsys):
    code, out = run(capsys, "fixed-locus", "--group", "gmm2", "--m", "4")
    assert code == 0 and "out of scope" in out


def test_case_data(capsys):
    code, out = run(capsys, "case-data", "--group", "g12")
    data = json.loads(out)
    assert code == 0 and data["key"] == "g12" and data["coxeter"] == 12


def test_bad_format_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["quiver", "--group", "g12", "--format", "png"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["verify", "--group", "g2mm2", "--m", "2"],
    ["verify", "--group", "g12", "--m", "4"],
    ["quiver", "--group", "gmm2"],
    ["quiver", "--group", "all"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_group_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--group", "g99"])
    assert exc.value.code == 2


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "mckayfix", "verify", "--group", "g2mm2", "--m", "3"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and "0 failed" in a
    q = [sys.executable, "-m", "mckayfix", "quiver", "--group", "g13", "--format", "json", "--seed", "7"]
    assert subprocess.run(q, capture_output=True, text=True).stdout == \
        subprocess.run(q, capture_output=True, text=True).stdout


def test_failure_exit_code(capsys, monkeypatch):
    import mckayfix.cli as cli

    monkeypatch.setattr(cli, "theorem_a_check", _off_by_one)
    code, out = run(capsys, "verify", "--group", "gmm2", "--m", "3")
    assert code == 1 and re.search(r"^FAIL\s+theorem_a\.gmm2_m3", out, re.M)


def _off_by_one(counts, n):
    from mckayfix.sod import theorem_a_check

    return theorem_a_check(counts, n + 1)
