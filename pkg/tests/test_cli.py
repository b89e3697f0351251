import json
import math
import subprocess
import sys

import pytest

from flagcat.cli import main
from flagcat.complex import read_complex
from flagcat.fixtures import fixture
from flagcat.metric import read_metric


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    assert main(["fixtures", "--dir", str(root)]) == 0
    return root


def cx(root, name):
    return str(root / "fixtures" / f"{name}.cx")


def eq(root):
    return str(root / "metrics" / "equilateral.len")


def test_fixtures_are_written(workdir):
    assert read_complex(cx(workdir, "k0")) == fixture("k0")
    assert not (workdir / "fixtures" / "dunce_hat.cx").exists()
    K = fixture("torus")
    assert read_metric(eq(workdir), K).lengths == {e: 1.0 for e in K.edges}


def test_check_flag(workdir, capsys):
    assert main(["check-flag", cx(workdir, "k0")]) == 0
    assert "flag: yes" in capsys.readouterr().out
    hollow = workdir / "hollow.cx"
    hollow.write_text("vertex a\nvertex b\nvertex c\nedge a b\nedge b c\nedge a c\n")
    assert main(["check-flag", str(hollow)]) == 2


def test_homology(workdir, tmp_path, capsys):
    out = tmp_path / "h.json"
    assert main(["homology", cx(workdir, "rp2"), "--json-out", str(out)]) == 0
    assert "H1 = Z/2" in capsys.readouterr().out
    assert json.loads(out.read_text())["torsion"] == [[], [2], []]
    assert main(["homology", cx(workdir, "rp2"), "--assert-acyclic"]) == 2
    assert main(["homology", cx(workdir, "dunce_hat_flag"), "--assert-acyclic"]) == 0


def test_linkcond_on_equilateral_k0(workdir, tmp_path, capsys):
    out = tmp_path / "lc.json"
    assert main(["linkcond", cx(workdir, "k0"), eq(workdir), "--json-out", str(out)]) == 2
    text = capsys.readouterr().out
    assert "u2: FAIL" in text and "p: vacuous" in text
    report = json.loads(out.read_text())
    assert report["passes"] is False
    assert math.isclose(report["vertices"]["u2"]["length"], 4 * math.pi / 3)
    assert len(report["vertices"]["u2"]["witness"]) == 4


def test_cat1(workdir, tmp_path):
    out = tmp_path / "c.json"
    assert main(["cat1", cx(workdir, "triangle"), eq(workdir), "--json-out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["boundary"] is True and abs(report["slack"]) < 1e-12
    assert main(["cat1", cx(workdir, "k0"), eq(workdir)]) == 2


def test_build_l_and_t(workdir, tmp_path, capsys):
    out = tmp_path / "L.graph"
    assert main(["build-l", cx(workdir, "two_triangles"), eq(workdir), "--out", str(out)]) == 0
    assert out.read_text().count("arc ") == 12
    assert main(["build-t", cx(workdir, "k0")]) == 0
    assert main(["build-t", cx(workdir, "k0"), eq(workdir)]) == 0
    assert "isometric to L(K): yes" in capsys.readouterr().out


def test_search_writes_a_metric(workdir, tmp_path):
    metric = tmp_path / "best.len"
    out = tmp_path / "s.json"
    argv = ["search", cx(workdir, "k0"), "--mode", "links", "--restarts", "2", "--max-iters", "200", "--out", str(metric), "--json-out", str(out)]
    assert main(argv) == 0
    report = json.loads(out.read_text())
    assert report["feasible"] and report["certificate"]["passes"]
    assert main(["linkcond", cx(workdir, "k0"), str(metric)]) == 0


def test_presentation(workdir, capsys):
    assert main(["presentation", cx(workdir, "k0")]) == 1
    assert "--simply-connected" in capsys.readouterr().err
    assert main(["presentation", cx(workdir, "k0"), "--simply-connected"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2 + 12
    assert main(["presentation", cx(workdir, "annulus"), "--mode", "cycles", "--max-cycle", "4", "--max-n", "1"]) == 0


def test_distortion(tmp_path, capsys):
    out = tmp_path / "d.json"
    assert main(["distortion", "--nmax", "5", "--json-out", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert [r["free_length"] for r in rows] == [4, 12, 24, 40, 60]
    assert [r["written_length"] for r in rows] == [6, 12, 18, 24, 30]


def test_reproduce_k0_small(tmp_path, capsys):
    out = tmp_path / "k0.json"
    code = main(["reproduce-k0", "--samples", "3", "--restarts", "2", "--max-iters", "100", "--json-out", str(out)])
    assert code == 2
    report = json.loads(out.read_text())
    assert report["identity_holds"] is True


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["cat1"],
        ["linkcond", "/nonexistent.cx", "/nonexistent.len"],
        ["distortion", "--nmax", "0"],
        ["search", "/nonexistent.cx", "--restarts", "x"],
    ],
)
def test_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_bad_metric_exits_1(workdir, tmp_path):
    bad = tmp_path / "bad.len"
    bad.write_text("default -1\n")
    assert main(["cat1", cx(workdir, "triangle"), str(bad)]) == 1


def test_console_entry_point(workdir):
    proc = subprocess.run(
        [sys.executable, "-m", "flagcat.cli", "check-flag", cx(workdir, "triangle")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "free edges: 3" in proc.stdout
