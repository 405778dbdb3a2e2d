from __future__ import annotations

import subprocess
import sys

import pytest

from webalg import projective, web


def run(*args, cwd=None):
    proc = subprocess.run([sys.executable, "-m", "webalg", *map(str, args)], capture_output=True, text=True, cwd=cwd)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert run("gen", "rnc-web", "n=3", "d=7", "theta=0,1,2,3,4,5,6", "J=5", "--out", d / "w.txt")[0] == 0
    assert run("gen", "map", "n=3", "J=5", "seed=1", "--out", d / "m.txt")[0] == 0
    assert run("gen", "pushforward", d / "w.txt", d / "m.txt", "--out", d / "pw.txt")[0] == 0
    return d


def test_chern():
    assert run("chern", 3, 7)[:2] == (0, "6\n")


def test_generated_web_reparses(files):
    w = web.parse_web((files / "w.txt").read_text())
    assert (w.n, w.d, w.order) == (3, 7, 5)


def test_certify_pass(files):
    code, out, _ = run("certify", files / "w.txt")
    assert code == 0
    assert "quotient_dims 4 2" in out and out.rstrip().endswith("verdict PASS")


def test_certify_random_web(tmp_path):
    run("gen", "random", "n=3", "d=7", "J=6", "seed=0", "--out", tmp_path / "r.txt")
    code, out, _ = run("certify", tmp_path / "r.txt")
    assert code == 1 and "verdict FAIL" in out
    code, out, _ = run("certify", tmp_path / "r.txt", "--order", 4)
    assert code == 4 and "raise J" in out


def test_error_exit_codes(tmp_path):
    (tmp_path / "bad.txt").write_text("not a web\n")
    code, _, err = run("certify", tmp_path / "bad.txt")
    assert code == 2 and err.startswith("error[parse]")
    run("gen", "rnc-web", "n=3", "d=5", "J=4", "--out", tmp_path / "small.txt")
    code, _, err = run("certify", tmp_path / "small.txt")
    assert code == 3 and "d >= 2n" in err
    assert run("chern")[0] == 2


def test_pipeline_all_pass(files):
    code, out, _ = run("pipeline", files / "pw.txt", "--seed", 3)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "pipeline n=3 d=7 J=5 seed=3"
    checks = [ln for ln in lines if ln.startswith("CHECK")]
    assert checks and all(ln.endswith("PASS") for ln in checks)
    assert lines[-1].endswith("failed=0")


def test_pipeline_corrupt_basis_fails(files):
    code, out, _ = run("pipeline", files / "pw.txt", "--corrupt-basis")
    assert code == 1
    assert "CHECK derivative_completions_full EXPECT 21 GOT 0 FAIL" in out


def test_rnc_commands(tmp_path):
    pts = tmp_path / "pts.txt"
    pts.write_text("1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n1 1 1 1\n1 2 4 8\n")
    code, out, _ = run("rnc", "through", pts)
    assert code == 0 and "# 1 2 4 8 at t=0" in out and "at t=inf" in out
    moment = tmp_path / "moment.txt"
    moment.write_text("".join(" ".join(str(t ** k) for k in range(4)) + "\n" for t in range(9)))
    code, out, _ = run("rnc", "recover", moment)
    assert code == 0 and out.count(" at t=") == 9
    assert projective.same_curve(projective.parse_rnc(out), projective.RNC.moment(3))


def test_family_and_coframe(files, tmp_path):
    run("gen", "family", "n=4", "d=6", "J=4", "seed=0", "--out", tmp_path / "f.txt")
    code, out, _ = run("relations", tmp_path / "f.txt")
    assert code == 0 and out.startswith("relations dim=2")
    code, out, _ = run("coframe", files / "pw.txt")
    assert code == 0 and "verdict exact" in out and "second_order dtheta zero" in out


def test_selftest():
    code, out, _ = run("selftest")
    assert code == 0 and out.rstrip().endswith("failed=0")
