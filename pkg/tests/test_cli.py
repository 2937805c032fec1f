import json
from pathlib import Path

import pytest

from thompson_tangles import cli, fgroup, render, strand

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_element(capsys):
    code, out, _ = run(capsys, "element", "x0 x1")
    data = json.loads(out)
    assert code == 0 and data["oriented"] and data["height"] == 3


def test_bad_element_is_domain_error(capsys):
    code, _, err = run(capsys, "element", "x7")
    assert code == 1 and json.loads(err)["kind"] == "domain"


def test_tangle_writes_pd_and_svg(capsys, tmp_path):
    code, out, _ = run(capsys, "tangle", "x0", "-k", "1", "--svg", "--outdir", str(tmp_path), "--name", "t")
    data = json.loads(out)
    assert code == 0 and data["crossings"] > 0
    pd = json.loads((tmp_path / "t.json").read_text())
    assert len(pd["crossings"]) == data["crossings"]
    assert (tmp_path / "t.svg").read_text().startswith("<svg")


def test_outdir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("THOMPSON_TANGLES_OUT", str(tmp_path))
    code, _, _ = run(capsys, "tangle", "e")
    assert code == 0 and (tmp_path / "theta0_e.json").exists()


def test_oriented_tangle_needs_member(capsys, tmp_path):
    code, _, _ = run(capsys, "tangle", "x0", "--oriented", "--outdir", str(tmp_path))
    assert code == 1
    code, _, _ = run(capsys, "tangle", "x0 x1", "--oriented", "--outdir", str(tmp_path))
    assert code == 0


def test_kmax_guard(capsys):
    code, _, _ = run(capsys, "--kmax", "1", "bracket", "x0", "-k", "2")
    assert code == 1


def test_distinguish(capsys):
    code, out, _ = run(capsys, "distinguish", "x0", "e")
    data = json.loads(out)
    assert code == 0 and data["least_k"] <= 2 and data["witness"]
    code, _, _ = run(capsys, "distinguish", "x0", "x0")
    assert code == 1


def test_bracket_and_mirror(capsys):
    _, out, _ = run(capsys, "bracket", "x0", "-k", "1")
    _, out_m, _ = run(capsys, "--mirror", "bracket", "x0", "-k", "1")
    a = {int(e): c for e, c in json.loads(out)["coefficients"].items()}
    b = {int(e): c for e, c in json.loads(out_m)["coefficients"].items()}
    assert b == {-e: c for e, c in a.items()}


def test_homology(capsys, tmp_path):
    dump = tmp_path / "c.json"
    code, out, _ = run(capsys, "homology", "x0", "-k", "1", "--dump", str(dump))
    data = json.loads(out)
    assert code == 0 and data["euler_matches_bracket"]
    assert json.loads(dump.read_text())["basis"]


def test_resource_guard_exit(capsys):
    code, _, err = run(capsys, "verify", "--budget", "3")
    assert code == 2 and json.loads(err)["kind"] == "resource"


def test_verify_unit(capsys):
    code, out, _ = run(capsys, "verify", "--axioms", "unit", "--budget", "0")
    data = json.loads(out)
    assert code == 0 and data["pass"] and len(data["reports"]) == 3


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("mirror = true\nkmax = 3\n# comment\n")
    code, out, _ = run(capsys, "--config", str(cfg), "bracket", "x0", "-k", "1")
    _, out_m, _ = run(capsys, "--mirror", "bracket", "x0", "-k", "1")
    assert code == 0 and json.loads(out) == json.loads(out_m)
    cfg.write_text("field = Q\n")
    code, _, _ = run(capsys, "--config", str(cfg), "element", "e")
    assert code == 1
    cfg.write_text("colour = red\n")
    code, _, _ = run(capsys, "--config", str(cfg), "element", "e")
    assert code == 1


def test_golden_svg():
    svg = render.strand_svg(strand.theta(1, fgroup.X0), title="Theta_1(x0)")
    assert svg == (GOLDEN / "theta1_x0.svg").read_text()
