import json

import pytest

from arithdyn.cli import main
from arithdyn.presets import load_preset, preset_names


def run(tmp_path, *argv):
    return main(list(argv) + ["--out-dir", str(tmp_path)])


def test_evolve_hv_golden(tmp_path):
    assert run(tmp_path, "evolve", "--map", "hv", "--backend", "rat",
               "--a", "1", "--x0", "1", "--x1", "3", "--steps", "10") == 0
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "n,x,event"
    assert [l.split(",")[1] for l in lines[1:4]] == ["1", "3", "19/9"]
    assert len(lines) == 12  # header + x_0..x_10
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "evolve" and "trajectory.csv" in manifest["outputs"]


def test_evolve_row_count_contract(tmp_path):
    # dp2 over PF_7 runs on the extended rules, so 50 steps never dead-end
    assert run(tmp_path, "evolve", "--map", "dp2", "--p", "7", "--a", "3",
               "--delta", "2", "--z0", "1", "--backend", "ff",
               "--x0", "4", "--x1", "5", "--steps", "50") == 0
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert len(lines) == 52  # header + x_0..x_50
    assert any(l.split(",")[1] == "inf" for l in lines[1:])


def test_bad_prime_exit_2(tmp_path, capsys):
    assert run(tmp_path, "evolve", "--map", "dp2", "--p", "4", "--a", "3",
               "--delta", "2", "--z0", "1", "--backend", "ff",
               "--x0", "0", "--x1", "2") == 2


def test_missing_params_exit_2(tmp_path):
    assert run(tmp_path, "evolve", "--map", "qp1", "--a", "2",
               "--x0", "1", "--x1", "2") == 2


def test_agr_report(tmp_path):
    assert run(tmp_path, "agr", "--map", "qrt", "--gamma", "2", "--a", "2",
               "--p", "7", "--samples", "6") == 0
    reports = json.loads((tmp_path / "agr_report.json").read_text())
    by_class = {r["class"]: r for r in reports}
    assert by_class["x=0"]["m"] == 3 and by_class["x=0"]["oracle_match"]
    assert by_class["y=0"]["m"] == 5
    assert by_class["x=y=0"]["m"] == 8


def test_agr_gamma3_not_found(tmp_path):
    assert run(tmp_path, "agr", "--map", "qrt", "--gamma", "3", "--a", "2",
               "--p", "7", "--samples", "6", "--class", "x=0") == 0
    reports = json.loads((tmp_path / "agr_report.json").read_text())
    assert reports[0]["found"] is False


def test_agr_weak(tmp_path):
    assert run(tmp_path, "agr", "--map", "dp2", "--p", "3", "--a", "3",
               "--delta", "2", "--z0", "-1", "--weak", "--samples", "6") == 0
    data = json.loads((tmp_path / "weak_agr.json").read_text())
    confined = {(c["residue"], c["ybar"]): c for c in data["classes"]
                if c["kind"] == "confined"}
    assert confined[(7, 1)]["m"] == 5 and confined[(7, 1)]["limit"] == ["0", "1"]


def test_orbit_files(tmp_path):
    assert run(tmp_path, "orbit", "--q", "3", "--alpha0", "1", "--beta0", "2") == 0
    dot = (tmp_path / "orbit.dot").read_text()
    assert '"0,0" -> "0,0";' in dot
    summary = json.loads((tmp_path / "orbit.json").read_text())
    assert summary["points"] == 24 and summary["sakai_count"] == 40
    assert (tmp_path / "cycles.csv").exists()


def test_orbit_q5_count(tmp_path):
    assert run(tmp_path, "orbit", "--q", "5", "--alpha0", "1", "--beta0", "2") == 0
    summary = json.loads((tmp_path / "orbit.json").read_text())
    assert summary["points"] == 52


def test_entropy_preset(tmp_path):
    assert run(tmp_path, "entropy", "--preset", "heights-hv") == 0
    data = json.loads((tmp_path / "entropy.json").read_text())
    assert data["floors"][:12] == [0, 1, 2, 7, 19, 50, 132, 347, 911, 2385, 6245, 16352]
    assert abs(data["entropy"]["ratio"] - 2.61803) / 2.61803 < 0.02


def test_soliton_explicit_csv(tmp_path):
    assert run(tmp_path, "soliton", "--p", "11", "--delta0", "7", "--gammas", "2",
               "--ls", "9", "--n-range", "0:12", "--t-range", "0:12") == 0
    csv = (tmp_path / "soliton.csv").read_text()
    assert csv.splitlines()[0] == "n,t,value"


def test_bbs_ascii(tmp_path):
    assert run(tmp_path, "bbs", "--blocks", "2,1", "--steps", "6") == 0
    txt = (tmp_path / "bbs.txt").read_text()
    assert txt.splitlines()[0].count("1") == 3


def test_grid_preset_fig1(tmp_path):
    assert run(tmp_path, "grid", "--preset", "fig1", "--format", "csv") == 0
    csv = (tmp_path / "grid_x.csv").read_text().splitlines()
    cells = {tuple(l.split(",")[:2]): l.split(",")[2] for l in csv[1:]}
    assert cells[("1", "1")] == "3" and cells[("2", "1")] == "inf"


def test_manifest_determinism(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        assert main(["agr", "--map", "hv", "--a", "1", "--p", "7",
                     "--samples", "6", "--seed", "5", "--out-dir", str(d)]) == 0
    assert (d1 / "agr_report.json").read_bytes() == (d2 / "agr_report.json").read_bytes()


def test_presets_all_loadable():
    names = preset_names()
    assert {"fig1", "fig4-top", "fig8", "fig15", "table-dp2-rational",
            "heights-hv"} <= set(names)
    for name in names:
        cfg = load_preset(name)
        assert "command" in cfg
