"""Regenerate key preset outputs through the CLI and compare byte-for-byte
with the checked-in goldens (presets/goldens/)."""

from pathlib import Path

import pytest

from arithdyn.cli import main

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "presets" / "goldens"

CASES = [
    (["evolve", "--preset", "table-dp2-rational"],
     {"dp2_rational_table.csv": "table-dp2-rational__dp2_rational_table.csv"}),
    (["entropy", "--preset", "heights-hv"],
     {"heights.csv": "heights-hv__heights.csv",
      "entropy.json": "heights-hv__entropy.json"}),
    (["orbit", "--q", "3", "--alpha0", "1", "--beta0", "2"],
     {"orbit.json": "orbit-q3__orbit.json", "cycles.csv": "orbit-q3__cycles.csv"}),
    (["grid", "--preset", "fig1", "--format", "csv"],
     {"grid_x.csv": "fig1__grid_x.csv", "grid_y.csv": "fig1__grid_y.csv"}),
    (["bbs", "--preset", "figbbs"], {"bbs.txt": "figbbs__bbs.txt"}),
]


@pytest.mark.parametrize("argv,mapping", CASES, ids=[c[0][1] if len(c[0]) > 1 else c[0][0] for c in CASES])
def test_preset_outputs_match_goldens(tmp_path, argv, mapping):
    assert main(argv + ["--seed", "0", "--out-dir", str(tmp_path)]) == 0
    for produced, golden in mapping.items():
        got = (tmp_path / produced).read_bytes()
        want = (GOLDEN_DIR / golden).read_bytes()
        assert got == want, f"{produced} differs from {golden}"
