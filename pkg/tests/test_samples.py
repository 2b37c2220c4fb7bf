"""The files under samples/ stay in sync with the domain builders and
work end to end through the command line."""

import pytest

from causalplan.cli import main

import sample_files


def test_samples_match_builders():
    want = sample_files.generate()
    root = sample_files.samples_dir()
    on_disk = {p.name for p in root.iterdir() if p.is_file()}
    assert on_disk == set(want), "stray or missing sample files"
    for name, text in want.items():
        assert (root / name).read_text(encoding="utf-8") == text, \
            f"samples/{name} is stale; rerun tests/sample_files.py"


@pytest.fixture(scope="module")
def root():
    return sample_files.samples_dir()


def test_boxes_sample_plans(root, capsys):
    assert main(["plan", str(root / "boxes.cp"), str(root / "boxes.prob")]) == 0
    assert "plan: 4 step(s)" in capsys.readouterr().out


def test_boxes_grid_sample_needs_world(root, capsys):
    args = ["plan", str(root / "boxes-grid.cp"), str(root / "boxes-grid.prob")]
    assert main(args) == 2  # externals undefined without a world
    assert main(args + ["--world", str(root / "corridor.world")]) == 0


def test_boxes_query_predicts_carried_box(root, capsys):
    assert main(["predict", str(root / "boxes.cp"), str(root / "boxes.query")]) == 0
    out = capsys.readouterr().out
    assert "1 outcome" in out
    assert "atObj(B1)=L2" in out


def test_toh_sample_plans(root, capsys):
    assert main(["plan", str(root / "toh.cp"), str(root / "toh.prob")]) == 0
    assert "plan: 7 step(s)" in capsys.readouterr().out


def test_mapp_sample_plans(root, capsys):
    assert main(["plan", str(root / "mapp.cp"), str(root / "mapp.prob")]) == 0
    assert "plan: 2 step(s)" in capsys.readouterr().out
