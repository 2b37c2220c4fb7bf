"""Command-line behavior: exit codes, printed traces, and the file
formats the subcommands exchange."""

import pytest

import toy_domains
from causalplan.cli import main
from causalplan.sat import parse_dimacs, solve

TOGGLE_PROBLEM = ":init ~b;\n:goal b;\n:horizon 0..3;\n"


@pytest.fixture
def toggle(tmp_path):
    d = tmp_path / "toggle.cp"
    d.write_text(toy_domains.TOGGLE)
    p = tmp_path / "toggle.prob"
    p.write_text(TOGGLE_PROBLEM)
    return str(d), str(p)


def test_check_consistent_domain(toggle, capsys):
    domain, _ = toggle
    assert main(["check", domain]) == 0
    out = capsys.readouterr().out
    assert "consistent" in out and "example state:" in out


def test_check_static_contradiction(tmp_path, capsys):
    d = tmp_path / "bad.cp"
    d.write_text(":constants p :: simpleFluent;\n:laws\n caused p;\n constraint ~p;\n")
    assert main(["check", str(d)]) == 2
    assert "static" in capsys.readouterr().err


def test_check_dynamic_contradiction(tmp_path, capsys):
    d = tmp_path / "stuck.cp"
    d.write_text(":constants p :: simpleFluent;\n:laws\n"
                 " caused p after true;\n caused p=false after true;\n")
    assert main(["check", str(d)]) == 2
    assert "dynamic" in capsys.readouterr().err


def test_ground_theory_lists_laws(toggle, capsys):
    domain, _ = toggle
    assert main(["ground", domain]) == 0
    out = capsys.readouterr().out
    assert "flip causes b if ~b;" in out


def test_ground_cnf_emits_dimacs(toggle, capsys):
    domain, _ = toggle
    assert main(["ground", domain, "--emit", "cnf", "--horizon", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("c atom 1 b@0")  # the atom table rides along
    assert "\np cnf " in out


def test_plan_writes_and_validates(toggle, tmp_path, capsys):
    domain, problem = toggle
    plan_file = tmp_path / "out.plan"
    assert main(["plan", domain, problem, "--plan-out", str(plan_file)]) == 0
    out = capsys.readouterr().out
    assert "plan: 1 step(s)" in out
    assert "flip" in out
    assert "b: false -> true" in out  # the changed-fluent diff
    assert plan_file.exists()
    assert main(["validate", domain, problem, str(plan_file)]) == 0
    assert "plan is valid" in capsys.readouterr().out


def test_plan_unreachable_goal(toggle, tmp_path, capsys):
    domain, _ = toggle
    p = tmp_path / "impossible.prob"
    p.write_text(":init ~b;\n:goal b & ~b;\n:horizon 0..3;\n")
    assert main(["plan", domain, str(p)]) == 1
    assert "no plan up to horizon 3" in capsys.readouterr().out


def test_validate_rejects_wrong_goal(toggle, tmp_path, capsys):
    domain, problem = toggle
    plan_file = tmp_path / "out.plan"
    assert main(["plan", domain, problem, "--plan-out", str(plan_file)]) == 0
    stay = tmp_path / "stay.prob"
    stay.write_text(":init ~b;\n:goal ~b;\n:horizon 0..3;\n")
    capsys.readouterr()
    assert main(["validate", domain, str(stay), str(plan_file)]) == 2
    assert "invalid:" in capsys.readouterr().err


def test_predict_prints_outcomes(toggle, tmp_path, capsys):
    domain, _ = toggle
    q = tmp_path / "q.query"
    q.write_text(":state ~b;\n:do flip;\n")
    assert main(["predict", domain, str(q)]) == 0
    out = capsys.readouterr().out
    assert "1 outcome over 1 step(s)" in out
    assert "step 0: flip" in out


def test_predict_impossible_actions(tmp_path, capsys):
    d = tmp_path / "deadend.cp"
    d.write_text(toy_domains.DEADEND)
    q = tmp_path / "q.query"
    q.write_text(":state p;\n:do a;\n")
    assert main(["predict", str(d), str(q)]) == 1
    assert "no consistent outcome" in capsys.readouterr().out


def test_domain_parse_error_is_exit_2(tmp_path, capsys):
    d = tmp_path / "broken.cp"
    d.write_text(":constants p :: simpleFluent\n")  # missing semicolon
    assert main(["check", str(d)]) == 2
    assert capsys.readouterr().err.strip()


def test_missing_file_is_exit_3(capsys):
    assert main(["check", "/nonexistent/nowhere.cp"]) == 3
    assert "error:" in capsys.readouterr().err


def test_unknown_solver_mode_is_exit_3(toggle, capsys):
    domain, problem = toggle
    assert main(["plan", domain, problem, "--solver", "minisat"]) == 3
    assert "usage error" in capsys.readouterr().err


def test_bad_flag_is_exit_3(toggle, capsys):
    domain, _ = toggle
    assert main(["check", domain, "--frobnicate"]) == 3
    assert "usage error" in capsys.readouterr().err


def test_dimacs_out_then_model_in_round_trip(toggle, tmp_path, capsys):
    domain, problem = toggle
    cnf_file = tmp_path / "enc.cnf"
    assert main(["plan", domain, problem,
                 "--solver", "dimacs-out", str(cnf_file)]) == 0
    assert "wrote horizon-3 encoding" in capsys.readouterr().out

    n, clauses = parse_dimacs(cnf_file.read_text())
    res = solve((n, clauses))
    assert res.is_sat
    lits = [v if res.model[v] else -v for v in range(1, n + 1)]
    model_file = tmp_path / "model.txt"
    model_file.write_text("s SATISFIABLE\nv " + " ".join(map(str, lits)) + " 0\n")

    plan_file = tmp_path / "decoded.plan"
    assert main(["plan", domain, problem, "--model-in", str(model_file),
                 "--plan-out", str(plan_file)]) == 0
    out = capsys.readouterr().out
    assert "plan:" in out
    assert plan_file.exists()
    assert main(["validate", domain, problem, str(plan_file)]) == 0


def test_demo_toh_reports_expected(tmp_path, capsys):
    plan_file = tmp_path / "toh.plan"
    assert main(["demo", "toh", "--disks", "2", "--seed", "0",
                 "--plan-out", str(plan_file)]) == 0
    out = capsys.readouterr().out
    assert "expected optimal makespan: 3" in out
    assert "plan: 3 step(s)" in out
    assert plan_file.exists()


def test_demo_boxes_with_world(tmp_path, capsys):
    w = tmp_path / "grid.world"
    w.write_text("1.2\n")
    assert main(["demo", "boxes", "--world", str(w)]) == 0
    assert "plan: 4 step(s)" in capsys.readouterr().out


def test_demo_mapp_defaults_to_swapping_landmarks(tmp_path, capsys):
    w = tmp_path / "grid.world"
    w.write_text("1.\n.2\n")
    assert main(["demo", "mapp", "--world", str(w)]) == 0
    assert "plan: 2 step(s)" in capsys.readouterr().out


def test_demo_mapp_without_world_is_usage_error(capsys):
    assert main(["demo", "mapp"]) == 3
    assert "usage error" in capsys.readouterr().err


def test_seed_env_fallback(toggle, tmp_path, capsys, monkeypatch):
    domain, problem = toggle
    monkeypatch.setenv("CAUSALPLAN_SEED", "not-a-number")
    assert main(["plan", domain, problem]) == 3
    assert "CAUSALPLAN_SEED" in capsys.readouterr().err
    monkeypatch.setenv("CAUSALPLAN_SEED", "7")
    assert main(["plan", domain, problem]) == 0
