import csv
import os

import pytest

from defence_scheduler import cmd
from defence_scheduler.epsilon import GridPolicy
from defence_scheduler.instance_io import load_front, load_instance, save_instance, save_solution
from defence_scheduler.model import MONOLITHIC_OBJECTIVES, FullSolution, Objective, Schedule
from defence_scheduler.pipeline import CASE_STUDY_OBJECTIVES, Method


@pytest.fixture(scope="function")
def t1_file(t1, tmp_path):
    path = str(tmp_path / "t1.json")
    save_instance(t1, path)
    return path


def test_generate(tmp_path, capsys):
    path = str(tmp_path / "tiny.json")
    assert cmd.main(["generate", "--preset", "tiny", "--seed", "2", "--out", path]) == 0
    assert load_instance(path).n_members == 6
    assert "Wrote tiny instance" in capsys.readouterr().out

    assert cmd.main(["generate", "--preset", "tiny", "--members", "8", "--out", path]) == 0
    assert load_instance(path).n_members == 8


def test_evaluate(t1_file, t1_solution, tmp_path, capsys):
    solution = str(tmp_path / "solution.json")
    save_solution(t1_solution, solution)
    assert cmd.main(["evaluate", t1_file, solution]) == 0
    out = capsys.readouterr().out
    assert "Z2 (suitability): 2" in out
    assert "The solution is FEASIBLE" in out


def test_evaluate_reports_violations(t1_file, t1_config, tmp_path, capsys):
    solution = str(tmp_path / "solution.json")
    save_solution(FullSolution(t1_config, Schedule(((0, 0, 0), (0, 0, 0)))), solution)
    assert cmd.main(["evaluate", t1_file, solution]) == 0
    out = capsys.readouterr().out
    assert "Violation: room_overlap" in out
    assert "INFEASIBLE" in out


def test_solve_monolithic(t1_file, tmp_path, capsys):
    front = str(tmp_path / "front.csv")
    report = str(tmp_path / "report.csv")
    ledger = str(tmp_path / "ledger.csv")
    code = cmd.main(["solve", t1_file, "--method", "mono-eps", "--primary", "Z3",
                     "--out", front, "--report", report, "--ledger", ledger])
    assert code == 0
    assert load_front(front).vectors() == [(-4, 2, -1, -4)]
    assert os.path.exists(str(tmp_path / "report.timings.csv"))
    with open(ledger, newline="") as stream:
        header = next(csv.reader(stream))
    assert header[:3] == ["eps_Z1", "eps_Z2", "eps_Z4"]
    assert "Final Report" in capsys.readouterr().out


def test_solve_decomposition(t1_file, tmp_path):
    front = str(tmp_path / "front.json")
    trace = str(tmp_path / "trace.jsonl")
    ledger = str(tmp_path / "ledger.csv")
    code = cmd.main(["solve", t1_file, "--population", "4", "--generations", "2",
                     "--seed", "1", "--out", front, "--trace", trace, "--ledger", ledger])
    assert code == 0
    assert load_front(front).vectors() == [(-4, 2, -1, -4)]
    assert len(open(trace).read().splitlines()) == 3
    assert os.path.exists(ledger)


def test_solve_sweep(t1_file, tmp_path):
    seeds = tmp_path / "seeds.txt"
    seeds.write_text("1\n2\n\n")
    report = str(tmp_path / "report.csv")
    code = cmd.main(["solve", t1_file, "--population", "4", "--generations", "1",
                     "--seeds-file", str(seeds), "--report", report])
    assert code == 0
    with open(report, newline="") as stream:
        rows = list(csv.DictReader(stream))
    # One row per seed plus their mean
    assert [row["seed"] for row in rows] == ["1", "2", ""]


def test_solve_sweep_rejects_single_run_outputs(t1_file, tmp_path, capsys):
    seeds = tmp_path / "seeds.txt"
    seeds.write_text("1\n2\n")
    front = tmp_path / "front.csv"
    code = cmd.main(["solve", t1_file, "--population", "4", "--generations", "1",
                     "--seeds-file", str(seeds), "--out", str(front)])
    assert code == cmd.EXIT_USAGE
    assert "--out needs a single seed" in capsys.readouterr().err
    assert not front.exists()


def test_compare_and_export(t1_file, tmp_path, capsys):
    front = str(tmp_path / "front.csv")
    cmd.main(["solve", t1_file, "--method", "mono-eps", "--out", front])
    report = str(tmp_path / "compare.csv")
    assert cmd.main(["compare", front, front, "--out", report]) == 0
    with open(report, newline="") as stream:
        rows = list(csv.DictReader(stream))
    assert rows[0]["n0_vs_baseline"] == "1"
    assert rows[1]["n0_vs_baseline"] == ""

    out_dir = str(tmp_path / "views")
    assert cmd.main(["export-tradeoffs", front, "--out", out_dir]) == 0
    assert os.path.exists(os.path.join(out_dir, "committee_view.csv"))
    assert "Wrote" in capsys.readouterr().out


def test_usage_errors(t1_file, capsys):
    assert cmd.main([]) == cmd.EXIT_USAGE
    assert cmd.main(["solve", t1_file, "--objectives", "Z1,Z9"]) == cmd.EXIT_USAGE
    assert cmd.main(["solve", t1_file, "--population", "3"]) == cmd.EXIT_USAGE
    assert cmd.main(["solve", t1_file, "--objectives", "Z1,Z2"]) == cmd.EXIT_USAGE
    assert "must be" in capsys.readouterr().err


def test_instance_errors(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{}")
    assert cmd.main(["solve", str(broken)]) == cmd.EXIT_INFEASIBLE
    assert "Instance error" in capsys.readouterr().err
    assert cmd.main(["solve", str(tmp_path / "missing.json")]) == cmd.EXIT_FAILURE


def test_run_config_from_args(t1_file):
    parser = cmd.build_parser()
    cfg = cmd.run_config_from_args(parser.parse_args(["solve", t1_file]))
    assert cfg.method is Method.DECOMP_NSGA2
    assert cfg.objectives == MONOLITHIC_OBJECTIVES
    assert cfg.fronts_kept == 1

    args = parser.parse_args(["solve", t1_file, "--method", "casestudy", "--nf", "all",
                              "--grid", "tenth", "--objectives", "z1,z3,z4"])
    cfg = cmd.run_config_from_args(args)
    assert cfg.objectives == CASE_STUDY_OBJECTIVES
    assert cfg.ga.generations == 5
    assert cfg.keep_all_generations
    assert cfg.fronts_kept is None
    assert cfg.grid is GridPolicy.TENTH
    assert cfg.crossover_repeats == 2
    assert Objective.Z5 not in cfg.objectives
