import csv

import pytest

from defence_scheduler.model import Objective
from defence_scheduler.pareto import FrontArchive
from defence_scheduler.report import ComparisonReport, ComparisonRow, compare_fronts

TWO = (Objective.Z3, Objective.Z4)


def test_compare_fronts():
    front = FrontArchive.build(TWO, [((10, 5), 0), ((5, 10), 1)])
    baseline = FrontArchive.build(TWO, [((10, 6), 0)])
    figures = compare_fronts(front, baseline, [0, 0], [10, 10])
    assert figures["hypervolume"] == pytest.approx(0.75)
    assert figures["n0"] == 2
    assert figures["n0_vs_baseline"] == 1
    assert compare_fronts(front, None, [0, 0], [10, 10])["n0_vs_baseline"] is None


def test_mean_row():
    report = ComparisonReport([
        ComparisonRow(method="decomp-nsga2", seed=1, n0=3, hypervolume=0.5, n0_vs_baseline=2,
                      total_seconds=4.0),
        ComparisonRow(method="decomp-nsga2", seed=2, n0=5, hypervolume=0.7, n0_vs_baseline=4,
                      total_seconds=6.0),
        ComparisonRow(method="decomp-nsga2", seed=3, n0=4, hypervolume=0.9, n0_vs_baseline=None,
                      total_seconds=5.0),
    ])
    mean = report.mean_row()
    assert mean.n0 == 4
    assert mean.hypervolume == pytest.approx(0.7)
    assert mean.total_seconds == pytest.approx(5.0)
    assert mean.seed is None
    assert mean.n0_vs_baseline is None

    with pytest.raises(ValueError):
        report.mean_row("mono-eps")


def test_csv_leaves_timings_out(tmp_path):
    report = ComparisonReport()
    report.add(ComparisonRow(method="mono-eps", n0=2, hypervolume=0.25, total_seconds=9.0))
    path = tmp_path / "report.csv"
    report.to_csv(str(path))
    with open(path, newline="") as stream:
        rows = list(csv.DictReader(stream))
    assert len(rows) == 1
    assert "total_seconds" not in rows[0]
    assert rows[0]["hypervolume"] == "0.250000"
    assert rows[0]["seed"] == ""

    report.to_csv(str(path), timings=True)
    with open(path, newline="") as stream:
        assert next(csv.DictReader(stream))["total_seconds"] == "9.000000"


def test_format_table():
    report = ComparisonReport([ComparisonRow(method="mono-eps", n0=1)])
    header, line = report.format_table().splitlines()
    assert header.split("\t")[0] == "method"
    assert line.split("\t")[0] == "mono-eps"
    assert len(report) == 1
