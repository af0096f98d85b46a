import csv

from defence_scheduler.ledger import IterationLedger
from defence_scheduler.model import Objective
from defence_scheduler.search import SolveStatus

Z1, Z2, Z3, Z4, Z5 = Objective


def _ledger():
    ledger = IterationLedger((Z3, Z4), (Z4,))
    ledger.record_iteration((-6,), SolveStatus.OPTIMAL, 0.5, (-3, -5))
    ledger.record_skip((-5,))
    ledger.record_iteration((-4,), SolveStatus.FEASIBLE_TIMEOUT, 2.0, (-7, -4))
    ledger.record_iteration((-3,), SolveStatus.INFEASIBLE, 0.25, None)
    return ledger


def test_records():
    ledger = _ledger()
    assert len(ledger) == 4
    assert len(ledger.solves()) == 3
    assert [it.skipped for it in ledger] == [False, True, False, False]
    assert ledger.solve_seconds() == 2.75


def test_filter_by_status():
    ledger = _ledger()
    optimal = ledger.filter_by_status("OPTIMAL")
    assert [it.epsilon for it in optimal] == [(-6,)]
    assert len(ledger.filter_by_status(["OPTIMAL", "INFEASIBLE"])) == 2
    assert len(ledger.filter_by_status("UNKNOWN")) == 0


def test_to_csv(tmp_path):
    path = tmp_path / "ledger.csv"
    _ledger().to_csv(str(path))
    with open(path, newline="") as stream:
        rows = list(csv.reader(stream))
    assert rows[0] == ["eps_Z4", "status", "seconds", "Z3", "Z4"]
    assert rows[1] == ["-6", "OPTIMAL", "0.500", "-3", "-5"]
    assert rows[2] == ["-5", "SKIPPED", "0.000", "", ""]
    assert rows[4] == ["-3", "INFEASIBLE", "0.250", "", ""]
