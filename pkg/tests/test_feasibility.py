import pytest

from defence_scheduler.errors import MalformedSolution
from defence_scheduler.feasibility import check_config, check_feasible, config_is_feasible
from defence_scheduler.model import CommitteeConfig, FullSolution, Schedule


def _kinds(report):
    return sorted({violation.kind for violation in report})


def test_feasible_solution(t1, t1_solution, t1_swapped_solution):
    assert check_feasible(t1, t1_solution) == []
    assert check_feasible(t1, t1_swapped_solution) == []


def test_room_overlap(t1, t1_config):
    solution = FullSolution(t1_config, Schedule(((0, 0, 0), (0, 0, 0))))
    assert "room_overlap" in _kinds(check_feasible(t1, solution))


def test_member_unavailable(t1, t1_config):
    # Member 3 is only free in slots 2-3
    solution = FullSolution(t1_config, Schedule(((0, 0, 0), (0, 1, 0))))
    report = check_feasible(t1, solution)
    assert _kinds(report) == ["availability", "room_overlap"]
    assert any(v.kind == "availability" and v.defence == 1 for v in report)


def test_member_overlap(t1):
    config = CommitteeConfig(((0, 2), (1, 2)))
    solution = FullSolution(config, Schedule(((0, 0, 0), (0, 0, 0))))
    assert "member_overlap" in _kinds(check_feasible(t1, solution))


def test_day_overrun(t1, t1_config):
    solution = FullSolution(t1_config, Schedule(((0, 0, 0), (0, 3, 0))))
    assert "day_overrun" in _kinds(check_feasible(t1, solution))


def test_eligibility_and_duplicates(t1):
    config = CommitteeConfig(((1, 1), (1, 3)))
    solution = FullSolution(config, Schedule(((0, 0, 0), (0, 2, 0))))
    kinds = _kinds(check_feasible(t1, solution))
    assert "eligibility" in kinds
    assert "duplicate_member" in kinds


def test_out_of_range_is_malformed(t1, t1_config):
    with pytest.raises(MalformedSolution):
        check_feasible(t1, FullSolution(t1_config, Schedule(((0, 0, 0), (0, 2, 1)))))
    with pytest.raises(MalformedSolution):
        check_feasible(t1, FullSolution(CommitteeConfig(((0, 9), (1, 3))),
                                        Schedule(((0, 0, 0), (0, 2, 0)))))
    with pytest.raises(MalformedSolution):
        check_config(t1, CommitteeConfig(((0, 2),)))


def test_check_config(t1, t1_config, t1_swapped_config):
    assert config_is_feasible(t1, t1_config)
    assert config_is_feasible(t1, t1_swapped_config)

    # Members 2 and 3 are never free together
    report = check_config(t1, CommitteeConfig(((2, 3), (1, 3))))
    assert _kinds(report) == ["eligibility", "no_common_window"]
    assert report[-1].defence == 0
