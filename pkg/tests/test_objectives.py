import pytest

from defence_scheduler.model import (MONOLITHIC_OBJECTIVES, STAGE1_OBJECTIVES, CommitteeConfig,
                                     FullSolution, Instance, Objective, Schedule)
from defence_scheduler.objectives import (coarse_bounds, eval_z1_workload, eval_z2_suitability,
                                          eval_z3_preferences, eval_z4_days, eval_z5_proxy,
                                          evaluate, lower_bound)
from defence_scheduler.oracle import enumerate_all


def test_t1_vectors(t1, t1_solution, t1_swapped_solution):
    assert evaluate(t1, t1_solution, MONOLITHIC_OBJECTIVES) == (-4, 2, -1, -4)
    assert evaluate(t1, t1_swapped_solution, MONOLITHIC_OBJECTIVES) == (-4, 1, -1, -4)


def test_t1_committee_objectives(t1, t1_config):
    assert evaluate(t1, t1_config, STAGE1_OBJECTIVES) == (-4, 2, 4)
    assert eval_z5_proxy(t1, t1_config) == 4


def test_workload_of_uneven_loads():
    instance = Instance(
        n_members=4, n_defences=3, n_roles=2, n_days=1, n_slots=1, n_rooms=1, n_subjects=1,
        duration=1, eligibility=[[{0}, {1, 2}]] * 3, availability=[[(0, 0)]] * 4,
        member_expertise=[[]] * 4, defence_subjects=[[0]] * 3)
    # Loads (3, 2, 1, 0)
    config = CommitteeConfig(((0, 1), (0, 1), (0, 2)))
    assert eval_z1_workload(instance, config) == -14
    assert eval_z2_suitability(instance, config) == 0


def test_penalty_sums_over_every_occupied_slot():
    instance = Instance(
        n_members=2, n_defences=1, n_roles=2, n_days=1, n_slots=4, n_rooms=1, n_subjects=1,
        duration=4, eligibility=[[{0}, {1}]], availability=[[(0, s) for s in range(4)]] * 2,
        member_expertise=[[], []], defence_subjects=[[0]],
        penalties={(1, 0, s): 1 for s in range(4)})
    solution = FullSolution(CommitteeConfig(((0, 1),)), Schedule(((0, 0, 0),)))
    assert eval_z3_preferences(instance, solution) == -4


def test_days_are_counted_per_member(open_instance):
    config = CommitteeConfig(((0, 2), (1, 3), (0, 4)))
    solution = FullSolution(config, Schedule(((0, 0, 0), (0, 0, 1), (1, 0, 0))))
    # Member 0 sits on both days; everyone else on one
    assert eval_z4_days(open_instance, solution) == -(4 + 1 + 1 + 1 + 1)


def test_config_cannot_be_scheduled_objectives(t1, t1_config):
    with pytest.raises(ValueError):
        evaluate(t1, t1_config, (Objective.Z3,))
    with pytest.raises(TypeError):
        evaluate(t1, "not a solution", (Objective.Z1,))


def test_coarse_bounds_contain_actual_values(t1, t1_solution):
    vector = evaluate(t1, t1_solution, tuple(Objective))
    for objective, value in zip(Objective, vector):
        low, high = coarse_bounds(t1, objective)
        assert low <= value <= high


def test_lower_bounds_on_t1(t1):
    assert [lower_bound(t1, o) for o in Objective] == [-8, 1, -2, -4, 4]


def test_lower_bounds_hold_for_every_solution(open_instance):
    floor = [lower_bound(open_instance, o) for o in Objective]
    for objective in Objective:
        assert coarse_bounds(open_instance, objective)[0] <= floor[objective - 1]
    for _, vector in enumerate_all(open_instance, tuple(Objective)):
        assert all(value >= low for value, low in zip(vector, floor))
