import math

import mock
import pytest

from defence_scheduler.epsilon import (EpsilonGrid, Found, GridPolicy,
                                       augmented_epsilon_constraint, big_m,
                                       initialisation_phase, not_skip)
from defence_scheduler.errors import DefenceSchedulerError, InfeasibleInstance, ParameterError
from defence_scheduler.ledger import MinMax
from defence_scheduler.model import (MONOLITHIC_OBJECTIVES, STAGE1_OBJECTIVES, Instance,
                                     Objective)
from defence_scheduler.oracle import oracle_front
from defence_scheduler.search import ProblemKind, SolveResult, SolveStatus

Z1, Z2, Z3, Z4, Z5 = Objective


def _clashing_instance():
    """Both defences need member 0 in the only window of the day."""
    return Instance(
        n_members=3, n_defences=2, n_roles=2, n_days=1, n_slots=2, n_rooms=2, n_subjects=1,
        duration=2, eligibility=[[{0}, {1}], [{0}, {2}]],
        availability=[[(0, 0), (0, 1)]] * 3, member_expertise=[[]] * 3,
        defence_subjects=[[0], [0]])


def test_unit_grid():
    grid = EpsilonGrid.unit({Z4: -1, Z2: 0}, {Z4: 0, Z2: 1})
    assert grid.objectives == (Z2, Z4)
    assert list(grid.lattice()) == [(0, -1), (0, 0), (1, -1), (1, 0)]
    assert len(grid) == 4
    assert grid.ranges() == {Z2: MinMax(0, 1), Z4: MinMax(-1, 0)}


def test_tenth_grid():
    grid = EpsilonGrid.tenth({Z2: 0, Z4: -7}, {Z2: 25, Z4: 0})
    assert grid.increments == (3, 1)
    assert list(grid.axis(0)) == [0, 3, 6, 9, 12, 15, 18, 21, 24]
    assert len(grid.axis(1)) == 8
    assert len(grid) <= 11 * 11
    assert EpsilonGrid.from_policy("tenth", {Z2: 0}, {Z2: 25}) == EpsilonGrid.tenth(
        {Z2: 0}, {Z2: 25})
    assert EpsilonGrid.from_policy(GridPolicy.UNIT, {Z2: 0}, {Z2: 2}).increments == (1,)


@pytest.mark.parametrize("fields", [
    dict(objectives=(Z2,), minimum=(0, 1), maximum=(1,), increments=(1,)),
    dict(objectives=(Z2,), minimum=(2,), maximum=(1,), increments=(1,)),
    dict(objectives=(Z2,), minimum=(0,), maximum=(1,), increments=(0,)),
])
def test_grid_validation(fields):
    with pytest.raises(ParameterError):
        EpsilonGrid(**fields)


def test_not_skip():
    # A solution proven optimal at a looser ε that meets ε is the optimum at ε too
    assert not not_skip((4, 5), [Found((4, 4), (5, 5), True)], [])
    assert not not_skip((4, 5), [Found((4, 5), (5, 5), True)], [])
    # Found at a tighter ε, or not proven optimal: solve again
    assert not_skip((4, 5), [Found((5, 5), (5, 5), True)], [])
    assert not_skip((4, 5), [Found((4, 4), (5, 5), False)], [])
    assert not_skip((3, 3), [Found((0, 0), (4, 2), True)], [])
    # Stricter than a point already proven infeasible
    assert not not_skip((4, 3), [], [(3, 3)])
    assert not_skip((2, 3), [], [(3, 3)])


def test_big_m(t1):
    assert big_m(t1, MONOLITHIC_OBJECTIVES) == 31


def test_initialisation_t1(t1, t1_config, t1_solution):
    init = initialisation_phase(t1, MONOLITHIC_OBJECTIVES)
    assert init.z_max == {Z1: -4, Z2: 2, Z3: -1, Z4: -4}
    assert init.z_min == init.z_max
    assert init.seeds == [t1_solution] * 4
    assert init.seed_vectors == [(-4, 2, -1, -4)] * 4
    assert all(status is SolveStatus.OPTIMAL for status in init.statuses.values())
    assert init.big_m == 31
    assert init.floor == {Z1: -8, Z2: 1, Z3: -2, Z4: -4}
    # The lattice starts from the floor: 5 x 2 x 1 points
    assert len(init.grid((Z1, Z2, Z4))) == 10

    stage1 = initialisation_phase(t1, STAGE1_OBJECTIVES, ProblemKind.STAGE1)
    assert stage1.seeds == [t1_config] * 3
    assert stage1.z_max == {Z1: -4, Z2: 2, Z5: 4}


def test_initialisation_of_an_infeasible_instance():
    with pytest.raises(InfeasibleInstance):
        initialisation_phase(_clashing_instance(), MONOLITHIC_OBJECTIVES)


@mock.patch("defence_scheduler.epsilon.optimise",
            return_value=SolveResult(SolveStatus.UNKNOWN, gap=math.inf))
def test_initialisation_without_any_solution_in_time(mock_optimise, t1):
    with pytest.raises(DefenceSchedulerError, match="within"):
        initialisation_phase(t1, MONOLITHIC_OBJECTIVES, time_limit=1)
    mock_optimise.assert_called_once()


def test_t1_front_is_the_oracle_front(t1):
    init = initialisation_phase(t1, MONOLITHIC_OBJECTIVES)
    grid = init.grid((Z1, Z2, Z4))
    run = augmented_epsilon_constraint(t1, ProblemKind.MONOLITHIC, grid, Z3,
                                       objectives=MONOLITHIC_OBJECTIVES)
    assert run.solve_count == 1
    assert run.front.vectors() == oracle_front(t1).vectors() == [(-4, 2, -1, -4)]
    assert len(run.ledger) == 10
    assert run.skip_count == 9


def test_stage2_run_on_t1(t1, t1_config):
    grid = EpsilonGrid.unit({Z4: -4}, {Z4: -3})
    run = augmented_epsilon_constraint(t1, ProblemKind.STAGE2, grid, Z3, config=t1_config)
    assert run.front.vectors() == [(-1, -4)]
    assert run.solve_count == 2
    assert [it.status for it in run.ledger] == [SolveStatus.OPTIMAL, SolveStatus.INFEASIBLE]


def _two_objective_run(instance, policy, skip):
    objectives = (Z3, Z4)
    init = initialisation_phase(instance, objectives)
    grid = init.grid((Z4,), policy)
    return augmented_epsilon_constraint(instance, ProblemKind.MONOLITHIC, grid, Z3,
                                        objectives=objectives, skip=skip)


def test_unit_grid_finds_the_whole_front(open_instance):
    expected = sorted(oracle_front(open_instance, (Z3, Z4)).vectors())
    with_skips = _two_objective_run(open_instance, GridPolicy.UNIT, skip=True)
    without = _two_objective_run(open_instance, GridPolicy.UNIT, skip=False)

    assert sorted(with_skips.front.vectors()) == expected
    assert sorted(without.front.vectors()) == expected
    assert with_skips.solve_count <= without.solve_count
    assert with_skips.solve_count + with_skips.skip_count == len(with_skips.ledger)
    assert with_skips.non_optimal == 0


def test_tenth_grid_finds_part_of_the_front(open_instance):
    expected = set(oracle_front(open_instance, (Z3, Z4)).vectors())
    run = _two_objective_run(open_instance, GridPolicy.TENTH, skip=True)
    assert set(run.front.vectors()) <= expected
    assert run.solve_count <= 11


def test_primary_cannot_be_bounded(t1):
    grid = EpsilonGrid.unit({Z3: -1}, {Z3: 0})
    with pytest.raises(ParameterError):
        augmented_epsilon_constraint(t1, ProblemKind.MONOLITHIC, grid, Z3)


def test_unit_grid_matches_the_oracle_on_random_instances(feasible_tiny_instances):
    # (days, slots, rooms): one or two days and rooms, short days with a single start
    shapes = ((1, 4, 2), (2, 4, 2), (2, 3, 1), (3, 2, 1), (2, 4, 1))
    instances = feasible_tiny_instances(20, shapes)
    assert len(instances) == 20

    for n, (instance, oracle) in enumerate(instances):
        primary = MONOLITHIC_OBJECTIVES[n % len(MONOLITHIC_OBJECTIVES)]
        bounded = tuple(o for o in MONOLITHIC_OBJECTIVES if o is not primary)
        init = initialisation_phase(instance, MONOLITHIC_OBJECTIVES)
        run = augmented_epsilon_constraint(instance, ProblemKind.MONOLITHIC, init.grid(bounded),
                                           primary, objectives=MONOLITHIC_OBJECTIVES)
        expected = set(oracle.vectors())
        assert set(run.front.vectors()) == expected, f"instance {n}, primary {primary.name}"
        # Every proven optimum is Pareto optimal, before any filtering
        for _, result in run.results:
            if result.status is SolveStatus.OPTIMAL:
                assert result.vector in expected


@mock.patch("defence_scheduler.epsilon.optimise")
def test_timed_out_solves_are_counted(mock_optimise, t1, t1_config, t1_solution):
    mock_optimise.return_value = SolveResult(SolveStatus.FEASIBLE_TIMEOUT, t1_solution,
                                             (-1, -4), gap=0.5)
    grid = EpsilonGrid.unit({Z4: -5}, {Z4: -4})
    run = augmented_epsilon_constraint(t1, ProblemKind.STAGE2, grid, Z3, config=t1_config)
    # A solution that is not proven optimal never lets an iteration be skipped
    assert run.solve_count == 2
    assert run.non_optimal == 2
    assert run.front.vectors() == [(-1, -4)]
