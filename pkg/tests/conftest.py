from dataclasses import replace

import mock
import pytest

from defence_scheduler.errors import GenerationError
from defence_scheduler.generator import PRESETS, generate_instance
from defence_scheduler.model import CommitteeConfig, FullSolution, Instance, Schedule
from defence_scheduler.oracle import oracle_front


def make_t1():
    """The canonical tiny instance.

    Four members and two defences of two roles on one day of four slots, one room, d=2.
    Role 0 is preassigned (defence 0 -> member 0, defence 1 -> member 1) and role 1 can go to
    member 2 or 3. Member 2 is free in slots 0-1 only, member 3 in slots 2-3 only, and member
    2 dislikes slot 0.
    """
    return Instance(
        n_members=4,
        n_defences=2,
        n_roles=2,
        n_days=1,
        n_slots=4,
        n_rooms=1,
        n_subjects=2,
        duration=2,
        eligibility=[[{0}, {2, 3}], [{1}, {2, 3}]],
        availability=[
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 0), (0, 1)],
            [(0, 2), (0, 3)],
        ],
        member_expertise=[[], [], [0], [0, 1]],
        defence_subjects=[[0], [1]],
        penalties={(2, 0, 0): 1},
    )


@pytest.fixture(scope="function")
def t1():
    return make_t1()


@pytest.fixture(scope="function")
def t1_config():
    """Member 2 on defence 0, member 3 on defence 1."""
    return CommitteeConfig(((0, 2), (1, 3)))


@pytest.fixture(scope="function")
def t1_swapped_config():
    return CommitteeConfig(((0, 3), (1, 2)))


@pytest.fixture(scope="function")
def t1_solution(t1_config):
    """The only schedule of t1_config: defence 0 in slots 0-1, defence 1 in slots 2-3."""
    return FullSolution(t1_config, Schedule(((0, 0, 0), (0, 2, 0))))


@pytest.fixture(scope="function")
def t1_swapped_solution(t1_swapped_config):
    return FullSolution(t1_swapped_config, Schedule(((0, 2, 0), (0, 0, 0))))


@pytest.fixture(scope="function")
def open_instance():
    """Three defences, everyone free all day, no penalties; every committee is feasible."""
    return Instance(
        n_members=5,
        n_defences=3,
        n_roles=2,
        n_days=2,
        n_slots=4,
        n_rooms=2,
        n_subjects=3,
        duration=2,
        eligibility=[[{0}, {2, 3, 4}], [{1}, {2, 3}], [{0}, {3, 4}]],
        availability=[[(k, ell) for k in range(2) for ell in range(4)]] * 5,
        member_expertise=[[0], [1], [0, 1], [2], [1, 2]],
        defence_subjects=[[0], [1], [2]],
        penalties={(3, 1, 0): 2, (4, 0, 3): 1},
    )


@pytest.fixture(scope="function")
def tiny_instance():
    return generate_instance(PRESETS["tiny"].with_seed(3))


@pytest.fixture(scope="function")
def fake_clock():
    """A clock the tests move forward by hand."""
    clock = mock.Mock()
    clock.return_value = 0.0
    return clock


@pytest.fixture(scope="session")
def feasible_tiny_instances():
    """Draw random tiny instances that have at least one feasible solution.

    Returns a function of (count, shapes) giving a list of (instance, oracle front) pairs;
    the shapes, (days, slots, rooms) triples, are cycled through seed by seed.
    """
    def draw(count, shapes=((1, 4, 2),), max_seed=400):
        found = []
        for seed in range(max_seed):
            days, slots, rooms = shapes[seed % len(shapes)]
            spec = replace(PRESETS["tiny"], n_days=days, n_slots=slots, n_rooms=rooms, seed=seed)
            try:
                instance = generate_instance(spec)
            except GenerationError:
                continue
            front = oracle_front(instance)
            if len(front):
                found.append((instance, front))
            if len(found) == count:
                break
        return found
    return draw
