"""Brute-force ground truth for tiny instances.

Nothing here uses the exact search or the ε-constraint code: every (committee, day, start,
room) combination is tried and only the hard constraints are checked.
"""
import itertools
import math

from .errors import OracleCapExceeded
from .model import MONOLITHIC_OBJECTIVES, CommitteeConfig, FullSolution, Schedule
from .objectives import evaluate
from .pareto import FrontArchive

DEFAULT_ORACLE_CAP = 10 ** 6


def search_space_size(instance):
    """Product over defences of (role combinations x days x starts x rooms)."""
    places = instance.n_days * instance.n_starts * instance.n_rooms
    return math.prod(
        math.prod(len(members) for members in defence) * places
        for defence in instance.eligibility
    )


def enumerate_all(instance, objectives=MONOLITHIC_OBJECTIVES, cap=DEFAULT_ORACLE_CAP):
    """Every feasible FullSolution with its objective vector, in depth-first order.

    Raises
    ------
    OracleCapExceeded if the raw search space is larger than `cap`.
    """
    size = search_space_size(instance)
    if size > cap:
        raise OracleCapExceeded(f"Search space of {size} combinations exceeds the cap of {cap}")

    d = instance.duration
    committees = [
        [c for c in itertools.product(*(sorted(m) for m in defence)) if len(set(c)) == len(c)]
        for defence in instance.eligibility
    ]
    places = list(itertools.product(
        range(instance.n_days), range(instance.n_starts), range(instance.n_rooms)))
    found = []
    chosen = []

    def clashes(committee, day, start, room):
        for other, (k, s, p) in chosen:
            if k != day or s + d <= start or start + d <= s:
                continue
            if p == room or set(other) & set(committee):
                return True
        return False

    def available(committee, day, start):
        return all(
            (day, ell) in instance.availability[i]
            for i in committee for ell in range(start, start + d)
        )

    def extend(j):
        if j == instance.n_defences:
            config = CommitteeConfig(tuple(c for c, _ in chosen))
            solution = FullSolution(config, Schedule(tuple(place for _, place in chosen)))
            found.append((solution, evaluate(instance, solution, objectives)))
            return
        for committee in committees[j]:
            for day, start, room in places:
                if not available(committee, day, start):
                    continue
                if clashes(committee, day, start, room):
                    continue
                chosen.append((committee, (day, start, room)))
                extend(j + 1)
                chosen.pop()

    extend(0)
    return found


def oracle_front(instance, objectives=MONOLITHIC_OBJECTIVES, cap=DEFAULT_ORACLE_CAP):
    """Rank-0 archive of every feasible solution; payload ids index enumerate_all's list."""
    solutions = enumerate_all(instance, objectives, cap)
    archive = FrontArchive.build(
        objectives,
        [(vector, n) for n, (_, vector) in enumerate(solutions)],
        {n: solution for n, (solution, _) in enumerate(solutions)},
    )
    return archive.nondominated()
