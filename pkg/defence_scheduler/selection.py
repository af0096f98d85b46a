"""Elite selection and mating tournaments for NSGA-II and NSGA-III.

Everything works on a list of objective vectors (maximisation form) and returns indices
into that list, so the same code serves populations of any payload type.
"""
import numpy as np
from scipy.spatial.distance import cdist

from .errors import ParameterError
from .pareto import crowding_distance, group_fronts, sort_fronts


def crowding_match(first, second, points, ranks, reference):
    """Winner of a match between two individuals (indices into `points`).

    A lower front rank wins; on equal ranks the larger crowding distance with respect to
    `reference` wins; any remaining draw goes to the first individual.
    """
    if ranks[second] < ranks[first]:
        return second
    if ranks[second] == ranks[first]:
        c_first = crowding_distance(points[first], reference)
        c_second = crowding_distance(points[second], reference)
        if c_second > c_first:
            return second
    return first


def tournament(points, ranks, n_rounds, rng):
    """Crowding distance tournament.

    Each round shuffles the individuals and pairs them off consecutively (an odd one out sits
    the round out). Crowding is measured against the winners collected so far, or against all
    individuals while there are none yet.

    Returns
    -------
    A list of distinct winner indices in the order they first won.
    """
    winners = []
    won = set()
    n = len(points)
    for _ in range(n_rounds):
        shuffled = [int(i) for i in rng.permutation(n)]
        for m in range(0, n - 1, 2):
            if winners:
                reference = [points[w] for w in winners]
            else:
                reference = points
            winner = crowding_match(shuffled[m], shuffled[m + 1], points, ranks, reference)
            if winner not in won:
                won.add(winner)
                winners.append(winner)
    return winners


def fill_by_fronts(points, target):
    """Add whole fronts in rank order while they fit.

    Returns
    -------
    (elite indices, first front that did not fit (may be empty), ranks)
    """
    ranks = sort_fronts(points)
    elite = []
    for front in group_fronts(ranks):
        if len(elite) + len(front) <= target:
            elite.extend(front)
        else:
            return elite, front, ranks
    return elite, [], ranks


def elite2(points, n_s):
    """NSGA-II elite of n_s/2 individuals.

    After whole fronts, seats go one at a time to the member of the first front that did not
    fit with the largest crowding distance to the distinct vectors of the current elite. A
    member whose vector is already in the elite scores below every other member.
    """
    target = min(n_s // 2, len(points))
    elite, last_front, _ = fill_by_fronts(points, target)
    remaining = list(last_front)
    while len(elite) < target:
        elite_points = list(dict.fromkeys(tuple(points[e]) for e in elite))
        best, best_distance = None, None
        for candidate in remaining:
            if tuple(points[candidate]) in elite_points:
                distance = -1.0
            else:
                distance = crowding_distance(points[candidate], elite_points)
            if best is None or distance > best_distance:
                best, best_distance = candidate, distance
        elite.append(best)
        remaining.remove(best)
    return elite


def normalise_by_range(points):
    """Min-max normalisation per objective over the given points; flat objectives map to 0."""
    array = np.asarray(points, dtype=float)
    low = array.min(axis=0)
    span = array.max(axis=0) - low
    return (array - low) / np.where(span == 0, 1.0, span)


def assign_reference_points(normalised, z_ref):
    """Index of the closest reference point (Euclidean) for each row; ties go to the first."""
    distances = cdist(np.asarray(normalised, dtype=float), np.asarray(z_ref, dtype=float))
    return [int(r) for r in distances.argmin(axis=1)]


def elite3(points, n_s, z_ref, rng):
    """NSGA-III elite of n_s/2 individuals.

    After whole fronts, the elite and the first front that did not fit are normalised
    together and each is attached to its nearest reference point. Each remaining seat goes to
    a random unchosen member of that front attached to the reference point with the fewest
    elite members; reference points without such candidates are passed over for good.
    """
    if z_ref is None or len(z_ref) == 0:
        raise ParameterError("NSGA-III needs at least one reference point")
    target = min(n_s // 2, len(points))
    elite, last_front, _ = fill_by_fronts(points, target)
    if len(elite) == target:
        return elite

    candidates = elite + list(last_front)
    assigned = dict(zip(
        candidates,
        assign_reference_points(normalise_by_range([points[c] for c in candidates]), z_ref),
    ))
    frequency = [0] * len(z_ref)
    for e in elite:
        frequency[assigned[e]] += 1

    remaining = list(last_front)
    excluded = set()
    while len(elite) < target:
        order = sorted((r for r in range(len(z_ref)) if r not in excluded),
                       key=lambda r: (frequency[r], r))
        for r in order:
            pool = [c for c in remaining if assigned[c] == r]
            if not pool:
                excluded.add(r)
                continue
            chosen = pool[int(rng.integers(len(pool)))]
            elite.append(chosen)
            remaining.remove(chosen)
            frequency[r] += 1
            break
    return elite


def default_reference_points(n_objectives, divisions):
    """Simplex lattice: every point with coordinates in multiples of 1/divisions summing to 1.

    There are C(divisions + n_objectives - 1, n_objectives - 1) of them.
    """
    if n_objectives < 1 or divisions < 1:
        raise ParameterError("Need at least one objective and one division")

    def recurse(prefix, left, depth):
        if depth == n_objectives - 1:
            yield prefix + [left]
            return
        for i in range(left + 1):
            yield from recurse(prefix + [i], left - i, depth + 1)

    return np.array(list(recurse([], divisions, 0)), dtype=float) / divisions
