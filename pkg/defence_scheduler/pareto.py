"""Dominance, non-dominated fronts, crowding distance and front archives.

All objective vectors are in maximisation form.
"""
import math
from dataclasses import dataclass, field

from .errors import ParameterError


def dominates(a, b):
    """True iff a is at least as good as b everywhere and strictly better somewhere."""
    if len(a) != len(b):
        raise ParameterError(f"Cannot compare vectors of length {len(a)} and {len(b)}")
    strictly = False
    for x, y in zip(a, b):
        if x < y:
            return False
        if x > y:
            strictly = True
    return strictly


def sort_fronts(points):
    """Fast non-dominated sort.

    Returns
    -------
    A list with the front rank of each point (0 is the non-dominated front).
    """
    points = list(points)
    n = len(points)
    dominated_by_me = [[] for _ in range(n)]
    n_dominating = [0] * n
    ranks = [0] * n

    for p in range(n):
        for q in range(p + 1, n):
            if dominates(points[p], points[q]):
                dominated_by_me[p].append(q)
                n_dominating[q] += 1
            elif dominates(points[q], points[p]):
                dominated_by_me[q].append(p)
                n_dominating[p] += 1
    current = [p for p in range(n) if n_dominating[p] == 0]

    rank = 0
    while current:
        following = []
        for p in current:
            ranks[p] = rank
            for q in dominated_by_me[p]:
                n_dominating[q] -= 1
                if n_dominating[q] == 0:
                    following.append(q)
        rank += 1
        current = following
    return ranks


def group_fronts(ranks):
    """Turn a rank list into a list of fronts, each a list of indices in input order."""
    if not ranks:
        return []
    fronts = [[] for _ in range(max(ranks) + 1)]
    for index, rank in enumerate(ranks):
        fronts[rank].append(index)
    return fronts


def nondominated_indices(points):
    ranks = sort_fronts(points)
    return [i for i, rank in enumerate(ranks) if rank == 0]


def crowding_distance(s, S):
    """Crowding distance of point `s` with respect to the point set `S`.

    For each objective the gap between the closest strictly better and the closest strictly
    worse value is divided by the range of that objective over the set. Objectives with a
    zero range contribute nothing. A point with no strictly better or no strictly worse
    neighbour in some objective is a boundary point and gets `math.inf`, as does any point
    measured against fewer than two points.

    If `s` is not in `S` it is measured against `S` plus itself.
    """
    reference = list(S)
    if tuple(s) not in [tuple(p) for p in reference]:
        reference.append(s)
    if len(reference) < 2:
        return math.inf

    distance = 0.0
    for i in range(len(s)):
        values = [p[i] for p in reference]
        low, high = min(values), max(values)
        if high == low:
            continue
        above = [v for v in values if v > s[i]]
        below = [v for v in values if v < s[i]]
        if not above or not below:
            return math.inf
        distance += (min(above) - max(below)) / (high - low)
    return distance


@dataclass(frozen=True)
class FrontArchive:
    """A set of objective vectors, each tagged with a payload id, plus their front ranks.

    `payloads` optionally maps payload ids to the solutions they stand for.
    """

    objectives: tuple
    entries: tuple
    ranks: tuple
    payloads: dict = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, objectives, entries, payloads=None):
        entries = tuple((tuple(int(v) for v in vector), pid) for vector, pid in entries)
        for vector, _ in entries:
            if len(vector) != len(objectives):
                raise ParameterError(
                    f"Vector {vector} does not match objectives {list(objectives)}")
        ranks = tuple(sort_fronts([vector for vector, _ in entries]))
        return cls(tuple(objectives), entries, ranks, dict(payloads or {}))

    def __len__(self):
        return len(self.entries)

    def vectors(self):
        return [vector for vector, _ in self.entries]

    def payload_ids(self):
        return [pid for _, pid in self.entries]

    def first_fronts(self, n_fronts=None):
        """Entries whose rank is below `n_fronts` (all entries when None)."""
        return [
            entry for entry, rank in zip(self.entries, self.ranks)
            if n_fronts is None or rank < n_fronts
        ]

    def nondominated(self):
        """Rank-0 archive with duplicate vectors collapsed onto their lowest payload id."""
        best = {}
        for (vector, pid), rank in zip(self.entries, self.ranks):
            if rank != 0:
                continue
            if vector not in best or pid < best[vector]:
                best[vector] = pid
        entries = sorted(((v, pid) for v, pid in best.items()), key=lambda e: e[1])
        payloads = {pid: self.payloads[pid] for _, pid in entries if pid in self.payloads}
        return FrontArchive.build(self.objectives, entries, payloads)

    def project(self, objectives):
        """Archive over a subset of the objectives, ranks recomputed."""
        positions = [self.objectives.index(o) for o in objectives]
        entries = [
            (tuple(vector[p] for p in positions), pid) for vector, pid in self.entries
        ]
        return FrontArchive.build(tuple(objectives), entries, self.payloads)


def merge_nondominated(*archives):
    """Union of several archives reduced to its non-dominated set.

    Merging is associative and commutative: the result only depends on the union of entries.
    """
    if not archives:
        raise ParameterError("Nothing to merge")
    objectives = archives[0].objectives
    entries = []
    payloads = {}
    seen = {}
    for archive in archives:
        if archive.objectives != objectives:
            raise ParameterError(
                f"Cannot merge fronts over {list(archive.objectives)} and {list(objectives)}")
        for vector, pid in archive.entries:
            if seen.setdefault(pid, vector) != vector:
                raise ParameterError(f"Payload id {pid} used for two different vectors")
            entries.append((vector, pid))
        payloads.update(archive.payloads)
    unique = sorted(set(entries), key=lambda e: (e[1], e[0]))
    return FrontArchive.build(objectives, unique, payloads).nondominated()
