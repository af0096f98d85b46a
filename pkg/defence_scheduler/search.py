"""Exact single-objective backend.

`optimise` runs a depth-first branch-and-bound that maximises one objective subject to
integer lower bounds on others. Ties on the primary objective are broken by an augmentation
term, compared exactly with Fractions, so the incumbent is the lexicographic best
(primary first, augmentation second).

The tree assigns one defence per level, choosing the pending defence with the fewest
remaining options (ties to the lowest id). An option is a (committee, day, start, room)
choice when schedules are searched, or a committee alone for the committee-only problem.
Rooms are interchangeable, so a defence is only ever put in a room already in use or in the
lowest-numbered unused one.
"""
import enum
import heapq
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .committees import enumerate_feasible_committees
from .errors import ParameterError, SearchTimeout
from .feasibility import check_shape
from .model import COMMITTEE_OBJECTIVES, CommitteeConfig, FullSolution, Objective, Schedule
from .objectives import evaluate
from .search_monitor import SearchMonitor

logger = logging.getLogger(__name__)

DEFAULT_TIME_LIMIT = 120


class ProblemKind(enum.Enum):
    MONOLITHIC = "monolithic"
    # Committees only, over CommitteeConfigs
    STAGE1 = "stage1"
    # Schedules for a fixed committee configuration
    STAGE2 = "stage2"


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE_TIMEOUT = "feasible_timeout"
    INFEASIBLE = "infeasible"
    # Deadline reached before any feasible leaf
    UNKNOWN = "unknown"

    @property
    def has_solution(self):
        return self in (SolveStatus.OPTIMAL, SolveStatus.FEASIBLE_TIMEOUT)


def _ratio(value, bounds):
    span = int(bounds.max) - int(bounds.min)
    if span == 0:
        return Fraction(0)
    return Fraction(int(value) - int(bounds.min), span)


def augmentation_term(values, primary, ranges):
    """(1/n_z) * sum over non-primary objectives of (z - z_min) / (z_max - z_min).

    Objectives without a range, or whose range is a single value, contribute 0.
    """
    total = sum(
        (_ratio(value, ranges[o]) for o, value in values.items()
         if o != primary and o in ranges),
        Fraction(0),
    )
    return total / len(values)


def augmented_value(values, primary, ranges):
    """The augmented objective of an objective vector.

    Parameters
    ----------
    values: mapping Objective -> int
        Every objective of the problem; n_z is the number of entries.
    primary: Objective
    ranges: mapping Objective -> MinMax
    """
    return float(values[primary] + augmentation_term(values, primary, ranges))


@dataclass(frozen=True)
class SolveRequest:
    kind: ProblemKind
    primary: Objective
    objectives: tuple
    # Objective -> integer lower bound, in maximisation form
    epsilon_bounds: dict = field(default_factory=dict)
    time_limit: float = DEFAULT_TIME_LIMIT
    # Objective -> MinMax used by the augmentation term
    ranges: dict = field(default_factory=dict)
    # When set, ties are broken by (1/big_m) * sum of the other objectives instead
    big_m: Optional[int] = None
    config: Optional[CommitteeConfig] = None
    verbose: bool = False

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(Objective(o) for o in self.objectives))
        object.__setattr__(self, "epsilon_bounds", {
            Objective(o): int(v) for o, v in dict(self.epsilon_bounds).items()})
        object.__setattr__(self, "ranges", dict(self.ranges))

        if not isinstance(self.kind, ProblemKind):
            raise ParameterError(f"Unknown problem kind {self.kind!r}")
        if not self.objectives or len(set(self.objectives)) != len(self.objectives):
            raise ParameterError("objectives must be a non-empty sequence without repeats")
        if self.primary not in self.objectives:
            raise ParameterError(f"primary {self.primary.name} is not one of the objectives")
        for objective in self.epsilon_bounds:
            if objective == self.primary:
                raise ParameterError("the primary objective cannot carry an ε bound")
            if objective not in self.objectives:
                raise ParameterError(f"ε bound on {objective.name}, which is not optimised")
        if not self.time_limit > 0:
            raise ParameterError(f"time_limit must be positive, got {self.time_limit}")
        if self.big_m is not None and self.big_m <= 0:
            raise ParameterError("big_m must be positive")
        if self.kind is ProblemKind.STAGE2:
            if self.config is None:
                raise ParameterError("a STAGE2 request needs a committee configuration")
        elif self.config is not None:
            raise ParameterError(f"a {self.kind.name} request does not take a configuration")
        if self.kind is ProblemKind.STAGE1 and not set(self.objectives) <= COMMITTEE_OBJECTIVES:
            raise ParameterError("the committee-only problem can only optimise Z1, Z2 and Z5")

    def score(self, values):
        """Lexicographic key (primary value, tie-break term) of a mapping Objective -> value."""
        primary = values[self.primary]
        if self.big_m is not None:
            others = sum(v for o, v in values.items() if o != self.primary)
            return primary, Fraction(others, self.big_m)
        return primary, augmentation_term(values, self.primary, self.ranges)


@dataclass
class SolveResult:
    status: SolveStatus
    # FullSolution, or CommitteeConfig for STAGE1; None unless status.has_solution
    solution: object = None
    # Objective values in the order of SolveRequest.objectives
    vector: Optional[tuple] = None
    gap: float = 0.0
    nodes: int = 0
    seconds: float = 0.0


def optimise(instance, request):
    """Solve one request to optimality, or until its time limit.

    Returns
    -------
    SolveResult: OPTIMAL (gap 0) or INFEASIBLE when the tree was exhausted, FEASIBLE_TIMEOUT
    with the incumbent and its relative gap to the root bound at the deadline, or UNKNOWN
    when the deadline came first.
    """
    if request.config is not None:
        check_shape(instance, request.config)
    monitor = SearchMonitor(request.time_limit, verbose=request.verbose)
    search = _Search(instance, request, monitor)
    try:
        search.run()
        completed = True
    except SearchTimeout:
        completed = False

    if search.best is None:
        status = SolveStatus.INFEASIBLE if completed else SolveStatus.UNKNOWN
        result = SolveResult(status, gap=0.0 if completed else math.inf)
    else:
        status = SolveStatus.OPTIMAL if completed else SolveStatus.FEASIBLE_TIMEOUT
        solution, vector = search.best
        result = SolveResult(status, solution, vector, 0.0 if completed else search.gap())
    result.nodes = monitor.nodes
    result.seconds = monitor.elapsed()
    logger.debug("%s solve, primary %s, bounds %s: %s after %d nodes (%.2fs)",
                 request.kind.name, request.primary.name,
                 {o.name: v for o, v in request.epsilon_bounds.items()},
                 result.status.name, result.nodes, result.seconds)
    return result


def optimistic_bounds(instance, request, partial=None):
    """Per-objective upper bounds on every completion of a partial assignment.

    Parameters
    ----------
    partial: mapping defence -> option, optional
        An option is a committee tuple for STAGE1 requests, otherwise
        (committee tuple, (day, start, room)). The options must be mutually compatible.

    Returns
    -------
    dict Objective -> int, or None when some pending defence has no option left.
    """
    if request.config is not None:
        check_shape(instance, request.config)
    search = _Search(instance, request, SearchMonitor(math.inf))
    for j, option in (partial or {}).items():
        search.assign(j, search.internal_option(j, option))
    return search.bounds_here()


class _Search:

    def __init__(self, instance, request, monitor):
        self.instance = instance
        self.request = request
        self.monitor = monitor
        self.objectives = request.objectives
        self.scheduling = request.kind is not ProblemKind.STAGE1
        n_j = instance.n_defences

        if request.kind is ProblemKind.STAGE2:
            self.candidates = [[request.config.committee(j)] for j in range(n_j)]
        else:
            self.candidates = [enumerate_feasible_committees(instance, j) for j in range(n_j)]
        self.arrays = [
            np.array(c, dtype=np.intp).reshape(len(c), instance.n_roles) for c in self.candidates
        ]
        self.suit = [instance.suitability[a, j].sum(axis=1) for j, a in enumerate(self.arrays)]
        self.common = [instance.availability_grid[a].all(axis=1).sum(axis=(1, 2))
                       for a in self.arrays]
        # Members in every candidate committee of a defence
        self.forced = [
            frozenset.intersection(*(frozenset(c) for c in candidates)) if candidates
            else frozenset()
            for candidates in self.candidates
        ]
        if self.scheduling:
            self.windows = [instance.window_availability[a].all(axis=1) for a in self.arrays]
            self.penalty = [instance.window_penalty[a].sum(axis=1) for a in self.arrays]

        n_i, n_k, n_l = instance.n_members, instance.n_days, instance.n_slots
        self.choice = [None] * n_j
        self.loads = np.zeros(n_i, dtype=np.int64)
        self.member_days = np.zeros((n_i, n_k), dtype=np.int64)
        self.busy = np.zeros((n_i, n_k, n_l), dtype=np.int64)
        self.room_busy = np.zeros((instance.n_rooms, n_k, n_l), dtype=bool)
        self.room_use = np.zeros(instance.n_rooms, dtype=np.int64)
        self.suitability_total = 0
        self.penalty_total = 0
        self.common_total = 0

        self.best = None
        self.best_score = None
        self.root_bound = None

    # Search

    def run(self):
        self._branch()

    def _branch(self):
        self.monitor.visit_node()
        pending = [j for j, option in enumerate(self.choice) if option is None]
        if not pending:
            self._leaf()
            return
        view = self._node_view()
        feasible = self._feasible_options(pending, view)
        bounds = self._bounds(pending, feasible)
        if bounds is None or self._pruned(bounds):
            self.monitor.record_prune()
            return
        if self.root_bound is None:
            self.root_bound = bounds

        j = min(pending, key=lambda d: (self._option_count(d, feasible, view), d))
        for option in self._options(j, feasible, view):
            self.assign(j, option)
            self._branch()
            self.unassign(j, option)

    def _leaf(self):
        config = CommitteeConfig(tuple(
            self.candidates[j][option[0]] for j, option in enumerate(self.choice)))
        if self.scheduling:
            solution = FullSolution(config, Schedule(tuple(o[1:] for o in self.choice)))
        else:
            solution = config
        vector = evaluate(self.instance, solution, self.objectives)
        values = dict(zip(self.objectives, vector))
        if any(values[o] < eps for o, eps in self.request.epsilon_bounds.items()):
            return
        score = self.request.score(values)
        if self.best_score is None or score > self.best_score:
            self.best = solution, vector
            self.best_score = score
            self.monitor.record_incumbent(score)

    def _pruned(self, bounds):
        for objective, eps in self.request.epsilon_bounds.items():
            if bounds[objective] < eps:
                return True
        return self.best_score is not None and self.request.score(bounds) <= self.best_score

    def gap(self):
        if self.root_bound is None or self.best_score is None:
            return math.inf
        bound = sum(self.request.score(self.root_bound))
        found = sum(self.best_score)
        return max(0.0, float(bound - found) / max(1.0, abs(float(found))))

    # State

    def internal_option(self, j, option):
        committee, place = (option, ()) if not self.scheduling else option
        try:
            c = self.candidates[j].index(tuple(committee))
        except ValueError:
            raise ParameterError(
                f"{tuple(committee)} is not a candidate committee of defence {j}") from None
        return (c,) + tuple(place)

    def assign(self, j, option):
        c = option[0]
        members = self.arrays[j][c]
        self.loads[members] += 1
        self.suitability_total += int(self.suit[j][c])
        self.common_total += int(self.common[j][c])
        if self.scheduling:
            _, k, s, p = option
            end = s + self.instance.duration
            self.busy[members, k, s:end] += 1
            self.room_busy[p, k, s:end] = True
            self.room_use[p] += 1
            self.member_days[members, k] += 1
            self.penalty_total += int(self.penalty[j][c, k, s])
        self.choice[j] = option

    def unassign(self, j, option):
        c = option[0]
        members = self.arrays[j][c]
        self.loads[members] -= 1
        self.suitability_total -= int(self.suit[j][c])
        self.common_total -= int(self.common[j][c])
        if self.scheduling:
            _, k, s, p = option
            end = s + self.instance.duration
            self.busy[members, k, s:end] -= 1
            self.room_busy[p, k, s:end] = False
            self.room_use[p] -= 1
            self.member_days[members, k] -= 1
            self.penalty_total -= int(self.penalty[j][c, k, s])
        self.choice[j] = None

    # Options

    def _node_view(self):
        """(member clash, free rooms, room choices) per window at the current node."""
        if not self.scheduling:
            return None
        d = self.instance.duration
        sliding = np.lib.stride_tricks.sliding_window_view
        clash = sliding(self.busy > 0, d, axis=2).any(axis=-1)
        room_free = ~sliding(self.room_busy, d, axis=2).any(axis=-1)
        used = (self.room_use > 0)[:, None, None]
        choices = (room_free & used).sum(axis=0) + (room_free & ~used).any(axis=0)
        return clash, room_free, choices

    def _feasible_options(self, pending, view):
        """Defence -> bool array (committee, day, start) of windows still open."""
        if not self.scheduling:
            return None
        clash, _, choices = view
        open_rooms = choices > 0
        return {
            j: self.windows[j] & ~clash[self.arrays[j]].any(axis=1) & open_rooms
            for j in pending
        }

    def _option_count(self, j, feasible, view):
        if not self.scheduling:
            return len(self.candidates[j])
        return int((feasible[j] * view[2]).sum())

    def _options(self, j, feasible, view):
        """Options of defence j, most promising for the primary objective first."""
        arr = self.arrays[j]
        load = self.loads[arr].sum(axis=1)
        if not self.scheduling:
            keys = {
                Objective.Z1: load,
                Objective.Z2: -self.suit[j],
                Objective.Z5: -self.common[j],
            }
            order = np.argsort(keys[self.request.primary], kind="stable")
            return [(int(c),) for c in order]

        cells = np.argwhere(feasible[j])
        c, k, s = cells[:, 0], cells[:, 1], cells[:, 2]
        penalty = self.penalty[j][c, k, s]
        new_days = (self.member_days[arr] == 0).sum(axis=1)[c, k]
        keys = {
            Objective.Z1: load[c],
            Objective.Z2: -self.suit[j][c],
            Objective.Z3: penalty,
            Objective.Z4: new_days,
            Objective.Z5: -self.common[j][c],
        }
        order = np.lexsort((new_days, penalty, keys[self.request.primary]))

        _, room_free, _ = view
        used = self.room_use > 0
        options = []
        for index in order:
            ci, ki, si = int(c[index]), int(k[index]), int(s[index])
            free = room_free[:, ki, si]
            rooms = [int(p) for p in np.flatnonzero(free & used)]
            fresh = np.flatnonzero(free & ~used)
            if fresh.size:
                rooms.append(int(fresh[0]))
            options.extend((ci, ki, si, p) for p in rooms)
        return options

    # Bounds

    def bounds_here(self):
        pending = [j for j, option in enumerate(self.choice) if option is None]
        view = self._node_view()
        return self._bounds(pending, self._feasible_options(pending, view))

    def _bounds(self, pending, feasible):
        usable = {}
        for j in pending:
            if self.scheduling:
                usable[j] = feasible[j].any(axis=(1, 2))
            else:
                usable[j] = np.ones(len(self.candidates[j]), dtype=bool)
            if not usable[j].any():
                return None

        bounds = {}
        for objective in self.objectives:
            if objective == Objective.Z1:
                bounds[objective] = self._workload_bound(pending)
            elif objective == Objective.Z2:
                bounds[objective] = self.suitability_total + sum(
                    int(self.suit[j][usable[j]].max()) for j in pending)
            elif objective == Objective.Z3:
                bounds[objective] = -(self.penalty_total + sum(
                    int(self.penalty[j][feasible[j]].min()) for j in pending))
            elif objective == Objective.Z4:
                bounds[objective] = self._days_bound(pending)
            else:
                bounds[objective] = self.common_total + sum(
                    int(self.common[j][usable[j]].max()) for j in pending)
        return bounds

    def _workload_bound(self, pending):
        """Forced members take their roles; the other roles go to the least loaded members."""
        loads = [int(n) for n in self.loads]
        free_roles = 0
        for j in pending:
            for i in self.forced[j]:
                loads[i] += 1
            free_roles += self.instance.n_roles - len(self.forced[j])
        heapq.heapify(loads)
        for _ in range(free_roles):
            heapq.heapreplace(loads, loads[0] + 1)
        return -sum(n * n for n in loads)

    def _days_bound(self, pending):
        days = (self.member_days > 0).sum(axis=1)
        for j in pending:
            for i in self.forced[j]:
                days[i] = max(days[i], 1)
        return -int((days ** 2).sum())
