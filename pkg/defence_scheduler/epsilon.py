"""The augmented ε-constraint method and its initialisation phase.

One objective is maximised while every other objective gets an integer lower bound ε. The
bounds walk a lattice from a proven lower bound of each bounded objective up to the largest
value it takes during initialisation; each lattice point is one exact solve. The smallest value
seen during initialisation is not a lower bound on the Pareto set, so the lattice cannot start
there.
"""
import collections
import enum
import itertools
import logging
import math
from dataclasses import dataclass, field

from .errors import DefenceSchedulerError, InfeasibleInstance, ParameterError
from .ledger import IterationLedger, MinMax
from .objectives import coarse_bounds, lower_bound
from .pareto import FrontArchive
from .search import DEFAULT_TIME_LIMIT, ProblemKind, SolveRequest, SolveStatus, optimise

logger = logging.getLogger(__name__)

# A solution the driver has found: the ε it was found at, its values on the bounded
# objectives and whether the solve proved it optimal
Found = collections.namedtuple('Found', ['epsilon', 'bounded', 'optimal'])


class GridPolicy(enum.Enum):
    UNIT = "unit"
    TENTH = "tenth"


@dataclass(frozen=True)
class EpsilonGrid:
    # Bounded objectives in ascending id order; the first one is the outermost loop
    objectives: tuple
    minimum: tuple
    maximum: tuple
    increments: tuple

    def __post_init__(self):
        sizes = {len(self.objectives), len(self.minimum), len(self.maximum),
                 len(self.increments)}
        if len(sizes) != 1:
            raise ParameterError("EpsilonGrid fields must all have one entry per objective")
        for objective, low, high, step in zip(
                self.objectives, self.minimum, self.maximum, self.increments):
            if low > high:
                raise ParameterError(f"{objective.name}: minimum {low} above maximum {high}")
            if step < 1:
                raise ParameterError(f"{objective.name}: increment must be at least 1")

    @classmethod
    def unit(cls, z_min, z_max):
        """ε′ = 1 on every objective of the mappings z_min / z_max."""
        objectives = tuple(sorted(z_min))
        return cls(objectives,
                   tuple(int(z_min[o]) for o in objectives),
                   tuple(int(z_max[o]) for o in objectives),
                   (1,) * len(objectives))

    @classmethod
    def tenth(cls, z_min, z_max):
        """ε′ = (z_max - z_min) / 10, rounded up, so each axis has at most 11 points."""
        objectives = tuple(sorted(z_min))
        return cls(objectives,
                   tuple(int(z_min[o]) for o in objectives),
                   tuple(int(z_max[o]) for o in objectives),
                   tuple(max(1, math.ceil((z_max[o] - z_min[o]) / 10)) for o in objectives))

    @classmethod
    def from_policy(cls, policy, z_min, z_max):
        if GridPolicy(policy) is GridPolicy.UNIT:
            return cls.unit(z_min, z_max)
        return cls.tenth(z_min, z_max)

    def axis(self, n):
        return range(self.minimum[n], self.maximum[n] + 1, self.increments[n])

    def lattice(self):
        """Every ε vector, as nested loops from minimum to maximum."""
        return itertools.product(*(self.axis(n) for n in range(len(self.objectives))))

    def __len__(self):
        return math.prod(len(self.axis(n)) for n in range(len(self.objectives)))

    def ranges(self):
        return {o: MinMax(low, high)
                for o, low, high in zip(self.objectives, self.minimum, self.maximum)}


@dataclass
class InitReport:
    objectives: tuple
    z_min: dict
    z_max: dict
    # One solution per objective, in objective order
    seeds: list
    seed_vectors: list
    big_m: int
    statuses: dict = field(default_factory=dict)
    seconds: float = 0.0
    # Where the ε lattice starts: min(z_min, a proven lower bound over all solutions)
    floor: dict = field(default_factory=dict)

    def lowest(self, objective):
        return min(self.z_min[objective], self.floor.get(objective, self.z_min[objective]))

    def grid(self, bounded, policy=GridPolicy.UNIT):
        return EpsilonGrid.from_policy(
            policy, {o: self.lowest(o) for o in bounded}, {o: self.z_max[o] for o in bounded})


def big_m(instance, objectives):
    """1 + the summed widths of the coarse bounds, so the tie-break term stays below 1."""
    total = 0
    for objective in objectives:
        low, high = coarse_bounds(instance, objective)
        total += high - low
    return 1 + total


def initialisation_phase(instance, objectives, kind=ProblemKind.MONOLITHIC,
                         time_limit=DEFAULT_TIME_LIMIT, config=None):
    """Optimise each objective on its own to find the ranges of the ε lattice and GA seeds.

    Objective i is maximised with (1/M) times the sum of the others as a tie-break. Its
    achieved value is z_max[i]; z_min[i] is the smallest value it took in any of the solves.
    floor[i] lowers z_min[i] to a bound that holds for every feasible solution.

    Raises
    ------
    InfeasibleInstance if the problem has no feasible solution.
    DefenceSchedulerError if no feasible solution was found within the time limit.
    """
    objectives = tuple(objectives)
    m = big_m(instance, objectives)
    seeds, vectors, statuses, seconds = [], [], {}, 0.0
    for objective in objectives:
        request = SolveRequest(kind, objective, objectives, time_limit=time_limit, big_m=m,
                               config=config)
        result = optimise(instance, request)
        seconds += result.seconds
        statuses[objective] = result.status
        if result.status is SolveStatus.INFEASIBLE:
            raise InfeasibleInstance(f"The {kind.name.lower()} problem has no feasible solution")
        if result.status is SolveStatus.UNKNOWN:
            raise DefenceSchedulerError(
                f"No feasible solution for {objective.name} within {time_limit}s")
        if result.status is SolveStatus.FEASIBLE_TIMEOUT:
            logger.warning("Initialisation of %s stopped at the time limit (gap %.4f)",
                           objective.name, result.gap)
        seeds.append(result.solution)
        vectors.append(result.vector)

    z_max = {o: vectors[n][n] for n, o in enumerate(objectives)}
    z_min = {o: min(vector[n] for vector in vectors) for n, o in enumerate(objectives)}
    floor = {o: min(z_min[o], lower_bound(instance, o)) for o in objectives}
    logger.info("Initialisation over %s: z_min=%s z_max=%s floor=%s M=%d",
                [o.name for o in objectives],
                {o.name: v for o, v in z_min.items()}, {o.name: v for o, v in z_max.items()},
                {o.name: v for o, v in floor.items()}, m)
    return InitReport(objectives, z_min, z_max, seeds, vectors, m, statuses, seconds, floor)


def not_skip(epsilon, found, infeasible):
    """Whether the lattice point `epsilon` has to be solved.

    It is skipped when a solution proven optimal at some ε′ ≤ ε already meets every bound of
    ε (the optimum at ε is then the same solution), or when ε is at least as tight as a point
    already proven infeasible.

    The first rule is narrower than "some stored solution meets every bound of ε": a solution
    found under tighter bounds, or one cut off by the time limit, may not be the optimum at ε,
    and skipping on it would lose Pareto points. Only proven optima found at looser or equal
    bounds are trusted.

    Parameters
    ----------
    epsilon: tuple of int
    found: iterable of Found
    infeasible: iterable of ε tuples that were proven infeasible
    """
    for entry in found:
        if (entry.optimal
                and all(a <= e for a, e in zip(entry.epsilon, epsilon))
                and all(v >= e for v, e in zip(entry.bounded, epsilon))):
            return False
    for bar in infeasible:
        if all(e >= b for e, b in zip(epsilon, bar)):
            return False
    return True


@dataclass
class EpsilonRun:
    # Rank-0 archive; payload ids index `results`
    front: FrontArchive
    # (ε, SolveResult) of every solve that returned a solution
    results: list
    ledger: IterationLedger
    solve_count: int
    skip_count: int = 0
    non_optimal: int = 0


def augmented_epsilon_constraint(instance, kind, grid, primary, time_limit=DEFAULT_TIME_LIMIT,
                                 objectives=None, config=None, skip=True):
    """Walk the ε lattice of `grid`, maximising `primary` under each ε.

    Parameters
    ----------
    objectives: sequence of Objective, optional
        The objective vector reported for each solution. Defaults to the primary followed by
        the bounded objectives of the grid, in id order.
    config: CommitteeConfig
        The fixed committees of a STAGE2 run.
    skip: bool
        Disable to solve every lattice point.
    """
    if primary in grid.objectives:
        raise ParameterError(f"{primary.name} is both primary and bounded")
    if objectives is None:
        objectives = tuple(sorted((primary,) + grid.objectives))
    objectives = tuple(objectives)
    ranges = grid.ranges()
    positions = [objectives.index(o) for o in grid.objectives]

    ledger = IterationLedger(objectives, grid.objectives)
    found, infeasible, results = [], [], []
    solves = skips = 0
    for epsilon in grid.lattice():
        if skip and not not_skip(epsilon, found, infeasible):
            ledger.record_skip(epsilon)
            skips += 1
            logger.debug("ε=%s skipped", epsilon)
            continue
        request = SolveRequest(kind, primary, objectives,
                               epsilon_bounds=dict(zip(grid.objectives, epsilon)),
                               time_limit=time_limit, ranges=ranges, config=config)
        result = optimise(instance, request)
        solves += 1
        ledger.record_iteration(epsilon, result.status, result.seconds, result.vector)
        logger.info("ε=%s %s %.2fs %s", epsilon, result.status.name, result.seconds,
                    result.vector)
        if result.status is SolveStatus.INFEASIBLE:
            infeasible.append(epsilon)
        elif result.status.has_solution:
            found.append(Found(epsilon, tuple(result.vector[p] for p in positions),
                               result.status is SolveStatus.OPTIMAL))
            results.append((epsilon, result))

    archive = FrontArchive.build(
        objectives,
        [(result.vector, n) for n, (_, result) in enumerate(results)],
        {n: result.solution for n, (_, result) in enumerate(results)},
    )
    non_optimal = len(ledger.filter_by_status("FEASIBLE_TIMEOUT"))
    if non_optimal:
        logger.warning("%d of %d solves stopped at the time limit", non_optimal, solves)
    return EpsilonRun(archive.nondominated(), results, ledger, solves, skips, non_optimal)
