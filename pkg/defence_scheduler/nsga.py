import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ParameterError
from .model import STAGE1_OBJECTIVES
from .objectives import evaluate
from .operators import crossover, initialise_population, mutate
from .pareto import sort_fronts
from .selection import default_reference_points, elite2, elite3, tournament

logger = logging.getLogger(__name__)

DEFAULT_POPULATION_SIZE = 200
DEFAULT_GENERATIONS = 100
DEFAULT_MUTATION_PERCENT = 5
DEFAULT_TOURNAMENT_ROUNDS = 2
DEFAULT_REFERENCE_DIVISIONS = 12

STREAMS = ("init", "selection", "variation", "relink")


def spawn_streams(master_seed):
    """One independent generator per purpose, all derived from the master seed."""
    children = np.random.SeedSequence(master_seed).spawn(len(STREAMS))
    return {name: np.random.default_rng(seq) for name, seq in zip(STREAMS, children)}


@dataclass(frozen=True)
class GaParams:
    population_size: int = DEFAULT_POPULATION_SIZE
    generations: int = DEFAULT_GENERATIONS
    mutation_percent: int = DEFAULT_MUTATION_PERCENT
    # Number of fronts passed on to the second stage; None keeps every front
    fronts_kept: Optional[int] = 1
    tournament_rounds: int = DEFAULT_TOURNAMENT_ROUNDS
    reference_points: Optional[tuple] = None
    reference_divisions: int = DEFAULT_REFERENCE_DIVISIONS
    master_seed: int = 0
    keep_all_generations: bool = False

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ParameterError(
                f"population_size must be even and at least 4, got {self.population_size}")
        if self.generations < 0:
            raise ParameterError("generations must be non-negative")
        if not 0 <= self.mutation_percent <= 100:
            raise ParameterError("mutation_percent must be between 0 and 100")
        if self.fronts_kept is not None and self.fronts_kept < 1:
            raise ParameterError("fronts_kept must be positive (or None for all fronts)")
        if self.tournament_rounds < 1:
            raise ParameterError("tournament_rounds must be at least 1")
        if self.reference_divisions < 1:
            raise ParameterError("reference_divisions must be at least 1")


@dataclass
class GaResult:
    population: list
    vectors: list
    objectives: tuple
    all_generations: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    def partial_solutions(self):
        """Configurations handed to the second stage, with their objective vectors."""
        return self.all_generations if self.all_generations else list(
            zip(self.population, self.vectors))


def nsga2(instance, params, seeds=(), objectives=STAGE1_OBJECTIVES):
    def select(points, n_s, rng):
        return elite2(points, n_s)
    return _evolve(instance, params, seeds, objectives, select)


def nsga3(instance, params, seeds=(), z_ref=None, objectives=STAGE1_OBJECTIVES):
    if z_ref is None:
        z_ref = params.reference_points
    if z_ref is None:
        z_ref = default_reference_points(len(objectives), params.reference_divisions)
    if len(z_ref) == 0:
        raise ParameterError("NSGA-III needs at least one reference point")

    def select(points, n_s, rng):
        return elite3(points, n_s, z_ref, rng)
    return _evolve(instance, params, seeds, objectives, select)


def _evolve(instance, params, seeds, objectives, select_elite):
    streams = spawn_streams(params.master_seed)
    n_s = params.population_size
    cache = {}

    def fitness(population):
        for config in population:
            if config not in cache:
                cache[config] = evaluate(instance, config, objectives)
        return [cache[config] for config in population]

    population = initialise_population(instance, n_s, seeds, streams["init"])
    vectors = fitness(population)
    trace = [_trace_record(0, vectors, objectives)]
    history = {}
    if params.keep_all_generations:
        history.update((c, v) for c, v in zip(population, vectors))

    for generation in range(1, params.generations + 1):
        elite_idx = select_elite(vectors, n_s, streams["selection"])
        elite = [population[i] for i in elite_idx]
        elite_vectors = [vectors[i] for i in elite_idx]
        ranks = sort_fronts(elite_vectors)
        pool_idx = tournament(elite_vectors, ranks, params.tournament_rounds,
                              streams["selection"])
        pool = [elite[i] for i in pool_idx]

        offspring = list(elite)
        variation = streams["variation"]
        while len(offspring) < n_s:
            p1 = pool[int(variation.integers(len(pool)))]
            p2 = pool[int(variation.integers(len(pool)))]
            child = crossover(p1, p2, variation)
            offspring.append(mutate(child, params.mutation_percent, instance, variation))

        population = offspring
        vectors = fitness(population)
        trace.append(_trace_record(generation, vectors, objectives))
        if params.keep_all_generations:
            for config, vector in zip(population, vectors):
                history.setdefault(config, vector)
        logger.debug("generation %d: %s", generation, trace[-1]["best"])

    return GaResult(
        population=population,
        vectors=vectors,
        objectives=tuple(objectives),
        all_generations=list(history.items()),
        trace=trace,
    )


def _trace_record(generation, vectors, objectives):
    array = np.asarray(vectors, dtype=float)
    return {
        "generation": generation,
        "best": {o.name: int(array[:, n].max()) for n, o in enumerate(objectives)},
        "median": {o.name: float(np.median(array[:, n])) for n, o in enumerate(objectives)},
    }


def write_trace(trace, path):
    with open(path, "w") as stream:
        for record in trace:
            stream.write(json.dumps(record, sort_keys=True) + "\n")
