import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from .epsilon import augmented_epsilon_constraint, initialisation_phase
from .nsga import nsga2, nsga3, spawn_streams
from .objectives import evaluate
from .operators import non_uniform_crossover
from .pareto import FrontArchive, merge_nondominated
from .search import ProblemKind

logger = logging.getLogger(__name__)


class RunContext:
    """Everything one pipeline run reads and produces, passed from stage to stage."""

    def __init__(self, instance, cfg, seed=0, init=None, stage1_init=None):
        self.instance = instance
        self.cfg = cfg
        self.seed = seed
        # Initialisation over the reported objectives, and over the stage-1 objectives
        self.init = init
        self.stage1_init = stage1_init
        self.ga_result = None
        self.partial = []
        self.runs = []
        self.front = None
        self.timings = {}
        self.summaries = {}

    def record_stage(self, name, seconds, summary):
        self.timings[name] = self.timings.get(name, 0.0) + seconds
        self.summaries[name] = summary

    def seconds(self, *names):
        return sum(self.timings.get(name, 0.0) for name in names)

    def init_configs(self):
        """Distinct committee compositions of the initialisation-phase solutions, in order."""
        if self.init is None:
            return []
        return list(dict.fromkeys(seed.config for seed in self.init.seeds))


class PipelineStage:
    """One step of a method run.

    A stage does its work on the RunContext and hands back the stage that follows it, so a
    method is just a chain of stages and each stage can be tested on a hand-built context.
    """

    def next_stage(self, context):
        """Run this stage.

        Returns
        -------
        A tuple of (PipelineStage, dict): the next stage and a short summary of what this
            stage produced, kept on the context for the report.
        """
        raise NotImplementedError("Abstract method not implemented")

    def stage_name(self):
        raise NotImplementedError("Abstract method not implemented")

    def is_terminal_stage(self):
        return False


class Initialise(PipelineStage):

    def __init__(self, next_stage, stage1=True):
        self._next_stage = next_stage
        self._stage1 = stage1

    def stage_name(self):
        return "initialise"

    def next_stage(self, context):
        """Compute the ranges of the reported objectives and, for decompositions, the stage-1
        seeds. Results already on the context (from an earlier seed of a sweep) are reused.
        """
        cfg = context.cfg
        if context.init is None:
            context.init = initialisation_phase(
                context.instance, cfg.objectives, ProblemKind.MONOLITHIC, cfg.time_limit)
        if self._stage1 and context.stage1_init is None:
            context.stage1_init = initialisation_phase(
                context.instance, cfg.stage1_objectives(), ProblemKind.STAGE1, cfg.time_limit)
        return self._next_stage, {"z_min": dict(context.init.z_min),
                                  "z_max": dict(context.init.z_max)}


class SolveMonolithic(PipelineStage):

    def __init__(self, next_stage):
        self._next_stage = next_stage

    def stage_name(self):
        return "solve"

    def next_stage(self, context):
        cfg = context.cfg
        primary = cfg.monolithic_primary()
        bounded = [o for o in cfg.objectives if o != primary]
        grid = context.init.grid(bounded, cfg.grid)
        run = augmented_epsilon_constraint(
            context.instance, ProblemKind.MONOLITHIC, grid, primary, cfg.time_limit,
            objectives=cfg.objectives, skip=cfg.skip)
        context.runs = [run]
        context.front = run.front
        return self._next_stage, {"solves": run.solve_count, "skips": run.skip_count,
                                  "solve_seconds": run.ledger.solve_seconds()}


class EvolveCommittees(PipelineStage):

    def __init__(self, algorithm, next_stage, adapted=False):
        if algorithm not in ("nsga2", "nsga3"):
            raise ValueError(f"Unknown algorithm {algorithm!r}")
        self._algorithm = algorithm
        self._next_stage = next_stage
        self._adapted = adapted

    def stage_name(self):
        return "evolve"

    def next_stage(self, context):
        """Run the genetic algorithm over committee configurations.

        The committee compositions of the initialisation-phase solutions and the stage-1
        seeds go into the initial population. With `adapted` the whole initial population is
        built by crossing the initialisation compositions pairwise, and every generation is
        kept.
        """
        cfg = context.cfg
        params = replace(cfg.ga, master_seed=context.seed)
        if self._adapted:
            rng = spawn_streams(context.seed)["relink"]
            seeds = adapted_initialisation(
                context.init_configs(), cfg.crossover_probabilities, cfg.crossover_repeats, rng)
            size = max(4, len(seeds) + len(seeds) % 2)
            params = replace(params, population_size=size, keep_all_generations=True)
        else:
            seeds = list(dict.fromkeys(context.init_configs() + list(context.stage1_init.seeds)))

        objectives = cfg.stage1_objectives()
        if self._algorithm == "nsga2":
            result = nsga2(context.instance, params, seeds, objectives=objectives)
        else:
            result = nsga3(context.instance, params, seeds, objectives=objectives)
        context.ga_result = result
        return self._next_stage, {"population": len(result.population),
                                  "generations": params.generations}


class SelectPartialSolutions(PipelineStage):

    def __init__(self, next_stage):
        self._next_stage = next_stage

    def stage_name(self):
        return "select"

    def next_stage(self, context):
        """Keep the configurations in the first `fronts_kept` fronts, each one once, followed by
        the initialisation compositions. Stage-1 objectives are blind to schedulability; every
        initialisation composition has a feasible schedule.
        """
        candidates = context.ga_result.partial_solutions()
        archive = FrontArchive.build(
            context.ga_result.objectives,
            [(vector, n) for n, (_, vector) in enumerate(candidates)],
        )
        kept = []
        seen = set()
        for _, n in sorted(archive.first_fronts(context.cfg.ga.fronts_kept),
                           key=lambda entry: entry[1]):
            config = candidates[n][0]
            if config not in seen:
                seen.add(config)
                kept.append(config)
        for config in context.init_configs():
            if config not in seen:
                seen.add(config)
                kept.append(config)
        context.partial = kept
        return self._next_stage, {"candidates": len(candidates), "kept": len(kept)}


class ScheduleCommittees(PipelineStage):

    def __init__(self, next_stage):
        self._next_stage = next_stage

    def stage_name(self):
        return "schedule"

    def next_stage(self, context):
        """Run a stage-2 ε-constraint for every kept configuration."""
        cfg = context.cfg
        objectives = cfg.stage2_objectives()
        primary, bounded = objectives[0], objectives[1:]
        grid = context.init.grid(bounded, cfg.stage2_grid)
        jobs = [(context.instance, config, objectives, primary, grid, cfg.time_limit, cfg.skip)
                for config in context.partial]
        if cfg.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                runs = list(pool.map(_schedule_job, jobs))
        else:
            runs = [_schedule_job(job) for job in jobs]

        for n, run in enumerate(runs):
            if not len(run.front):
                logger.warning("Configuration %d has no feasible schedule", n)
        context.runs = runs
        return self._next_stage, {"configs": len(runs),
                                  "solves": sum(run.solve_count for run in runs),
                                  "solve_seconds": sum(run.ledger.solve_seconds() for run in runs)}


class MergeFronts(PipelineStage):

    def __init__(self, next_stage):
        self._next_stage = next_stage

    def stage_name(self):
        return "merge"

    def next_stage(self, context):
        """Extend every stage-2 solution to the reported objectives and merge all fronts.

        Payload ids become (configuration index, stage-2 result index).
        """
        objectives = context.cfg.objectives
        archives = []
        for c, run in enumerate(context.runs):
            entries, payloads = [], {}
            for _, pid in run.front.entries:
                solution = run.front.payloads[pid]
                entries.append((evaluate(context.instance, solution, objectives), (c, pid)))
                payloads[(c, pid)] = solution
            archives.append(FrontArchive.build(objectives, entries, payloads))
        if archives:
            context.front = merge_nondominated(*archives)
        else:
            context.front = FrontArchive.build(objectives, [])
        return self._next_stage, {"front": len(context.front)}


class Done(PipelineStage):

    def stage_name(self):
        return "done"

    def is_terminal_stage(self):
        return True

    def next_stage(self, context):
        raise RuntimeError("Done is a terminal pipeline stage")


def run_stages(stage, context, clock=time.monotonic):
    """Drive a chain of stages to the terminal one, timing each on the context."""
    start = clock()
    logger.info("T=0.00, Stage=%s", stage.stage_name())
    while not stage.is_terminal_stage():
        name = stage.stage_name()
        began = clock()
        next_stage, summary = stage.next_stage(context)
        context.record_stage(name, clock() - began, summary)
        if next_stage is not stage:
            logger.info("T=%.2f, Stage=%s", clock() - start, next_stage.stage_name())
        stage = next_stage
    return context


def adapted_initialisation(seeds, probabilities, repeats, rng):
    """Seeds followed by non-uniform crossovers of every seed pair.

    For each pair (i < j), each probability v and each of `repeats` repetitions one offspring
    takes each committee from seed i with probability v.
    """
    seeds = list(seeds)
    population = list(seeds)
    for i in range(len(seeds)):
        for j in range(i + 1, len(seeds)):
            for v in probabilities:
                for _ in range(repeats):
                    population.append(non_uniform_crossover(seeds[i], seeds[j], v, rng))
    return population


def schedule_config(instance, config, objectives, primary, grid, time_limit, skip=True):
    """Stage-2 ε-constraint for one fixed committee configuration."""
    return augmented_epsilon_constraint(
        instance, ProblemKind.STAGE2, grid, primary, time_limit,
        objectives=objectives, config=config, skip=skip)


def _schedule_job(job):
    return schedule_config(*job)


def monolithic_stages():
    return Initialise(stage1=False, next_stage=SolveMonolithic(next_stage=Done()))


def decomposition_stages(algorithm, adapted=False):
    return Initialise(
        next_stage=EvolveCommittees(
            algorithm=algorithm,
            adapted=adapted,
            next_stage=SelectPartialSolutions(
                next_stage=ScheduleCommittees(
                    next_stage=MergeFronts(next_stage=Done())
                )
            )
        )
    )

