"""Method runs: the monolithic ε-constraint baseline, the two-stage decomposition, its
case-study variant, and sweeps of the decomposition over many seeds.
"""
import enum
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

from .committees import validate_instance
from .epsilon import GridPolicy
from .errors import ParameterError
from .hypervolume import normalised_hypervolume
from .model import MONOLITHIC_OBJECTIVES, SCHEDULE_OBJECTIVES, Objective
from .nsga import GaParams
from .report import ComparisonReport, ComparisonRow, compare_fronts
from .search import DEFAULT_TIME_LIMIT
from .stages import (Done, Initialise, RunContext, adapted_initialisation, decomposition_stages,
                     monolithic_stages, run_stages)

logger = logging.getLogger(__name__)

DEFAULT_CROSSOVER_PROBABILITIES = (0.25, 0.5, 0.75)
CASE_STUDY_OBJECTIVES = (Objective.Z1, Objective.Z3, Objective.Z4)
CASE_STUDY_GENERATIONS = 5


class Method(enum.Enum):
    MONOLITHIC_EPS = "mono-eps"
    DECOMP_NSGA2 = "decomp-nsga2"
    DECOMP_NSGA3 = "decomp-nsga3"
    DECOMP_CASESTUDY = "casestudy"

    @property
    def is_decomposition(self):
        return self is not Method.MONOLITHIC_EPS


@dataclass(frozen=True)
class RunConfig:
    method: Method = Method.DECOMP_NSGA2
    ga: GaParams = field(default_factory=GaParams)
    grid: GridPolicy = GridPolicy.UNIT
    stage2_grid: GridPolicy = GridPolicy.UNIT
    seeds: tuple = (0,)
    # Per solve, in seconds
    time_limit: float = DEFAULT_TIME_LIMIT
    # Reported objectives; Z5 is internal to stage 1 and never reported
    objectives: tuple = MONOLITHIC_OBJECTIVES
    # Primary of the monolithic run; the lowest objective id when None
    primary: Optional[Objective] = None
    # Path-relinking initialisation of the case study
    crossover_probabilities: tuple = DEFAULT_CROSSOVER_PROBABILITIES
    crossover_repeats: int = 1
    workers: int = 1
    skip: bool = True

    def __post_init__(self):
        set_ = object.__setattr__
        try:
            set_(self, "method", Method(self.method))
            set_(self, "grid", GridPolicy(self.grid))
            set_(self, "stage2_grid", GridPolicy(self.stage2_grid))
            set_(self, "objectives", tuple(sorted(Objective(o) for o in self.objectives)))
        except ValueError as err:
            raise ParameterError(str(err)) from None
        set_(self, "seeds", tuple(int(s) for s in self.seeds))
        set_(self, "crossover_probabilities", tuple(self.crossover_probabilities))

        if not self.objectives or len(set(self.objectives)) != len(self.objectives):
            raise ParameterError("objectives must be a non-empty set")
        if not set(self.objectives) <= set(MONOLITHIC_OBJECTIVES):
            raise ParameterError("only Z1, Z2, Z3 and Z4 can be reported")
        if self.primary is not None and self.primary not in self.objectives:
            raise ParameterError(f"primary {self.primary} is not a reported objective")
        if self.method.is_decomposition and not self.stage2_objectives():
            raise ParameterError("a decomposition needs Z3 or Z4 among the objectives")
        if not self.seeds:
            raise ParameterError("at least one seed is needed")
        if not self.time_limit > 0:
            raise ParameterError("time_limit must be positive")
        if not all(0 < v < 1 for v in self.crossover_probabilities):
            raise ParameterError("crossover probabilities must lie strictly between 0 and 1")
        if self.crossover_repeats < 1:
            raise ParameterError("crossover_repeats must be at least 1")
        if self.workers < 1:
            raise ParameterError("workers must be at least 1")

    @property
    def fronts_kept(self):
        return self.ga.fronts_kept

    @property
    def keep_all_generations(self):
        return self.ga.keep_all_generations

    def stage1_objectives(self):
        """Reported committee objectives plus the available slots proxy."""
        committee = tuple(o for o in self.objectives if o in (Objective.Z1, Objective.Z2))
        return committee + (Objective.Z5,)

    def stage2_objectives(self):
        """Reported schedule objectives; the first is primary in stage 2."""
        return tuple(o for o in self.objectives if o in SCHEDULE_OBJECTIVES)

    def monolithic_primary(self):
        return self.primary if self.primary is not None else self.objectives[0]


def case_study_config(**overrides):
    """RunConfig shaped like the case study: Z1, Z3 and Z4, five generations, every
    generation kept and an initial population crossed from the seeds."""
    ga = overrides.pop("ga", GaParams(generations=CASE_STUDY_GENERATIONS,
                                      keep_all_generations=True))
    values = dict(method=Method.DECOMP_CASESTUDY, objectives=CASE_STUDY_OBJECTIVES, ga=ga,
                  crossover_repeats=2)
    values.update(overrides)
    return RunConfig(**values)


@dataclass
class MethodResult:
    front: object
    row: ComparisonRow
    context: RunContext


def _stages(method):
    if method is Method.MONOLITHIC_EPS:
        return monolithic_stages()
    if method is Method.DECOMP_NSGA2:
        return decomposition_stages("nsga2")
    if method is Method.DECOMP_NSGA3:
        return decomposition_stages("nsga3")
    return decomposition_stages("nsga2", adapted=True)


def run_method(instance, cfg, seed=None, init=None, stage1_init=None, baseline=None):
    """Run cfg.method once.

    Parameters
    ----------
    seed: int, optional
        Master seed of the genetic algorithm, cfg.seeds[0] by default.
    init, stage1_init: InitReport, optional
        Initialisation results to reuse instead of solving them again.
    baseline: FrontArchive, optional
        Front the N0 comparison column is measured against.
    """
    validate_instance(instance)
    if init is not None and init.objectives != cfg.objectives:
        raise ParameterError("the initialisation was run over different objectives")
    seed = cfg.seeds[0] if seed is None else seed
    context = RunContext(instance, cfg, seed, init, stage1_init)
    logger.info("Running %s with seed %d", cfg.method.value, seed)
    run_stages(_stages(cfg.method), context)
    return MethodResult(context.front, _report_row(context, baseline), context)


def run_monolithic(instance, cfg, baseline=None):
    return run_method(instance, replace(cfg, method=Method.MONOLITHIC_EPS), baseline=baseline)


def run_decomposition(instance, cfg, seed=None, init=None, stage1_init=None, baseline=None):
    if not cfg.method.is_decomposition:
        cfg = replace(cfg, method=Method.DECOMP_NSGA2)
    return run_method(instance, cfg, seed, init, stage1_init, baseline)


def run_case_study(instance, cfg, seed=None, baseline=None):
    return run_method(instance, replace(cfg, method=Method.DECOMP_CASESTUDY), seed,
                      baseline=baseline)


def sweep(instance, cfg, baseline=None):
    """Run cfg.method once per seed in cfg.seeds, sharing one initialisation.

    Returns
    -------
    A ComparisonReport with one row per seed, in seed order; `mean_row()` gives the averages.
    """
    validate_instance(instance)
    shared = RunContext(instance, cfg, cfg.seeds[0])
    run_stages(Initialise(next_stage=Done(), stage1=cfg.method.is_decomposition), shared)

    worker_cfg = replace(cfg, workers=1) if cfg.workers > 1 else cfg
    jobs = [(instance, worker_cfg, seed, shared.init, shared.stage1_init, baseline)
            for seed in cfg.seeds]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_sweep_job, jobs))
    else:
        rows = [_sweep_job(job) for job in jobs]
    return ComparisonReport(rows)


def _sweep_job(job):
    instance, cfg, seed, init, stage1_init, baseline = job
    return run_method(instance, cfg, seed, init, stage1_init, baseline).row


def _report_row(context, baseline):
    cfg = context.cfg
    init = context.init
    # The reference point sits at the lattice floor, which every solution weakly dominates
    z_min = [init.lowest(o) for o in cfg.objectives]
    z_max = [init.z_max[o] for o in cfg.objectives]
    figures = compare_fronts(context.front, baseline, z_min, z_max)

    init_seconds = init.seconds + (context.stage1_init.seconds if context.stage1_init else 0.0)
    stage1_seconds = context.seconds("evolve", "select")
    stage2_seconds = context.seconds("schedule", "merge", "solve")
    decomposition = cfg.method.is_decomposition
    fronts_kept = ""
    if decomposition:
        fronts_kept = "all" if cfg.fronts_kept is None else str(cfg.fronts_kept)
    return ComparisonRow(
        method=cfg.method.value,
        seed=context.seed if decomposition else None,
        mutation_percent=cfg.ga.mutation_percent if decomposition else None,
        fronts_kept=fronts_kept,
        n_configs=len(context.partial),
        n_solutions=sum(len(run.results) for run in context.runs),
        n0=figures["n0"],
        n0_vs_baseline=figures["n0_vs_baseline"],
        hypervolume=figures["hypervolume"],
        seed_hypervolume=normalised_hypervolume(init.seed_vectors, z_min, z_max),
        non_optimal=sum(run.non_optimal for run in context.runs),
        init_seconds=init_seconds,
        stage1_seconds=stage1_seconds,
        stage2_seconds=stage2_seconds,
        total_seconds=init_seconds + stage1_seconds + stage2_seconds,
    )


__all__ = [
    "Method",
    "RunConfig",
    "MethodResult",
    "adapted_initialisation",
    "case_study_config",
    "run_method",
    "run_monolithic",
    "run_decomposition",
    "run_case_study",
    "sweep",
]
