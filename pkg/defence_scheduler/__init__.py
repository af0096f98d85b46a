from .epsilon import EpsilonGrid, GridPolicy, augmented_epsilon_constraint, initialisation_phase
from .errors import (DefenceSchedulerError, InfeasibleInstance, InstanceError,
                     InstanceFormatError, MalformedSolution, ParameterError,
                     UnsatisfiableDefence)
from .feasibility import check_config, check_feasible
from .instance_io import load_front, load_instance, save_front, save_instance
from .model import CommitteeConfig, FullSolution, Instance, Objective, Schedule
from .nsga import GaParams, nsga2, nsga3
from .objectives import evaluate
from .oracle import oracle_front
from .pareto import FrontArchive, dominates, merge_nondominated
from .pipeline import Method, RunConfig, run_method, sweep
from .search import ProblemKind, SolveRequest, SolveStatus, optimise


__all__ = (
    "CommitteeConfig",
    "DefenceSchedulerError",
    "EpsilonGrid",
    "FrontArchive",
    "FullSolution",
    "GaParams",
    "GridPolicy",
    "InfeasibleInstance",
    "Instance",
    "InstanceError",
    "InstanceFormatError",
    "MalformedSolution",
    "Method",
    "Objective",
    "ParameterError",
    "ProblemKind",
    "RunConfig",
    "Schedule",
    "SolveRequest",
    "SolveStatus",
    "UnsatisfiableDefence",

    "augmented_epsilon_constraint",
    "check_config",
    "check_feasible",
    "dominates",
    "evaluate",
    "initialisation_phase",
    "load_front",
    "load_instance",
    "merge_nondominated",
    "nsga2",
    "nsga3",
    "optimise",
    "oracle_front",
    "run_method",
    "save_front",
    "save_instance",
    "sweep",
)
