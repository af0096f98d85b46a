import argparse
import logging
import os
import sys
from dataclasses import replace

from .epsilon import GridPolicy
from .errors import DefenceSchedulerError, InstanceError, ParameterError
from .feasibility import check_feasible
from .generator import PRESETS, generate_instance
from .instance_io import (export_tradeoffs, load_front, load_instance, load_solution,
                          save_front, save_instance)
from .model import MONOLITHIC_OBJECTIVES, Objective
from .nsga import DEFAULT_MUTATION_PERCENT, DEFAULT_POPULATION_SIZE, GaParams, write_trace
from .objectives import evaluate
from .pipeline import (CASE_STUDY_GENERATIONS, CASE_STUDY_OBJECTIVES, Method, RunConfig,
                       run_method, sweep)
from .report import ComparisonReport, ComparisonRow, compare_fronts
from .search import DEFAULT_TIME_LIMIT

LOG_LEVEL_VARIABLE = "DEFENCE_SCHEDULER_LOG_LEVEL"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_FAILURE = 3

# Generator overrides: flag -> GeneratorSpec field
GENERATOR_FLAGS = {
    "members": "n_members",
    "defences": "n_defences",
    "roles": "n_roles",
    "preassigned": "n_preassigned",
    "days": "n_days",
    "slots": "n_slots",
    "rooms": "n_rooms",
    "subjects": "n_subjects",
    "duration": "duration",
    "availability_density": "availability_density",
    "eligibility_density": "eligibility_density",
    "penalty_density": "penalty_density",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="defence_scheduler",
                     description="Multi-objective thesis defence scheduling")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for search details")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    generate = commands.add_parser("generate", help="write a random instance")
    generate.add_argument("--preset", choices=sorted(PRESETS), default="small")
    generate.add_argument("--seed", type=int, default=0)
    for flag, name in GENERATOR_FLAGS.items():
        kind = float if name.endswith("density") else int
        generate.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=kind)
    generate.add_argument("--out", required=True)

    solve = commands.add_parser("solve", help="compute a non-dominated front")
    solve.add_argument("instance")
    solve.add_argument("--method", choices=[m.value for m in Method],
                       default=Method.DECOMP_NSGA2.value)
    solve.add_argument("--objectives", type=_objective_list,
                       help="comma separated, e.g. Z1,Z3,Z4")
    solve.add_argument("--primary", type=Objective.parse)
    solve.add_argument("--grid", choices=[g.value for g in GridPolicy], default="unit")
    solve.add_argument("--stage2-grid", choices=[g.value for g in GridPolicy], default="unit")
    solve.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--seeds-file", help="one integer seed per line; runs a sweep")
    solve.add_argument("--nf", choices=["1", "all"], default="1")
    solve.add_argument("--population", type=int, default=DEFAULT_POPULATION_SIZE)
    solve.add_argument("--generations", type=int)
    solve.add_argument("--mutation", type=int, default=DEFAULT_MUTATION_PERCENT)
    solve.add_argument("--keep-all-generations", action="store_true")
    solve.add_argument("--workers", type=int, default=1)
    solve.add_argument("--no-skip", action="store_true")
    solve.add_argument("--baseline", help="front file to count N0 against")
    solve.add_argument("--out", help="front file (.csv or .json)")
    solve.add_argument("--report", help="comparison report CSV")
    solve.add_argument("--ledger", help="ε iteration ledger CSV")
    solve.add_argument("--trace", help="genetic algorithm trace (JSON lines)")

    evaluate_cmd = commands.add_parser("evaluate", help="check and score a solution")
    evaluate_cmd.add_argument("instance")
    evaluate_cmd.add_argument("solution")

    compare = commands.add_parser("compare", help="compare a front with a baseline front")
    compare.add_argument("front")
    compare.add_argument("baseline")
    compare.add_argument("--out", help="report CSV")

    export = commands.add_parser("export-tradeoffs", help="write per-view CSVs of a front")
    export.add_argument("front")
    export.add_argument("--out", required=True, help="output directory")
    return parser


def _objective_list(text):
    try:
        return tuple(Objective.parse(part) for part in text.split(",") if part.strip())
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def configure_logging(verbose):
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = os.environ.get(LOG_LEVEL_VARIABLE, "WARNING").upper()
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    configure_logging(args.verbose)

    handlers = {
        "generate": cmd_generate,
        "solve": cmd_solve,
        "evaluate": cmd_evaluate,
        "compare": cmd_compare,
        "export-tradeoffs": cmd_export,
    }
    try:
        return handlers[args.command](args)
    except (UsageError, ParameterError) as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    except InstanceError as err:
        print(f"Instance error: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DefenceSchedulerError, OSError) as err:
        print(f"Failed: {err}", file=sys.stderr)
        return EXIT_FAILURE


def cmd_generate(args):
    spec = PRESETS[args.preset].with_seed(args.seed)
    overrides = {name: getattr(args, flag) for flag, name in GENERATOR_FLAGS.items()
                 if getattr(args, flag) is not None}
    if overrides:
        spec = replace(spec, **overrides)
    instance = generate_instance(spec)
    save_instance(instance, args.out)
    print(f"Wrote {args.preset} instance ({instance.n_members} members, "
          f"{instance.n_defences} defences) to {args.out}")
    return EXIT_OK


def run_config_from_args(args):
    """Map solve flags onto a RunConfig."""
    method = Method(args.method)
    casestudy = method is Method.DECOMP_CASESTUDY
    objectives = args.objectives or (CASE_STUDY_OBJECTIVES if casestudy
                                     else MONOLITHIC_OBJECTIVES)
    generations = args.generations
    if generations is None:
        generations = CASE_STUDY_GENERATIONS if casestudy else GaParams().generations
    seeds = (args.seed,)
    if args.seeds_file:
        with open(args.seeds_file) as stream:
            seeds = tuple(int(line) for line in stream if line.strip())
    ga = GaParams(
        population_size=args.population,
        generations=generations,
        mutation_percent=args.mutation,
        fronts_kept=None if args.nf == "all" else 1,
        keep_all_generations=args.keep_all_generations or casestudy,
        master_seed=seeds[0],
    )
    return RunConfig(
        method=method,
        ga=ga,
        grid=GridPolicy(args.grid),
        stage2_grid=GridPolicy(args.stage2_grid),
        seeds=seeds,
        time_limit=args.time_limit,
        objectives=objectives,
        primary=args.primary,
        crossover_repeats=2 if casestudy else 1,
        workers=args.workers,
        skip=not args.no_skip,
    )


def cmd_solve(args):
    instance = load_instance(args.instance)
    cfg = run_config_from_args(args)
    baseline = load_front(args.baseline) if args.baseline else None
    if args.baseline and baseline.objectives != cfg.objectives:
        raise UsageError("the baseline front is over different objectives")

    if len(cfg.seeds) > 1:
        single_run = [flag for flag in ("out", "ledger", "trace") if getattr(args, flag)]
        if single_run:
            raise UsageError(f"--{single_run[0]} needs a single seed; "
                             f"a --seeds-file sweep only writes --report")
        report = sweep(instance, cfg, baseline)
        report.add(report.mean_row())
        print_final_report(report)
        if args.report:
            _write_report(report, args.report)
        return EXIT_OK

    result = run_method(instance, cfg, baseline=baseline)
    report = ComparisonReport([result.row])
    print_final_report(report)
    if args.out:
        save_front(result.front, args.out)
        print(f"Wrote {len(result.front)} solutions to {args.out}")
    if args.report:
        _write_report(report, args.report)
    if args.ledger:
        runs = result.context.runs
        stem, ext = os.path.splitext(args.ledger)
        for n, run in enumerate(runs):
            run.ledger.to_csv(args.ledger if len(runs) == 1 else f"{stem}_{n}{ext}")
    if args.trace and result.context.ga_result is not None:
        write_trace(result.context.ga_result.trace, args.trace)
    return EXIT_OK


def _write_report(report, path):
    report.to_csv(path)
    stem, ext = os.path.splitext(path)
    report.to_csv(f"{stem}.timings{ext or '.csv'}", timings=True)


def cmd_evaluate(args):
    instance = load_instance(args.instance)
    solution = load_solution(args.solution)
    violations = check_feasible(instance, solution)
    vector = evaluate(instance, solution, MONOLITHIC_OBJECTIVES)

    print("\n---------- Evaluation ----------")
    for objective, value in zip(MONOLITHIC_OBJECTIVES, vector):
        print(f"{objective.name} ({objective.label}): {value}")
    for violation in violations:
        print(f"Violation: {violation.kind} (defence {violation.defence}): {violation.detail}")
    if violations:
        print(f"The solution is INFEASIBLE ({len(violations)} violations)")
    else:
        print("The solution is FEASIBLE")
    return EXIT_OK


def cmd_compare(args):
    front = load_front(args.front)
    baseline = load_front(args.baseline)
    if front.objectives != baseline.objectives:
        raise UsageError("the fronts are over different objectives")
    # Without an initialisation, both fronts are normalised by their joint range
    vectors = front.vectors() + baseline.vectors()
    columns = list(zip(*vectors)) if vectors else [(0,)] * len(front.objectives)
    z_min = [min(c) for c in columns]
    z_max = [max(c) for c in columns]

    report = ComparisonReport()
    for name, archive, other in ((args.front, front, baseline), (args.baseline, baseline, None)):
        figures = compare_fronts(archive, other, z_min, z_max)
        report.add(ComparisonRow(method=os.path.basename(name), n_solutions=len(archive),
                                 n0=figures["n0"], n0_vs_baseline=figures["n0_vs_baseline"],
                                 hypervolume=figures["hypervolume"]))
    print_final_report(report)
    if args.out:
        report.to_csv(args.out)
    return EXIT_OK


def cmd_export(args):
    for path in export_tradeoffs(load_front(args.front), args.out):
        print(f"Wrote {path}")
    return EXIT_OK


def print_final_report(report):
    print("\n\n\n---------- Final Report ----------")
    print(report.format_table())
