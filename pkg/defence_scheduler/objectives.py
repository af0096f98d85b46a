"""The five objective functions, each returning an int in maximisation form.

Auxiliary counters of the mathematical model (member loads, member days, common slots) only
exist as local tallies in here.
"""
import collections

from .model import CommitteeConfig, FullSolution, Objective


def eval_z1_workload(instance, config):
    """-sum over members of (number of committee assignments)^2."""
    loads = collections.Counter(i for i, _, _ in config.assignments())
    return -sum(n * n for n in loads.values())


def eval_z2_suitability(instance, config):
    """Number of (member, defence) expertise matches, preassigned roles included."""
    return int(sum(instance.suitability[i, j] for i, j, _ in config.assignments()))


def eval_z3_preferences(instance, solution):
    """-sum of penalties over every slot each committee member occupies."""
    total = 0
    for j, committee in enumerate(solution.config.assignment):
        k, ell, _ = solution.schedule.starts[j]
        for i in committee:
            total += int(instance.penalty_grid[i, k, ell:ell + instance.duration].sum())
    return -total


def eval_z4_days(instance, solution):
    """-sum over members of (distinct days with at least one defence)^2."""
    days = collections.defaultdict(set)
    for j, committee in enumerate(solution.config.assignment):
        k = solution.schedule.starts[j][0]
        for i in committee:
            days[i].add(k)
    return -sum(len(d) ** 2 for d in days.values())


def eval_z5_proxy(instance, config):
    """Number of (defence, single slot) pairs where the whole committee is available."""
    return int(sum(
        instance.common_slots(committee).sum() for committee in config.assignment
    ))


_CONFIG_EVALUATORS = {
    Objective.Z1: eval_z1_workload,
    Objective.Z2: eval_z2_suitability,
    Objective.Z5: eval_z5_proxy,
}
_SOLUTION_EVALUATORS = {
    Objective.Z3: eval_z3_preferences,
    Objective.Z4: eval_z4_days,
}


def evaluate(instance, solution, objectives):
    """Evaluate `objectives` in order.

    Parameters
    ----------
    instance: Instance
    solution: FullSolution or CommitteeConfig
        A bare CommitteeConfig can only be evaluated on Z1, Z2 and Z5.
    objectives: sequence of Objective

    Returns
    -------
    A tuple of ints, one per objective.
    """
    if isinstance(solution, FullSolution):
        config = solution.config
    elif isinstance(solution, CommitteeConfig):
        config = solution
    else:
        raise TypeError(f"Cannot evaluate {type(solution).__name__}")

    values = []
    for objective in objectives:
        if objective in _CONFIG_EVALUATORS:
            values.append(_CONFIG_EVALUATORS[objective](instance, config))
        elif isinstance(solution, FullSolution):
            values.append(_SOLUTION_EVALUATORS[objective](instance, solution))
        else:
            raise ValueError(f"{objective.name} needs a schedule, got a committee config")
    return tuple(values)


def coarse_bounds(instance, objective):
    """Analytic (lower, upper) bounds used to size the initialisation constant M."""
    n_i, n_j, n_t = instance.n_members, instance.n_defences, instance.n_roles
    if objective == Objective.Z1:
        return -n_i * n_j * n_j, 0
    if objective == Objective.Z2:
        return 0, n_j * n_t * instance.n_subjects
    if objective == Objective.Z3:
        return -sum(instance.penalties.values()) * instance.duration, 0
    if objective == Objective.Z4:
        return -n_i * instance.n_days ** 2, 0
    if objective == Objective.Z5:
        return 0, n_j * instance.n_days * instance.n_slots
    raise ValueError(f"Unknown objective {objective!r}")


def _largest_square_sum(caps, total):
    """Max of sum(x^2) over 0 <= x_i <= caps[i] with sum(x) <= total: fill the largest first."""
    squares = 0
    for cap in sorted(caps, reverse=True):
        take = min(cap, total)
        squares += take * take
        total -= take
        if total <= 0:
            break
    return squares


def lower_bound(instance, objective):
    """A value no feasible solution falls below, tighter than coarse_bounds.

    The ε lattice starts here, so every Pareto point lies on it.
    """
    n_j, n_t = instance.n_defences, instance.n_roles
    # Loads and day counts sum to at most one seat per (defence, role)
    seats = n_j * n_t
    defences = [len({j for j, _ in roles}) for roles in instance.member_roles]
    if objective == Objective.Z1:
        return -_largest_square_sum(defences, seats)
    if objective == Objective.Z2:
        return int(sum(
            min(instance.suitability[i, j] for i in members)
            for j, defence in enumerate(instance.eligibility) for members in defence
        ))
    if objective == Objective.Z3:
        worst = [
            int(instance.window_penalty[i][instance.window_availability[i]].max(initial=0))
            for i in range(instance.n_members)
        ]
        return -sum(
            max(worst[i] for i in members)
            for defence in instance.eligibility for members in defence
        )
    if objective == Objective.Z4:
        return -_largest_square_sum([min(instance.n_days, n) for n in defences], seats)
    if objective == Objective.Z5:
        # Each committee shares at least one whole window
        return n_j * instance.duration
    raise ValueError(f"Unknown objective {objective!r}")
