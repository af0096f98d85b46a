import collections

from .errors import MalformedSolution

Violation = collections.namedtuple("Violation", ["kind", "defence", "detail"])


def check_feasible(instance, solution):
    """Check a full solution against every hard constraint.

    Parameters
    ----------
    instance: Instance
    solution: FullSolution

    Returns
    -------
    A list of Violation tuples. The list is empty when the solution is feasible.

    Raises
    ------
    MalformedSolution if the solution refers to ids outside the instance.
    """
    check_shape(instance, solution.config, solution.schedule)

    report = []
    for check in SOLUTION_CHECKS:
        report.extend(check(instance, solution.config, solution.schedule).violations())
    return report


def check_config(instance, config):
    """Check a committee configuration on its own (the stage-1 partial solution).

    A configuration is feasible when every committee is eligible, has no repeated member and
    shares at least one full window in which all its members are available.
    """
    check_shape(instance, config)

    report = []
    for check in CONFIG_CHECKS:
        report.extend(check(instance, config, None).violations())
    return report


def config_is_feasible(instance, config):
    return not check_config(instance, config)


def check_shape(instance, config, schedule=None):
    if len(config.assignment) != instance.n_defences:
        raise MalformedSolution(
            f"config has {len(config.assignment)} committees, expected {instance.n_defences}")
    for j, committee in enumerate(config.assignment):
        if len(committee) != instance.n_roles:
            raise MalformedSolution(
                f"committee of defence {j} has {len(committee)} members, "
                f"expected {instance.n_roles}")
        for i in committee:
            if not 0 <= i < instance.n_members:
                raise MalformedSolution(f"defence {j}: member {i} out of range")

    if schedule is None:
        return
    if len(schedule.starts) != instance.n_defences:
        raise MalformedSolution(
            f"schedule has {len(schedule.starts)} starts, expected {instance.n_defences}")
    for j, start in enumerate(schedule.starts):
        if len(start) != 3:
            raise MalformedSolution(f"start of defence {j} must be (day, slot, room)")
        k, ell, p = start
        if not 0 <= k < instance.n_days:
            raise MalformedSolution(f"defence {j}: day {k} out of range")
        if not 0 <= ell < instance.n_slots:
            raise MalformedSolution(f"defence {j}: slot {ell} out of range")
        if not 0 <= p < instance.n_rooms:
            raise MalformedSolution(f"defence {j}: room {p} out of range")


class ConstraintCheck:
    """One family of hard constraints.

    Subclasses look at the instance and (part of) a solution and describe every violation
    they find, so a report lists all problems at once instead of stopping at the first.
    """

    kind = None

    def __init__(self, instance, config, schedule):
        self._instance = instance
        self._config = config
        self._schedule = schedule

    def violations(self):
        raise NotImplementedError("Abstract method not implemented")

    def violation(self, defence, detail):
        return Violation(self.kind, defence, detail)

    def occupied(self, j):
        """(day, slot) pairs defence j occupies, clipped to the day."""
        k, ell, _ = self._schedule.starts[j]
        last = min(ell + self._instance.duration, self._instance.n_slots)
        return [(k, s) for s in range(ell, last)]


class Eligibility(ConstraintCheck):
    kind = "eligibility"

    def violations(self):
        found = []
        for i, j, t in self._config.assignments():
            if i not in self._instance.eligibility[j][t]:
                found.append(self.violation(j, f"member {i} is not eligible for role {t}"))
        return found


class DistinctMembers(ConstraintCheck):
    kind = "duplicate_member"

    def violations(self):
        found = []
        for j, committee in enumerate(self._config.assignment):
            repeated = [i for i, n in collections.Counter(committee).items() if n > 1]
            for i in repeated:
                found.append(self.violation(j, f"member {i} holds more than one role"))
        return found


class CommonWindow(ConstraintCheck):
    kind = "no_common_window"

    def violations(self):
        found = []
        for j, committee in enumerate(self._config.assignment):
            if not self._instance.committee_windows(committee).any():
                found.append(self.violation(
                    j, f"committee {list(committee)} shares no window of "
                       f"{self._instance.duration} slot(s)"))
        return found


class DayOverrun(ConstraintCheck):
    kind = "day_overrun"

    def violations(self):
        found = []
        for j, (k, ell, _) in enumerate(self._schedule.starts):
            if ell + self._instance.duration > self._instance.n_slots:
                found.append(self.violation(j, f"starting at slot {ell} runs past day {k}"))
        return found


class WindowAvailability(ConstraintCheck):
    kind = "availability"

    def violations(self):
        found = []
        for j, committee in enumerate(self._config.assignment):
            occupied = self.occupied(j)
            for i in committee:
                missing = [s for s in occupied if s not in self._instance.availability[i]]
                if missing:
                    found.append(self.violation(j, f"member {i} unavailable at {missing}"))
        return found


class MemberOverlap(ConstraintCheck):
    kind = "member_overlap"

    def violations(self):
        seen = {}
        found = []
        for j, committee in enumerate(self._config.assignment):
            for s in self.occupied(j):
                for i in committee:
                    other = seen.setdefault((i, s), j)
                    if other != j:
                        found.append(self.violation(
                            j, f"member {i} also sits defence {other} at {s}"))
        return found


class RoomOverlap(ConstraintCheck):
    kind = "room_overlap"

    def violations(self):
        seen = {}
        found = []
        for j, (_, _, p) in enumerate(self._schedule.starts):
            for s in self.occupied(j):
                other = seen.setdefault((p, s), j)
                if other != j:
                    found.append(self.violation(
                        j, f"room {p} already holds defence {other} at {s}"))
        return found


CONFIG_CHECKS = (Eligibility, DistinctMembers, CommonWindow)
SOLUTION_CHECKS = (Eligibility, DistinctMembers, DayOverrun, WindowAvailability,
                   MemberOverlap, RoomOverlap)
