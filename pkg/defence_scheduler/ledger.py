import collections
import csv
import datetime

MinMax = collections.namedtuple('MinMax', ['min', 'max'])

Iteration = collections.namedtuple(
    'Iteration', ['timestamp', 'epsilon', 'status', 'seconds', 'values', 'skipped'])


class IterationLedger:
    """Records every lattice point an ε-constraint run visits.

    Each record keeps the ε vector, the solver status, the solve time and the objective vector
    that came back, so a run can be audited (and its timings reported) after the fact.
    """

    def __init__(self, objectives, bounded):
        self.objectives = tuple(objectives)
        self.bounded = tuple(bounded)
        # Each record is an Iteration whose timestamp is a datetime in UTC
        self._iterations = []

    def record_iteration(self, epsilon, status, seconds, values):
        self._iterations.append(Iteration(
            datetime.datetime.now(datetime.timezone.utc), tuple(epsilon), status, seconds,
            tuple(values) if values is not None else None, False))

    def record_skip(self, epsilon):
        self._iterations.append(Iteration(
            datetime.datetime.now(datetime.timezone.utc), tuple(epsilon), None, 0.0, None, True))

    def __len__(self):
        return len(self._iterations)

    def __iter__(self):
        return iter(self._iterations)

    def solves(self):
        return [it for it in self._iterations if not it.skipped]

    def filter_by_status(self, status):
        """A new ledger holding only the solved iterations with the given status name(s)."""
        if isinstance(status, str):
            status = [status]
        filtered = IterationLedger(self.objectives, self.bounded)
        filtered._iterations = [
            it for it in self._iterations
            if not it.skipped and it.status.name in status
        ]
        return filtered

    def solve_seconds(self):
        return sum(it.seconds for it in self.solves())

    def to_csv(self, path):
        """Write one row per iteration. Timestamps are left out so reruns are identical."""
        with open(path, "w", newline="") as stream:
            writer = csv.writer(stream)
            writer.writerow(
                [f"eps_{o.name}" for o in self.bounded]
                + ["status", "seconds"]
                + [o.name for o in self.objectives])
            for it in self._iterations:
                status = "SKIPPED" if it.skipped else it.status.name
                values = list(it.values) if it.values is not None else [""] * len(self.objectives)
                writer.writerow(list(it.epsilon) + [status, f"{it.seconds:.3f}"] + values)
