import csv
import statistics
from dataclasses import asdict, dataclass, fields
from typing import Optional

from .hypervolume import normalised_hypervolume
from .pareto import dominates

TIMING_FIELDS = ("init_seconds", "stage1_seconds", "stage2_seconds", "total_seconds")


@dataclass
class ComparisonRow:
    method: str
    seed: Optional[int] = None
    mutation_percent: Optional[int] = None
    # "1", "all" or "" when not applicable
    fronts_kept: str = ""
    n_configs: int = 0
    n_solutions: int = 0
    n0: int = 0
    n0_vs_baseline: Optional[int] = None
    hypervolume: float = 0.0
    seed_hypervolume: float = 0.0
    non_optimal: int = 0
    init_seconds: float = 0.0
    stage1_seconds: float = 0.0
    stage2_seconds: float = 0.0
    total_seconds: float = 0.0


def compare_fronts(front, baseline, z_min, z_max):
    """Quality figures of one front, optionally measured against a baseline front.

    Parameters
    ----------
    front, baseline: FrontArchive (baseline may be None)
    z_min, z_max: sequences in the objective order of `front`

    Returns
    -------
    dict with the normalised hypervolume, |N0| and the number of front points no baseline
    point dominates (None without a baseline).
    """
    vectors = front.vectors()
    n0_vs_baseline = None
    if baseline is not None:
        others = baseline.vectors()
        n0_vs_baseline = sum(1 for v in vectors if not any(dominates(b, v) for b in others))
    return {
        "hypervolume": normalised_hypervolume(vectors, z_min, z_max),
        "n0": len(vectors),
        "n0_vs_baseline": n0_vs_baseline,
    }


class ComparisonReport:
    """Rows of method results, one per run, in the order they were added."""

    def __init__(self, rows=()):
        self._rows = list(rows)

    def add(self, row):
        self._rows.append(row)

    def __iter__(self):
        return iter(self._rows)

    def __len__(self):
        return len(self._rows)

    def mean_row(self, method=None):
        """Arithmetic mean of every numeric column over the rows (of one method)."""
        rows = [r for r in self._rows if method is None or r.method == method]
        if not rows:
            raise ValueError("No rows to average")
        mean = ComparisonRow(method=rows[0].method, mutation_percent=rows[0].mutation_percent,
                             fronts_kept=rows[0].fronts_kept)
        for name in ("n_configs", "n_solutions", "n0", "hypervolume", "seed_hypervolume",
                     "non_optimal") + TIMING_FIELDS:
            setattr(mean, name, statistics.mean(getattr(r, name) for r in rows))
        if all(r.n0_vs_baseline is not None for r in rows):
            mean.n0_vs_baseline = statistics.mean(r.n0_vs_baseline for r in rows)
        return mean

    def columns(self, timings=False):
        return [f.name for f in fields(ComparisonRow)
                if timings or f.name not in TIMING_FIELDS]

    def to_csv(self, path, timings=False):
        """Write the report. Timing columns are left out unless asked for so that reruns of
        the same seeds give identical files."""
        columns = self.columns(timings)
        with open(path, "w", newline="") as stream:
            writer = csv.DictWriter(stream, fieldnames=columns, extrasaction="ignore")
            writer.writeheader()
            for row in self._rows:
                writer.writerow({k: _cell(v) for k, v in asdict(row).items()})

    def format_table(self):
        columns = self.columns(timings=True)
        lines = ["\t".join(columns)]
        for row in self._rows:
            values = asdict(row)
            lines.append("\t".join(_cell(values[c]) for c in columns))
        return "\n".join(lines)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)
