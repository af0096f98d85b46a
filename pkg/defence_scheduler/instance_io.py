"""Instance, solution and front files.

Instances and solutions are versioned JSON documents; fronts are CSV tables (one row per
solution, with a reference to a solution file) or a single JSON document.
"""
import csv
import itertools
import json
import os

from .errors import InstanceError, InstanceFormatError
from .model import CommitteeConfig, FullSolution, Instance, Objective, Schedule
from .pareto import FrontArchive

INSTANCE_FORMAT = "defence-scheduler-instance"
SOLUTION_FORMAT = "defence-scheduler-solution"
FRONT_FORMAT = "defence-scheduler-front"
VERSION = 1

COUNT_FIELDS = ("n_members", "n_defences", "n_roles", "n_days", "n_slots", "n_rooms",
                "n_subjects", "duration")

# Named projections written by export_tradeoffs
VIEWS = {
    "committee_view": (Objective.Z1, Objective.Z2),
    "schedule_view": (Objective.Z3, Objective.Z4),
}


def _read_json(path, expected_format):
    try:
        with open(path) as stream:
            document = json.load(stream)
    except json.JSONDecodeError as err:
        raise InstanceFormatError(
            f"{path}: line {err.lineno}, column {err.colno}: {err.msg}") from None
    if not isinstance(document, dict):
        raise InstanceFormatError(f"{path}: expected a JSON object at the top level")
    if document.get("format") != expected_format:
        raise InstanceFormatError(
            f"{path}: format: expected {expected_format!r}, got {document.get('format')!r}")
    if document.get("version") != VERSION:
        raise InstanceFormatError(
            f"{path}: version: unsupported version {document.get('version')!r}")
    return document


def _field(document, path, name):
    if name not in document:
        raise InstanceFormatError(f"{path}: {name}: missing field")
    return document[name]


def _integer(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceFormatError(f"{where}: expected an integer, got {value!r}")
    return value


def _int_list(value, where):
    if not isinstance(value, list):
        raise InstanceFormatError(f"{where}: expected a list, got {value!r}")
    return [_integer(v, f"{where}[{n}]") for n, v in enumerate(value)]


def _nested(value, where, depth):
    """Lists nested `depth` deep with integer leaves."""
    if depth == 1:
        return _int_list(value, where)
    if not isinstance(value, list):
        raise InstanceFormatError(f"{where}: expected a list, got {value!r}")
    return [_nested(v, f"{where}[{n}]", depth - 1) for n, v in enumerate(value)]


def load_instance(path):
    """Read and validate an instance file.

    Raises
    ------
    InstanceFormatError naming the field path of the first problem found.
    """
    document = _read_json(path, INSTANCE_FORMAT)
    counts = {name: _integer(_field(document, path, name), f"{path}: {name}")
              for name in COUNT_FIELDS}
    availability = _nested(_field(document, path, "availability"), f"{path}: availability", 3)
    for i, slots in enumerate(availability):
        for n, slot in enumerate(slots):
            if len(slot) != 2:
                raise InstanceFormatError(
                    f"{path}: availability[{i}][{n}]: expected [day, slot], got {slot}")
    penalties = {}
    for n, entry in enumerate(_nested(_field(document, path, "penalties"),
                                      f"{path}: penalties", 2)):
        if len(entry) != 4:
            raise InstanceFormatError(
                f"{path}: penalties[{n}]: expected [member, day, slot, value], got {entry}")
        i, k, ell, value = entry
        penalties[(i, k, ell)] = value

    try:
        return Instance(
            eligibility=_nested(_field(document, path, "eligibility"),
                                f"{path}: eligibility", 3),
            availability=[[tuple(slot) for slot in slots] for slots in availability],
            member_expertise=_nested(_field(document, path, "member_expertise"),
                                     f"{path}: member_expertise", 2),
            defence_subjects=_nested(_field(document, path, "defence_subjects"),
                                     f"{path}: defence_subjects", 2),
            penalties=penalties,
            **counts,
        )
    except InstanceFormatError:
        raise
    except InstanceError as err:
        raise InstanceFormatError(f"{path}: {err}") from None


def instance_document(instance):
    document = {"format": INSTANCE_FORMAT, "version": VERSION}
    for name in COUNT_FIELDS:
        document[name] = getattr(instance, name)
    document["eligibility"] = [[sorted(m) for m in defence] for defence in instance.eligibility]
    document["availability"] = [[list(s) for s in sorted(slots)]
                                for slots in instance.availability]
    document["member_expertise"] = [sorted(q) for q in instance.member_expertise]
    document["defence_subjects"] = [sorted(q) for q in instance.defence_subjects]
    document["penalties"] = [[i, k, ell, value]
                             for (i, k, ell), value in sorted(instance.penalties.items())]
    return document


def save_instance(instance, path):
    with open(path, "w") as stream:
        json.dump(instance_document(instance), stream, indent=1)
        stream.write("\n")


def solution_document(solution):
    return {
        "format": SOLUTION_FORMAT,
        "version": VERSION,
        "committees": [list(c) for c in solution.config.assignment],
        "starts": [list(s) for s in solution.schedule.starts],
    }


def save_solution(solution, path):
    with open(path, "w") as stream:
        json.dump(solution_document(solution), stream, indent=1)
        stream.write("\n")


def _solution_from(document, where):
    committees = _nested(_field(document, where, "committees"), f"{where}: committees", 2)
    starts = _nested(_field(document, where, "starts"), f"{where}: starts", 2)
    for j, start in enumerate(starts):
        if len(start) != 3:
            raise InstanceFormatError(
                f"{where}: starts[{j}]: expected [day, start, room], got {start}")
    if len(starts) != len(committees):
        raise InstanceFormatError(
            f"{where}: starts: {len(starts)} entries for {len(committees)} committees")
    return FullSolution(CommitteeConfig(committees), Schedule(starts))


def load_solution(path):
    return _solution_from(_read_json(path, SOLUTION_FORMAT), path)


def save_front(archive, path):
    """Write a front as CSV (plus one solution file per row) or, for a .json path, as JSON.

    Rows follow the archive's entry order. In the CSV form each row names its solution file,
    kept in a directory next to the CSV; rows without a solution leave the column empty.
    """
    names = [o.name for o in archive.objectives]
    if path.endswith(".json"):
        entries = []
        for vector, pid in archive.entries:
            entry = {"vector": list(vector)}
            if pid in archive.payloads:
                document = solution_document(archive.payloads[pid])
                entry["solution"] = {"committees": document["committees"],
                                     "starts": document["starts"]}
            entries.append(entry)
        with open(path, "w") as stream:
            json.dump({"format": FRONT_FORMAT, "version": VERSION, "objectives": names,
                       "entries": entries}, stream, indent=1)
            stream.write("\n")
        return

    stem = os.path.splitext(path)[0]
    folder = f"{stem}_solutions"
    with open(path, "w", newline="") as stream:
        writer = csv.writer(stream)
        writer.writerow(names + ["solution"])
        for n, (vector, pid) in enumerate(archive.entries):
            reference = ""
            if pid in archive.payloads:
                os.makedirs(folder, exist_ok=True)
                reference = os.path.join(os.path.basename(folder), f"solution_{n}.json")
                save_solution(archive.payloads[pid], os.path.join(folder, f"solution_{n}.json"))
            writer.writerow(list(vector) + [reference])


def load_front(path):
    """Read a front written by save_front. Payload ids are row numbers."""
    if path.endswith(".json"):
        document = _read_json(path, FRONT_FORMAT)
        objectives = _objectives(_field(document, path, "objectives"), path)
        entries, payloads = [], {}
        for n, entry in enumerate(_field(document, path, "entries")):
            where = f"{path}: entries[{n}]"
            entries.append((_int_list(_field(entry, where, "vector"), f"{where}.vector"), n))
            if "solution" in entry:
                payloads[n] = _solution_from(entry["solution"], where)
        return _archive(objectives, entries, payloads, path)

    base = os.path.dirname(path)
    entries, payloads = [], {}
    with open(path, newline="") as stream:
        reader = csv.reader(stream)
        header = next(reader, None)
        if not header or header[-1] != "solution":
            raise InstanceFormatError(f"{path}: line 1: expected objective columns and 'solution'")
        objectives = _objectives(header[:-1], path)
        for n, row in enumerate(reader):
            where = f"{path}: line {n + 2}"
            if len(row) != len(header):
                raise InstanceFormatError(f"{where}: expected {len(header)} columns")
            try:
                vector = [int(v) for v in row[:-1]]
            except ValueError:
                raise InstanceFormatError(f"{where}: objective values must be integers") from None
            entries.append((vector, n))
            if row[-1]:
                payloads[n] = load_solution(os.path.join(base, row[-1]))
    return _archive(objectives, entries, payloads, path)


def _objectives(names, path):
    try:
        return tuple(Objective.parse(name) for name in names)
    except ValueError as err:
        raise InstanceFormatError(f"{path}: objectives: {err}") from None


def _archive(objectives, entries, payloads, path):
    for vector, n in entries:
        if len(vector) != len(objectives):
            raise InstanceFormatError(
                f"{path}: entry {n} has {len(vector)} values for {len(objectives)} objectives")
    return FrontArchive.build(objectives, entries, payloads)


def export_tradeoffs(archive, directory):
    """Write the committee and schedule views and every objective pair of a front as CSV.

    Each file has one row per front solution with its values in that view and whether it is
    non-dominated within the view.

    Returns
    -------
    The list of written paths.
    """
    os.makedirs(directory, exist_ok=True)
    views = {name: objectives for name, objectives in VIEWS.items()
             if set(objectives) <= set(archive.objectives)}
    for a, b in itertools.combinations(archive.objectives, 2):
        views[f"tradeoff_{a.name}_{b.name}"] = (a, b)

    written = []
    for name, objectives in views.items():
        projected = archive.project(objectives)
        path = os.path.join(directory, f"{name}.csv")
        with open(path, "w", newline="") as stream:
            writer = csv.writer(stream)
            writer.writerow([o.name for o in objectives] + ["nondominated"])
            for (vector, _), rank in zip(projected.entries, projected.ranks):
                writer.writerow(list(vector) + [int(rank == 0)])
        written.append(path)
    return written
