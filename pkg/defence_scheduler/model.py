"""Domain types for the single-assignment thesis defence scheduling problem.

Everything here is immutable after construction. Ids are 0-based: member 0 .. n_members-1,
day 0 .. n_days-1 and so on. A time slot is a (day, slot) pair and a defence occupies
`duration` consecutive slots of one day starting at its start slot.
"""
import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InstanceError


class Objective(enum.IntEnum):
    """The five objectives, all stored in maximisation form (minimised ones negated)."""

    Z1 = 1  # workload balance, -sum(load^2)
    Z2 = 2  # committee suitability
    Z3 = 3  # time slot preferences, -sum(penalties)
    Z4 = 4  # committee days, -sum(days^2)
    Z5 = 5  # available time slots (stage-1 proxy)

    @property
    def label(self):
        return _LABELS[self]

    @classmethod
    def parse(cls, text):
        """Accept 'Z3', 'z3' or '3'."""
        text = str(text).strip().upper()
        if text.startswith("Z"):
            text = text[1:]
        try:
            return cls(int(text))
        except ValueError:
            raise ValueError(f"Unknown objective {text!r}") from None


_LABELS = {
    Objective.Z1: "workload",
    Objective.Z2: "suitability",
    Objective.Z3: "preferences",
    Objective.Z4: "days",
    Objective.Z5: "available_slots",
}

MONOLITHIC_OBJECTIVES = (Objective.Z1, Objective.Z2, Objective.Z3, Objective.Z4)
STAGE1_OBJECTIVES = (Objective.Z1, Objective.Z2, Objective.Z5)
STAGE2_OBJECTIVES = (Objective.Z3, Objective.Z4)
COMMITTEE_OBJECTIVES = frozenset((Objective.Z1, Objective.Z2, Objective.Z5))
SCHEDULE_OBJECTIVES = frozenset((Objective.Z3, Objective.Z4))


@dataclass(frozen=True)
class Instance:
    n_members: int
    n_defences: int
    n_roles: int
    n_days: int
    n_slots: int
    n_rooms: int
    n_subjects: int
    duration: int
    # eligibility[j][t] -> frozenset of members eligible for role t of defence j
    eligibility: tuple
    # availability[i] -> frozenset of (day, slot) pairs
    availability: tuple
    member_expertise: tuple
    defence_subjects: tuple
    # Sparse: (member, day, slot) -> positive penalty. Missing entries are 0.
    penalties: dict = field(default_factory=dict)

    def __post_init__(self):
        # Normalise containers so instances built from lists compare equal to loaded ones
        set_ = object.__setattr__
        set_(self, "eligibility", tuple(
            tuple(frozenset(int(i) for i in roles) for roles in defence)
            for defence in self.eligibility
        ))
        set_(self, "availability", tuple(
            frozenset((int(k), int(ell)) for k, ell in slots) for slots in self.availability
        ))
        set_(self, "member_expertise", tuple(frozenset(map(int, q)) for q in self.member_expertise))
        set_(self, "defence_subjects", tuple(frozenset(map(int, q)) for q in self.defence_subjects))
        set_(self, "penalties", {
            (int(i), int(k), int(ell)): int(value)
            for (i, k, ell), value in dict(self.penalties).items()
            if int(value) != 0
        })
        self._validate()

    def _validate(self):
        counts = {
            "n_members": self.n_members,
            "n_defences": self.n_defences,
            "n_roles": self.n_roles,
            "n_days": self.n_days,
            "n_slots": self.n_slots,
            "n_rooms": self.n_rooms,
            "n_subjects": self.n_subjects,
        }
        for name, value in counts.items():
            if not isinstance(value, int) or value < 1:
                raise InstanceError(f"{name} must be a positive integer, got {value!r}")

        if not 1 <= self.duration <= self.n_slots:
            raise InstanceError(
                f"duration must be between 1 and n_slots={self.n_slots}, got {self.duration}")

        if len(self.eligibility) != self.n_defences:
            raise InstanceError(
                f"eligibility has {len(self.eligibility)} defences, expected {self.n_defences}")
        for j, defence in enumerate(self.eligibility):
            if len(defence) != self.n_roles:
                raise InstanceError(
                    f"eligibility[{j}] has {len(defence)} roles, expected {self.n_roles}")
            for t, members in enumerate(defence):
                if not members:
                    raise InstanceError(f"eligibility[{j}][{t}] is empty")
                self._check_ids(f"eligibility[{j}][{t}]", members, self.n_members)

        if len(self.availability) != self.n_members:
            raise InstanceError(
                f"availability has {len(self.availability)} members, expected {self.n_members}")
        for i, slots in enumerate(self.availability):
            for k, ell in slots:
                self._check_slot(f"availability[{i}]", k, ell)

        if len(self.member_expertise) != self.n_members:
            raise InstanceError("member_expertise must have one entry per member")
        if len(self.defence_subjects) != self.n_defences:
            raise InstanceError("defence_subjects must have one entry per defence")
        for i, subjects in enumerate(self.member_expertise):
            self._check_ids(f"member_expertise[{i}]", subjects, self.n_subjects)
        for j, subjects in enumerate(self.defence_subjects):
            self._check_ids(f"defence_subjects[{j}]", subjects, self.n_subjects)

        for (i, k, ell), value in self.penalties.items():
            self._check_ids("penalties", (i,), self.n_members)
            self._check_slot(f"penalties[{i}]", k, ell)
            if value < 0:
                raise InstanceError(f"penalty for member {i} at ({k}, {ell}) is negative")

    @staticmethod
    def _check_ids(where, ids, upper):
        for value in ids:
            if not 0 <= value < upper:
                raise InstanceError(f"{where}: id {value} out of range [0, {upper})")

    def _check_slot(self, where, k, ell):
        if not 0 <= k < self.n_days:
            raise InstanceError(f"{where}: day index {k} out of range [0, {self.n_days})")
        if not 0 <= ell < self.n_slots:
            raise InstanceError(f"{where}: slot index {ell} out of range [0, {self.n_slots})")

    @property
    def n_starts(self):
        """Number of start slots per day that leave room for a whole defence."""
        return self.n_slots - self.duration + 1

    def penalty(self, member, day, slot):
        return self.penalties.get((member, day, slot), 0)

    @cached_property
    def availability_grid(self):
        """bool array (member, day, slot)."""
        grid = np.zeros((self.n_members, self.n_days, self.n_slots), dtype=bool)
        for i, slots in enumerate(self.availability):
            for k, ell in slots:
                grid[i, k, ell] = True
        grid.flags.writeable = False
        return grid

    @cached_property
    def penalty_grid(self):
        grid = np.zeros((self.n_members, self.n_days, self.n_slots), dtype=np.int64)
        for (i, k, ell), value in self.penalties.items():
            grid[i, k, ell] = value
        grid.flags.writeable = False
        return grid

    @cached_property
    def window_availability(self):
        """bool array (member, day, start): member free for every slot of a defence at start."""
        windows = np.lib.stride_tricks.sliding_window_view(
            self.availability_grid, self.duration, axis=2)
        result = windows.all(axis=-1)
        result.flags.writeable = False
        return result

    @cached_property
    def window_penalty(self):
        """int array (member, day, start): summed penalty over the occupied slots."""
        windows = np.lib.stride_tricks.sliding_window_view(
            self.penalty_grid, self.duration, axis=2)
        result = windows.sum(axis=-1)
        result.flags.writeable = False
        return result

    @cached_property
    def suitability(self):
        """int array (member, defence): |expertise of member ∩ subjects of defence|."""
        table = np.zeros((self.n_members, self.n_defences), dtype=np.int64)
        for i, expertise in enumerate(self.member_expertise):
            for j, subjects in enumerate(self.defence_subjects):
                table[i, j] = len(expertise & subjects)
        table.flags.writeable = False
        return table

    @cached_property
    def member_roles(self):
        """The inverse of eligibility: member -> set of (defence, role) it may fill."""
        roles = [set() for _ in range(self.n_members)]
        for j, defence in enumerate(self.eligibility):
            for t, members in enumerate(defence):
                for i in members:
                    roles[i].add((j, t))
        return tuple(frozenset(r) for r in roles)

    def committee_windows(self, members):
        """bool array (day, start) of windows where every member in `members` is available."""
        members = list(members)
        if not members:
            return np.ones((self.n_days, self.n_starts), dtype=bool)
        return self.window_availability[members].all(axis=0)

    def common_slots(self, members):
        """bool array (day, slot) of single slots where every member is available."""
        members = list(members)
        if not members:
            return np.ones((self.n_days, self.n_slots), dtype=bool)
        return self.availability_grid[members].all(axis=0)


@dataclass(frozen=True)
class CommitteeConfig:
    """One member per (defence, role): the chromosome of the committee search."""

    assignment: tuple

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(
            tuple(int(i) for i in committee) for committee in self.assignment
        ))

    @property
    def n_defences(self):
        return len(self.assignment)

    def committee(self, j):
        return self.assignment[j]

    def with_committee(self, j, committee):
        blocks = list(self.assignment)
        blocks[j] = tuple(committee)
        return CommitteeConfig(tuple(blocks))

    def assignments(self):
        """Yield (member, defence, role) triples."""
        for j, committee in enumerate(self.assignment):
            for t, i in enumerate(committee):
                yield i, j, t


@dataclass(frozen=True)
class Schedule:
    # starts[j] -> (day, start slot, room)
    starts: tuple

    def __post_init__(self):
        object.__setattr__(self, "starts", tuple(
            tuple(int(v) for v in start) for start in self.starts
        ))


@dataclass(frozen=True)
class FullSolution:
    config: CommitteeConfig
    schedule: Schedule

    @property
    def n_defences(self):
        return self.config.n_defences
