"""Random instances shaped like the published experiments.

Availability is drawn in whole blocks of `duration` slots (any slots left over at the end of
a day are drawn one by one), so members tend to be free for complete defences.
"""
import logging
from dataclasses import asdict, dataclass

import numpy as np

from .committees import find_unsatisfiable_defences
from .errors import GenerationError, ParameterError
from .model import Instance

logger = logging.getLogger(__name__)

MAX_GENERATION_RETRIES = 1000


@dataclass(frozen=True)
class GeneratorSpec:
    n_members: int
    n_defences: int
    n_roles: int
    n_preassigned: int
    n_days: int
    n_slots: int
    n_rooms: int
    n_subjects: int
    duration: int
    availability_density: float = 0.6
    eligibility_density: float = 0.3
    penalty_density: float = 0.1
    expertise_density: float = 0.2
    seed: int = 0

    def __post_init__(self):
        for name in ("n_members", "n_defences", "n_roles", "n_days", "n_slots", "n_rooms",
                     "n_subjects", "duration"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be at least 1")
        if not 0 <= self.n_preassigned < self.n_roles:
            raise ParameterError("n_preassigned must be below n_roles")
        if self.n_members < self.n_roles:
            raise ParameterError("a committee needs n_roles distinct members")
        if self.duration > self.n_slots:
            raise ParameterError("duration cannot exceed n_slots")
        if not 0 < self.availability_density <= 1:
            raise ParameterError("availability_density must be in (0, 1]")
        for name in ("eligibility_density", "penalty_density", "expertise_density"):
            if not 0 <= getattr(self, name) <= 1:
                raise ParameterError(f"{name} must be in [0, 1]")

    def with_seed(self, seed):
        values = asdict(self)
        values["seed"] = seed
        return GeneratorSpec(**values)


PRESETS = {
    "tiny": GeneratorSpec(
        n_members=6, n_defences=3, n_roles=2, n_preassigned=1, n_days=1, n_slots=4,
        n_rooms=2, n_subjects=4, duration=2, availability_density=0.7,
        eligibility_density=0.5, penalty_density=0.2, expertise_density=0.4),
    "small": GeneratorSpec(
        n_members=25, n_defences=20, n_roles=3, n_preassigned=2, n_days=5, n_slots=8,
        n_rooms=2, n_subjects=10, duration=2),
    "large": GeneratorSpec(
        n_members=50, n_defences=40, n_roles=3, n_preassigned=1, n_days=10, n_slots=8,
        n_rooms=3, n_subjects=15, duration=2),
    "case-study": GeneratorSpec(
        n_members=47, n_defences=36, n_roles=3, n_preassigned=1, n_days=16, n_slots=31,
        n_rooms=2, n_subjects=15, duration=4, availability_density=0.4),
}


def generate_instance(spec):
    """Draw instances from `spec` until every defence has a feasible committee.

    Raises
    ------
    GenerationError after MAX_GENERATION_RETRIES draws, naming the defences that failed last.
    """
    rng = np.random.default_rng(spec.seed)
    unsatisfiable = []
    for attempt in range(MAX_GENERATION_RETRIES):
        instance = _draw(spec, rng)
        unsatisfiable = find_unsatisfiable_defences(instance)
        if not unsatisfiable:
            if attempt:
                logger.debug("Generated a satisfiable instance after %d redraws", attempt)
            return instance
    raise GenerationError(
        f"No satisfiable instance after {MAX_GENERATION_RETRIES} draws; in the last one "
        f"defences {unsatisfiable} had no committee sharing a window. Try a higher "
        f"availability_density or eligibility_density.")


def _draw(spec, rng):
    n_i = spec.n_members
    eligibility = []
    for _ in range(spec.n_defences):
        preassigned = [int(i) for i in rng.choice(n_i, size=spec.n_preassigned, replace=False)]
        others = [i for i in range(n_i) if i not in preassigned]
        roles = [[i] for i in preassigned]
        for _ in range(spec.n_roles - spec.n_preassigned):
            members = [i for i in others if rng.random() < spec.eligibility_density]
            if not members:
                members = [others[int(rng.integers(len(others)))]]
            roles.append(members)
        eligibility.append(roles)

    availability = []
    penalties = {}
    blocks = spec.n_slots // spec.duration
    for i in range(n_i):
        slots = []
        for k in range(spec.n_days):
            for b in range(blocks):
                if rng.random() < spec.availability_density:
                    slots.extend((k, b * spec.duration + s) for s in range(spec.duration))
            for ell in range(blocks * spec.duration, spec.n_slots):
                if rng.random() < spec.availability_density:
                    slots.append((k, ell))
        for k, ell in slots:
            if rng.random() < spec.penalty_density:
                penalties[(i, k, ell)] = 1
        availability.append(slots)

    member_expertise = []
    for _ in range(n_i):
        subjects = [q for q in range(spec.n_subjects) if rng.random() < spec.expertise_density]
        member_expertise.append(subjects or [int(rng.integers(spec.n_subjects))])
    defence_subjects = [[int(rng.integers(spec.n_subjects))] for _ in range(spec.n_defences)]

    return Instance(
        n_members=n_i,
        n_defences=spec.n_defences,
        n_roles=spec.n_roles,
        n_days=spec.n_days,
        n_slots=spec.n_slots,
        n_rooms=spec.n_rooms,
        n_subjects=spec.n_subjects,
        duration=spec.duration,
        eligibility=eligibility,
        availability=availability,
        member_expertise=member_expertise,
        defence_subjects=defence_subjects,
        penalties=penalties,
    )
