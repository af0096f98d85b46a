from dataclasses import replace

import mock
import pytest

from defence_scheduler.committees import find_unsatisfiable_defences
from defence_scheduler.errors import GenerationError, ParameterError
from defence_scheduler.generator import PRESETS, GeneratorSpec, generate_instance


@pytest.mark.parametrize("name", ["tiny", "small"])
def test_presets_generate_satisfiable_instances(name):
    spec = PRESETS[name]
    instance = generate_instance(spec)
    assert instance.n_members == spec.n_members
    assert instance.n_defences == spec.n_defences
    assert find_unsatisfiable_defences(instance) == []
    for defence in instance.eligibility:
        assert all(len(defence[t]) == 1 for t in range(spec.n_preassigned))


def test_same_seed_same_instance():
    spec = PRESETS["tiny"].with_seed(12)
    assert generate_instance(spec) == generate_instance(spec)
    assert generate_instance(spec) != generate_instance(spec.with_seed(13))


def test_availability_comes_in_blocks():
    spec = replace(PRESETS["tiny"], n_slots=6, duration=3, seed=4)
    instance = generate_instance(spec)
    for slots in instance.availability:
        for k, ell in slots:
            block = ell - ell % 3
            assert {(k, block + s) for s in range(3)} <= slots


def test_preset_shapes():
    assert PRESETS["case-study"].n_members == 47
    assert PRESETS["case-study"].duration == 4
    assert PRESETS["large"].n_defences == 40


@pytest.mark.parametrize("overrides", [
    dict(n_members=0),
    dict(n_preassigned=2),
    dict(n_members=1),
    dict(duration=5),
    dict(availability_density=0.0),
    dict(penalty_density=1.5),
])
def test_spec_validation(overrides):
    with pytest.raises(ParameterError):
        replace(PRESETS["tiny"], **overrides)


@mock.patch("defence_scheduler.generator.MAX_GENERATION_RETRIES", 3)
def test_gives_up_after_the_retry_limit():
    spec = GeneratorSpec(n_members=3, n_defences=2, n_roles=3, n_preassigned=0, n_days=1,
                         n_slots=4, n_rooms=1, n_subjects=1, duration=4,
                         availability_density=0.01, eligibility_density=0.0)
    with pytest.raises(GenerationError, match="after 3 draws"):
        generate_instance(spec)
