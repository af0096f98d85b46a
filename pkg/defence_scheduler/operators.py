"""Variation operators on committee configurations.

Whole committee blocks are the unit of inheritance and mutation. A feasible committee stays
feasible wherever it is copied, so every operator here maps feasible configurations to
feasible configurations.
"""
from .committees import generate_feasible_committee
from .model import CommitteeConfig


def random_config(instance, rng):
    return CommitteeConfig(tuple(
        generate_feasible_committee(instance, j, rng) for j in range(instance.n_defences)
    ))


def initialise_population(instance, n_s, seeds, rng):
    """Seeds first (at most n_s of them), then random feasible configurations up to n_s."""
    population = list(seeds)[:n_s]
    while len(population) < n_s:
        population.append(random_config(instance, rng))
    return population


def non_uniform_crossover(p1, p2, v, rng):
    """Each defence inherits its committee from p1 with probability v, else from p2."""
    if p1.n_defences != p2.n_defences:
        raise ValueError("Parents have different numbers of defences")
    return CommitteeConfig(tuple(
        a if rng.random() < v else b for a, b in zip(p1.assignment, p2.assignment)
    ))


def crossover(p1, p2, rng):
    return non_uniform_crossover(p1, p2, 0.5, rng)


def mutate(config, m, instance, rng):
    """With probability m percent, redraw the committee of one random defence."""
    if rng.integers(100) >= m:
        return config
    j = int(rng.integers(config.n_defences))
    return config.with_committee(j, generate_feasible_committee(instance, j, rng))
