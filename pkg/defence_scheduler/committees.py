"""Feasible committees for a single defence.

A committee is feasible when every member is eligible for its role, no member holds two
roles, and all members are available together for at least one full defence window.
"""
import numpy as np

from .errors import UnsatisfiableDefence

# Dead ends tolerated by the randomised search before it falls back to full enumeration
MAX_DEAD_ENDS = 100


class _GiveUp(Exception):
    pass


def generate_feasible_committee(instance, j, rng, max_dead_ends=MAX_DEAD_ENDS):
    """Draw a random feasible committee for defence `j`.

    Roles are filled in random order, each with a uniformly chosen eligible member that keeps
    a common window open. Dead ends are backtracked; after `max_dead_ends` of them the
    committee is drawn uniformly from the full list of feasible committees instead.

    Returns
    -------
    A tuple of member ids indexed by role.

    Raises
    ------
    UnsatisfiableDefence if defence `j` has no feasible committee.
    """
    roles = [int(t) for t in rng.permutation(instance.n_roles)]
    eligibility = instance.eligibility[j]
    windows = instance.window_availability
    chosen = {}
    dead_ends = 0

    def extend(depth, mask):
        nonlocal dead_ends
        if depth == len(roles):
            return True
        t = roles[depth]
        taken = set(chosen.values())
        candidates = sorted(i for i in eligibility[t] if i not in taken)
        for index in rng.permutation(len(candidates)):
            i = candidates[index]
            narrowed = mask & windows[i]
            if not narrowed.any():
                continue
            chosen[t] = i
            if extend(depth + 1, narrowed):
                return True
            del chosen[t]
        dead_ends += 1
        if dead_ends > max_dead_ends:
            raise _GiveUp()
        return False

    try:
        if extend(0, np.ones((instance.n_days, instance.n_starts), dtype=bool)):
            return tuple(chosen[t] for t in range(instance.n_roles))
        raise UnsatisfiableDefence([j])
    except _GiveUp:
        pass

    committees = enumerate_feasible_committees(instance, j)
    if not committees:
        raise UnsatisfiableDefence([j])
    return committees[int(rng.integers(len(committees)))]


def enumerate_feasible_committees(instance, j, first_only=False):
    """Every feasible committee of defence `j`, in lexicographic order of role members."""
    eligibility = [sorted(members) for members in instance.eligibility[j]]
    windows = instance.window_availability
    found = []
    chosen = []

    def extend(t, mask):
        if t == instance.n_roles:
            found.append(tuple(chosen))
            return first_only
        for i in eligibility[t]:
            if i in chosen:
                continue
            narrowed = windows[i] if mask is None else mask & windows[i]
            if not narrowed.any():
                continue
            chosen.append(i)
            stop = extend(t + 1, narrowed)
            chosen.pop()
            if stop:
                return True
        return False

    extend(0, None)
    return found


def find_unsatisfiable_defences(instance):
    return [
        j for j in range(instance.n_defences)
        if not enumerate_feasible_committees(instance, j, first_only=True)
    ]


def validate_instance(instance):
    """Reject an instance in which some defence can never get a committee.

    Raises
    ------
    UnsatisfiableDefence naming every offending defence.
    """
    bad = find_unsatisfiable_defences(instance)
    if bad:
        raise UnsatisfiableDefence(bad, "no eligible committee shares a full window")
    return instance
