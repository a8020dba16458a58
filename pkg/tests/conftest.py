"""Shared fixtures and brute-force oracles.

The oracles recompute everything with plain set/loop code straight from
the definitions, independent of the bitmask cone caches and the batch
kernels, so the fast paths are always checked against a second
implementation.
"""

import pytest

from omql import fixtures
from omql.poset import bits


@pytest.fixture(scope="session")
def fig1():
    return fixtures.fig1()


@pytest.fixture(scope="session")
def chain3():
    return fixtures.chain3()


@pytest.fixture(scope="session")
def bool1():
    return fixtures.boolean_algebra(1)


@pytest.fixture(scope="session")
def bool2():
    return fixtures.boolean_algebra(2)


@pytest.fixture(scope="session")
def bool3():
    return fixtures.boolean_algebra(3)


@pytest.fixture(scope="session")
def histories(fig1):
    return fixtures.example_histories(fig1)


def mask_of(poset, *names):
    out = 0
    for name in names:
        out |= 1 << poset.index(name)
    return out


def names_of(poset, mask):
    return set(poset.subset_names(mask))


# -- brute-force oracles ----------------------------------------------------


def brute_upper(poset, members):
    return {
        x for x in range(poset.n) if all(poset.leq_idx(b, x) for b in members)
    }


def brute_lower(poset, members):
    return {
        x for x in range(poset.n) if all(poset.leq_idx(x, b) for b in members)
    }


def brute_min_upper(poset, members):
    ub = brute_upper(poset, members)
    return {x for x in ub if not any(y != x and poset.leq_idx(y, x) for y in ub)}


def brute_max_lower(poset, members):
    lb = brute_lower(poset, members)
    return {x for x in lb if not any(y != x and poset.leq_idx(x, y) for y in lb)}


def brute_join(poset, a, b):
    mins = brute_min_upper(poset, (a, b))
    return next(iter(mins)) if len(mins) == 1 else None


def brute_meet(poset, a, b):
    maxs = brute_max_lower(poset, (a, b))
    return next(iter(maxs)) if len(maxs) == 1 else None


def brute_rel(poset, kind, B, C):
    """kind in {'all','le1','le2','some'} over index collections."""
    if kind == "all":
        return all(poset.leq_idx(b, c) for b in B for c in C)
    if kind == "le1":
        return all(any(poset.leq_idx(b, c) for c in C) for b in B)
    if kind == "le2":
        return all(any(poset.leq_idx(b, c) for b in B) for c in C)
    if kind == "some":
        return any(poset.leq_idx(b, c) for b in B for c in C)
    raise ValueError(kind)


def brute_odot(poset, a, b):
    """Min upper bounds of {a, b'} met with b, elementwise."""
    out = set()
    for u in brute_min_upper(poset, (a, poset.inv[b])):
        m = brute_meet(poset, u, b)
        assert m is not None
        out.add(m)
    return out


def brute_imp(poset, a, b):
    out = set()
    for l in brute_max_lower(poset, (a, b)):
        j = brute_join(poset, poset.inv[a], l)
        assert j is not None
        out.add(j)
    return out


def brute_tense(poset, frame, op, q):
    """Tense operator on an exact history, one instant at a time."""
    out = []
    for s in range(frame.m):
        fiber = frame.past[s] if op in ("P", "H") else frame.future[s]
        gathered = {q[t] for t in fiber}
        if op in ("P", "F"):
            out.append(brute_min_upper(poset, gathered))
        else:
            out.append(brute_max_lower(poset, gathered))
    return out


def brute_tense_members(poset, frame, op, members):
    """Tense operator on an explicit family of exact histories."""
    out = []
    for s in range(frame.m):
        fiber = frame.past[s] if op in ("P", "H") else frame.future[s]
        gathered = {q[t] for q in members for t in fiber}
        if op in ("P", "F"):
            out.append(brute_min_upper(poset, gathered))
        else:
            out.append(brute_max_lower(poset, gathered))
    return out


def set_of_mask(mask):
    return set(bits(mask))
