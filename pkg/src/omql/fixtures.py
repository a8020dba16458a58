"""Built-in structures: the 20-element benchmark poset, small Boolean
algebras, and the three-instant chain with its worked histories.

The 20-element carrier has a bottom, nine atoms a..i, their complements,
and a top. Each atom sits under exactly four complements-of-atoms:

    a < e' f' h' i'    b < d' f' g' i'    c < d' e' g' h'
    d < b' c' h' i'    e < a' c' g' i'    f < a' b' g' h'
    g < b' c' e' f'    h < a' c' d' f'    i < a' b' d' e'

so every pair of distinct atoms has exactly one common cover among the
complements when orthogonal and two incomparable minimal upper bounds
otherwise, which is what makes joins properly partial here.

Shorthand names usable anywhere a file path is accepted: fig1, bool1,
bool2, bool3 (posets); chain3 (frame); p, q, r (histories).
"""

import itertools
from importlib.resources import files

import numpy as np

from .frames import chain_frame, load_frame
from .poset import OmpPoset, load_poset

ATOM_COATOMS = {
    "a": ("e'", "f'", "h'", "i'"),
    "b": ("d'", "f'", "g'", "i'"),
    "c": ("d'", "e'", "g'", "h'"),
    "d": ("b'", "c'", "h'", "i'"),
    "e": ("a'", "c'", "g'", "i'"),
    "f": ("a'", "b'", "g'", "h'"),
    "g": ("b'", "c'", "e'", "f'"),
    "h": ("a'", "c'", "d'", "f'"),
    "i": ("a'", "b'", "d'", "e'"),
}

_cache = {}


def fixture_path(name):
    """Path to a packaged fixture file (without shorthand resolution)."""
    return files("omql") / "fixtures" / name


def fig1():
    """The 20-element orthomodular poset, loaded from its fixture file."""
    if "fig1" not in _cache:
        _cache["fig1"] = load_poset(fixture_path("fig1.omp"))
    return _cache["fig1"]


def boolean_algebra(k):
    """Powerset of k letters: names 0, single letters, letter runs, 1."""
    if not 1 <= k <= 10:
        raise ValueError("k out of range")
    letters = "abcdefghij"[:k]
    full = (1 << k) - 1

    def label(v):
        if v == 0:
            return "0"
        if v == full:
            return "1"
        return "".join(c for i, c in enumerate(letters) if (v >> i) & 1)

    order = sorted(range(1 << k), key=lambda v: (bin(v).count("1"), label(v)))
    pos = {v: i for i, v in enumerate(order)}
    n = 1 << k
    leq = np.zeros((n, n), dtype=bool)
    for v, w in itertools.product(order, order):
        leq[pos[v], pos[w]] = v & ~w == 0
    inv = [pos[full ^ v] for v in order]
    return OmpPoset([label(v) for v in order], leq, inv)


def chain3():
    if "chain3" not in _cache:
        _cache["chain3"] = chain_frame(3)
    return _cache["chain3"]


def example_histories(poset=None):
    """The three worked histories over the three-instant chain."""
    poset = poset or fig1()
    idx = poset.index
    return {
        "p": (idx("i'"), idx("i'"), idx("f'")),
        "q": (idx("b'"), idx("a'"), idx("a'")),
        "r": (idx("a"), idx("b"), idx("b")),
    }


_POSET_SHORTHAND = {
    "fig1": "fig1.omp",
    "bool1": "bool1.omp",
    "bool2": "bool2.omp",
    "bool3": "bool3.omp",
}

_FRAME_SHORTHAND = {"chain3": "chain3.tf"}

_HISTORY_SHORTHAND = {"p": "p.val", "q": "q.val", "r": "r.val"}


def resolve_poset(arg, validate=True):
    """Load a poset from a path or a fixture shorthand."""
    if arg in _POSET_SHORTHAND:
        return load_poset(fixture_path(_POSET_SHORTHAND[arg]), validate=validate)
    return load_poset(arg, validate=validate)


def resolve_frame(arg):
    if arg in _FRAME_SHORTHAND:
        return load_frame(fixture_path(_FRAME_SHORTHAND[arg]))
    return load_frame(arg)


def history_shorthand(name):
    return _HISTORY_SHORTHAND.get(name)
