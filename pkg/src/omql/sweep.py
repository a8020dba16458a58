"""Batched evaluation of tense operators over whole valuation universes.

A universe is an (N, m) uint8 array of histories (one element index per
instant). Operator tables are (N, m) int64 arrays of subset bitmasks:
row i, column s holds op(q_i)(s). Star tables reuse the same gather
because the composite collapses to extremal bounds of fiber unions.

Exhaustive universes are used whenever n**m stays under the cap (env
OMQL_CAP overrides); otherwise a seeded sample is drawn and every report
says so.
"""

import numpy as np

from . import kernels
from .backend import enumeration_cap
from .errors import EmptyFiberError

UNIVERSE_CAP_DEFAULT = 100_000
SAMPLE_DEFAULT = 1_000


def all_valuations(n, m):
    """Every history, lexicographic with instant 0 most significant."""
    idx = np.arange(n**m, dtype=np.int64)
    out = np.empty((n**m, m), dtype=np.uint8)
    for t in range(m):
        out[:, t] = (idx // n ** (m - 1 - t)) % n
    return out


def sample_valuations(n, m, count, seed):
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, n, size=(count, m), dtype=np.uint8)
    return np.unique(picks, axis=0)


def universe(poset, frame, exhaustive=None, sample=None, seed=0):
    """Choose a valuation universe; returns (V, description, is_exhaustive).

    exhaustive=True forces full enumeration; None picks it when the count
    fits the cap; False forces sampling.
    """
    total = poset.n**frame.m
    cap = enumeration_cap(UNIVERSE_CAP_DEFAULT)
    if exhaustive is None:
        exhaustive = sample is None and total <= cap
    if exhaustive:
        return all_valuations(poset.n, frame.m), f"exhaustive ({total})", True
    count = sample or SAMPLE_DEFAULT
    V = sample_valuations(poset.n, frame.m, count, seed)
    return V, f"sampled ({V.shape[0]} of {total}, seed={seed})", False


def _gather_fibers(frame, op, masks):
    """OR the per-instant masks over each instant's fiber."""
    out = np.empty_like(masks)
    for s in range(frame.m):
        if op in ("P", "H"):
            fiber = frame.past[s]
            direction = "incoming"
        else:
            fiber = frame.future[s]
            direction = "outgoing"
        if not fiber:
            raise EmptyFiberError(op, frame.names[s], direction)
        out[:, s] = np.bitwise_or.reduce(masks[:, fiber], axis=1)
    return out


def apply_tense_batch(poset, frame, op, masks):
    """Operator over set-valued rows (product semantics), batched."""
    tables = poset.tables()
    gathered = _gather_fibers(frame, op, masks)
    if op in ("P", "F"):
        return kernels.extremal_cone_batch(
            gathered, tables["up"], tables["sdown"], poset.full_mask
        )
    return kernels.extremal_cone_batch(
        gathered, tables["down"], tables["sup"], poset.full_mask
    )


def tense_tables(poset, frame, V, ops=("P", "F", "H", "G")):
    """Tables of op(q)(s) for every history row of V."""
    lifted = np.int64(1) << V.astype(np.int64)
    return {op: apply_tense_batch(poset, frame, op, lifted) for op in ops}


def star_table(poset, frame, outer, inner_table):
    """Table of the composite (outer after phi after inner)."""
    return apply_tense_batch(poset, frame, outer, inner_table)


def rel_rows(poset, kind_code, A, B):
    """Row-wise comparison of two (N, m) mask tables, all instants at once."""
    tables = poset.tables()
    cells = kernels.rel_pairs_batch(kind_code, A, B, tables["up"], tables["down"])
    return cells.all(axis=1) if cells.ndim == 2 else cells
