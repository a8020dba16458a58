"""Batch bitmask kernels for the sweep engine.

A subset of a poset with n <= 63 elements is one int64 bitmask. The two
kernels below do all the heavy lifting of the exhaustive law sweeps:

* extremal_cone_batch: for each row mask B, intersect a cone table over
  the members of B and keep the extremal elements of the intersection.
  With the upper-cone/strict-lower tables this is Min of the upper cone;
  with the lower-cone/strict-upper tables it is Max of the lower cone.
* rel_pairs_batch: row-wise subset comparison under one of the four
  relation kinds (codes REL_ALL, REL_LE1, REL_LE2, REL_SOME).

Each kernel has a numba @njit build and a pure-numpy build; backend.py
decides which one runs.
"""

import numpy as np

from .backend import NUMBA_ENABLED

REL_ALL = 0
REL_LE1 = 1
REL_LE2 = 2
REL_SOME = 3


def _extremal_cone_loop(masks, cone, strict, full, out):
    n = cone.shape[0]
    for i in range(masks.shape[0]):
        m = masks[i]
        s = full
        for b in range(n):
            if (m >> b) & 1:
                s &= cone[b]
        r = 0
        for b in range(n):
            if ((s >> b) & 1) and (strict[b] & s) == 0:
                r |= 1 << b
        out[i] = r


def _rel_pairs_loop(kind, bmasks, cmasks, up, down, out):
    n = up.shape[0]
    for i in range(bmasks.shape[0]):
        bm = bmasks[i]
        cm = cmasks[i]
        if kind == REL_ALL:
            s = -1
            for b in range(n):
                if (bm >> b) & 1:
                    s &= up[b]
            out[i] = (cm & ~s) == 0
        elif kind == REL_LE1:
            ok = True
            for b in range(n):
                if ((bm >> b) & 1) and (cm & up[b]) == 0:
                    ok = False
                    break
            out[i] = ok
        elif kind == REL_LE2:
            ok = True
            for c in range(n):
                if ((cm >> c) & 1) and (bm & down[c]) == 0:
                    ok = False
                    break
            out[i] = ok
        else:
            ok = False
            for b in range(n):
                if ((bm >> b) & 1) and (cm & up[b]) != 0:
                    ok = True
                    break
            out[i] = ok


def _extremal_cone_numpy(masks, cone, strict, full):
    n = cone.shape[0]
    one = np.int64(1)
    inter = np.full(masks.shape, full, dtype=np.int64)
    for b in range(n):
        hit = ((masks >> b) & one) == one
        if hit.any():
            inter[hit] &= cone[b]
    out = np.zeros(masks.shape, dtype=np.int64)
    for b in range(n):
        keep = (((inter >> b) & one) == one) & ((inter & strict[b]) == 0)
        out[keep] |= one << b
    return out


def _rel_pairs_numpy(kind, bmasks, cmasks, up, down):
    n = up.shape[0]
    one = np.int64(1)
    if kind == REL_ALL:
        inter = np.full(bmasks.shape, np.int64(-1))
        for b in range(n):
            hit = ((bmasks >> b) & one) == one
            if hit.any():
                inter[hit] &= up[b]
        return (cmasks & ~inter) == 0
    if kind == REL_LE1:
        ok = np.ones(bmasks.shape, dtype=bool)
        for b in range(n):
            inb = ((bmasks >> b) & one) == one
            ok &= ~inb | ((cmasks & up[b]) != 0)
        return ok
    if kind == REL_LE2:
        ok = np.ones(bmasks.shape, dtype=bool)
        for c in range(n):
            inc = ((cmasks >> c) & one) == one
            ok &= ~inc | ((bmasks & down[c]) != 0)
        return ok
    if kind == REL_SOME:
        ok = np.zeros(bmasks.shape, dtype=bool)
        for b in range(n):
            inb = ((bmasks >> b) & one) == one
            ok |= inb & ((cmasks & up[b]) != 0)
        return ok
    raise ValueError(f"unknown relation code {kind}")


if NUMBA_ENABLED:
    from numba import njit

    _extremal_cone_jit = njit(cache=True)(_extremal_cone_loop)
    _rel_pairs_jit = njit(cache=True)(_rel_pairs_loop)


def extremal_cone_batch(masks, cone, strict, full):
    """Row-wise extremal elements of a cone intersection.

    masks: int64 array of subset bitmasks (any shape).
    cone, strict: per-element int64 tables of length n.
    full: bitmask of the whole carrier (identity of the intersection).
    """
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    flat = masks.ravel()
    if NUMBA_ENABLED:
        out = np.empty(flat.shape, dtype=np.int64)
        _extremal_cone_jit(flat, cone, strict, np.int64(full), out)
    else:
        out = _extremal_cone_numpy(flat, cone, strict, np.int64(full))
    return out.reshape(masks.shape)


def rel_pairs_batch(kind, bmasks, cmasks, up, down):
    """Row-wise subset comparison; returns a bool array of bmasks' shape."""
    bmasks = np.ascontiguousarray(bmasks, dtype=np.int64)
    cmasks = np.ascontiguousarray(cmasks, dtype=np.int64)
    if bmasks.shape != cmasks.shape:
        raise ValueError("operand arrays must have matching shapes")
    bflat = bmasks.ravel()
    cflat = cmasks.ravel()
    if NUMBA_ENABLED:
        out = np.empty(bflat.shape, dtype=np.bool_)
        _rel_pairs_jit(kind, bflat, cflat, up, down, out)
    else:
        out = _rel_pairs_numpy(kind, bflat, cflat, up, down)
    return out.reshape(bmasks.shape)
