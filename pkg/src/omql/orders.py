"""Quasiorders on subsets, on set-valued histories, and on history families.

Four ways a non-empty subset B can sit below a non-empty subset C:

* ALL   every b <= every c            (C inside the upper cone of B)
* LE1   every b has some c above it
* LE2   every c has some b below it
* SOME  some b <= some c

LE1/LE2 are quasiorders extending the element order; their symmetrizations
are the two approximate-equality relations. All four lift pointwise to
set-valued histories and then, member-against-member, to families of exact
histories. On exact histories all four inner relations coincide with the
pointwise element order, so family comparisons in product form never need
the product expanded.
"""

import enum

from .errors import IdentityError
from .poset import bits


class Rel(enum.Enum):
    ALL = "le"
    LE1 = "le1"
    LE2 = "le2"
    SOME = "some"

    @classmethod
    def parse(cls, token):
        try:
            return _REL_TOKENS[token]
        except KeyError:
            raise ValueError(f"unknown relation kind {token!r}") from None


_REL_TOKENS = {
    "le": Rel.ALL,
    "le1": Rel.LE1,
    "le2": Rel.LE2,
    "some": Rel.SOME,
    "sq": Rel.SOME,
}


def cmp_masks(poset, kind, bmask, cmask):
    """Compare two non-empty subset bitmasks of one poset."""
    if bmask == 0 or cmask == 0:
        raise ValueError("subset comparison needs non-empty operands")
    if kind is Rel.ALL:
        return cmask & ~poset.upper_cone_mask(bmask) == 0
    if kind is Rel.LE1:
        return all(cmask & poset.up[b] for b in bits(bmask))
    if kind is Rel.LE2:
        return all(bmask & poset.down[c] for c in bits(cmask))
    if kind is Rel.SOME:
        return any(cmask & poset.up[b] for b in bits(bmask))
    raise TypeError(f"not a relation kind: {kind!r}")


def cmp_subsets(kind, B, C):
    if B.poset is not C.poset:
        raise IdentityError("cannot compare subsets of different posets")
    return cmp_masks(B.poset, kind, B.mask, C.mask)


def equiv_masks(poset, level, bmask, cmask):
    """Symmetrized comparison: level 1 uses LE1, level 2 uses LE2."""
    kind = Rel.LE1 if level == 1 else Rel.LE2
    return cmp_masks(poset, kind, bmask, cmask) and cmp_masks(
        poset, kind, cmask, bmask
    )


def equiv_subsets(level, B, C):
    if B.poset is not C.poset:
        raise IdentityError("cannot compare subsets of different posets")
    return equiv_masks(B.poset, level, B.mask, C.mask)


def cmp_setvals(poset, kind, x, y):
    """Pointwise comparison of two set-valued histories (tuples of masks)."""
    if len(x) != len(y):
        raise IdentityError("histories run over different time sets")
    return all(cmp_masks(poset, kind, xm, ym) for xm, ym in zip(x, y))


def equiv_setvals(poset, level, x, y):
    if len(x) != len(y):
        raise IdentityError("histories run over different time sets")
    return all(equiv_masks(poset, level, xm, ym) for xm, ym in zip(x, y))


def _vals_leq(poset, p, q):
    return all(poset.leq_idx(a, b) for a, b in zip(p, q))


def cmp_families(kind, B, C):
    """Compare two history families, member against member.

    The inner relation between members is always the pointwise element
    order; kind picks the quantification pattern over members, exactly as
    for subsets: ALL every/every, LE1 every-left/some-right, LE2
    every-right/some-left, SOME some/some.

    Product-form families compare factor by factor with the same kind —
    members of a product vary independently per instant, so per-instant
    witnesses assemble into member witnesses and vice versa. A mixed
    comparison collapses the product side per instant whenever the member
    on the explicit side is fixed first; the two remaining patterns
    (LE1 with an explicit right side, LE2 with an explicit left side)
    need the product expanded, which the family cap guards.
    """
    if B.poset is not C.poset:
        raise IdentityError("cannot compare families over different posets")
    if B.m != C.m:
        raise IdentityError("families run over different time sets")
    poset = B.poset

    def member_leq_family(p, fam, fam_kind):
        # p <= some/every member of a product family, per instant
        return all(
            cmp_masks(poset, fam_kind, 1 << p[t], fm)
            for t, fm in enumerate(fam.factors)
        )

    def family_leq_member(fam, q, fam_kind):
        return all(
            cmp_masks(poset, fam_kind, fm, 1 << q[t])
            for t, fm in enumerate(fam.factors)
        )

    if B.factors is not None and C.factors is not None:
        return all(
            cmp_masks(poset, kind, bm, cm)
            for bm, cm in zip(B.factors, C.factors)
        )
    if B.factors is not None:
        if kind is Rel.ALL:
            return all(family_leq_member(B, q, Rel.ALL) for q in C.members())
        if kind is Rel.LE2:
            return all(family_leq_member(B, q, Rel.SOME) for q in C.members())
        if kind is Rel.SOME:
            return any(family_leq_member(B, q, Rel.SOME) for q in C.members())
        # LE1: every member of B needs one shared q in C; expand below
    elif C.factors is not None:
        if kind is Rel.ALL:
            return all(member_leq_family(p, C, Rel.ALL) for p in B.members())
        if kind is Rel.LE1:
            return all(member_leq_family(p, C, Rel.SOME) for p in B.members())
        if kind is Rel.SOME:
            return any(member_leq_family(p, C, Rel.SOME) for p in B.members())
        # LE2: every member of C needs one shared p in B; expand below

    bs, cs = B.members(), C.members()
    if kind is Rel.ALL:
        return all(_vals_leq(poset, p, q) for p in bs for q in cs)
    if kind is Rel.LE1:
        return all(any(_vals_leq(poset, p, q) for q in cs) for p in bs)
    if kind is Rel.LE2:
        return all(any(_vals_leq(poset, p, q) for p in bs) for q in cs)
    if kind is Rel.SOME:
        return any(_vals_leq(poset, p, q) for p in bs for q in cs)
    raise TypeError(f"not a relation kind: {kind!r}")
