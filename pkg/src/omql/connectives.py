"""Inexact conjunction and implication.

Both connectives return sets of elements rather than single values:

* odot(a, b): the minimal upper bounds of {a, b'}, each met with b
* imp(a, b): a' joined with each maximal lower bound of {a, b}

The intermediate meets/joins are always defined in a valid structure
(the operands are orthogonal in each case), so a partiality error
escaping from here means the carrier is not orthomodular. Set and
history arguments lift by unions over member pairs and pointwise over
instants. The connectives are adjoint under the SOME relation and obey
residuation-style bounds; the checkers at the bottom verify those on
given operands.
"""

from .errors import IdentityError
from .orders import Rel, cmp_masks, cmp_setvals
from .poset import bits


def _pair_cache(poset, attr):
    cache = getattr(poset, attr, None)
    if cache is None:
        cache = {}
        setattr(poset, attr, cache)
    return cache


def odot(poset, a, b):
    """Inexact conjunction of two elements; returns a subset bitmask."""
    cache = _pair_cache(poset, "_odot_cache")
    key = (a, b)
    try:
        return cache[key]
    except KeyError:
        upper = poset.min_upper_mask((1 << a) | (1 << poset.inv[b]))
        out = poset.pointwise_meet_mask(b, upper)
        cache[key] = out
        return out


def imp(poset, a, b):
    """Inexact implication between two elements; returns a subset bitmask."""
    cache = _pair_cache(poset, "_imp_cache")
    key = (a, b)
    try:
        return cache[key]
    except KeyError:
        lower = poset.max_lower_mask((1 << a) | (1 << b))
        out = poset.pointwise_join_mask(poset.inv[a], lower)
        cache[key] = out
        return out


def odot_sets(poset, bmask, cmask):
    """Union of odot over all member pairs; operands must be non-empty."""
    if bmask == 0 or cmask == 0:
        raise ValueError("connective applied to an empty set")
    out = 0
    for b in bits(bmask):
        for c in bits(cmask):
            out |= odot(poset, b, c)
    return out


def imp_sets(poset, bmask, cmask):
    if bmask == 0 or cmask == 0:
        raise ValueError("connective applied to an empty set")
    out = 0
    for b in bits(bmask):
        for c in bits(cmask):
            out |= imp(poset, b, c)
    return out


def odot_setval(poset, x, y):
    """Pointwise set conjunction of two set-valued histories."""
    if len(x) != len(y):
        raise IdentityError("histories run over different time sets")
    return tuple(odot_sets(poset, xm, ym) for xm, ym in zip(x, y))


def imp_setval(poset, x, y):
    if len(x) != len(y):
        raise IdentityError("histories run over different time sets")
    return tuple(imp_sets(poset, xm, ym) for xm, ym in zip(x, y))


def adjointness_holds(poset, bmask, cmask, dmask):
    """Evaluate both sides of the adjunction; returns (left, right).

    left:  odot(B, C) SOME-below D
    right: B SOME-below imp(C, D)
    The adjunction says the two are equivalent.
    """
    left = cmp_masks(poset, Rel.SOME, odot_sets(poset, bmask, cmask), dmask)
    right = cmp_masks(poset, Rel.SOME, bmask, imp_sets(poset, cmask, dmask))
    return left, right


def divisibility_holds(poset, a, b):
    """imp(a,b) odot a must equal the maximal lower bounds of {a, b}."""
    left = odot_sets(poset, imp(poset, a, b), 1 << a)
    return left == poset.max_lower_mask((1 << a) | (1 << b))


def unit_laws_hold(poset, a):
    """odot is idempotent and has the top as a unit, exactly."""
    one = poset.top
    return (
        odot(poset, a, a) == 1 << a
        and odot(poset, a, one) == 1 << a
        and odot(poset, one, a) == 1 << a
    )


def residuation_bounds_exact(poset, p, q):
    """Bounds tying the connectives on exact histories.

    Returns (left, right) over all instants:
      left:  p(t) below every member of  q(t) -> (p(t) odot q(t))
      right: every member of (p(t) -> q(t)) odot p(t)  below  q(t)
    """
    if len(p) != len(q):
        raise IdentityError("histories run over different time sets")
    left = right = True
    for a, b in zip(p, q):
        into = imp_sets(poset, 1 << b, odot(poset, a, b))
        left = left and cmp_masks(poset, Rel.ALL, 1 << a, into)
        back = odot_sets(poset, imp(poset, a, b), 1 << a)
        right = right and cmp_masks(poset, Rel.ALL, back, 1 << b)
    return left, right


def residuation_bounds_inexact(poset, x, p):
    """The same bounds with a set-valued x against an exact p.

    Returns a dict of four comparisons:
      x le1/le2 p -> (x odot p)   and   (p -> x) odot p le1/le2 x.
    Each side is also recomputed from its closed form (a union of
    minimal-upper/maximal-lower sets over the members of x) and the two
    evaluations are required to agree.
    """
    if len(x) != len(p):
        raise IdentityError("histories run over different time sets")
    lifted = tuple(1 << a for a in p)
    into = tuple(
        imp_sets(poset, pm, odot_sets(poset, xm, pm))
        for xm, pm in zip(x, lifted)
    )
    back = tuple(
        odot_sets(poset, imp_sets(poset, pm, xm), pm)
        for xm, pm in zip(x, lifted)
    )
    for t, (xm, a) in enumerate(zip(x, p)):
        closed_into = 0
        closed_back = 0
        for q in bits(xm):
            closed_into |= poset.min_upper_mask((1 << q) | (1 << poset.inv[a]))
            closed_back |= poset.max_lower_mask((1 << a) | (1 << q))
        if closed_into != into[t] or closed_back != back[t]:
            raise AssertionError(
                "closed-form evaluation disagrees at instant index "
                f"{t}: this carrier is not orthomodular"
            )
    return {
        "into_le1": cmp_setvals(poset, Rel.LE1, x, into),
        "into_le2": cmp_setvals(poset, Rel.LE2, x, into),
        "back_le1": cmp_setvals(poset, Rel.LE1, back, x),
        "back_le2": cmp_setvals(poset, Rel.LE2, back, x),
    }
