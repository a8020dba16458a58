"""Tense operators over histories valued in an orthomodular poset.

A history (valuation) assigns one element per instant: a tuple of element
indices. A set-valued history assigns a non-empty subset per instant: a
tuple of bitmasks. A Family is a set of exact histories, kept either
explicitly or in product form (one factor subset per instant, the family
of all histories threading the factors). The product form is what the
transformation function phi produces; it compares and transforms without
being expanded, and expansion past the capacity cap is refused.

The four operators look across the frame's fibers:

* P(q)(s): minimal upper bounds of q over the past fiber of s
* F(q)(s): minimal upper bounds over the future fiber
* H(q)(s): maximal lower bounds over the past fiber
* G(q)(s): maximal lower bounds over the future fiber

On a family they gather every member's values over the fiber, which for a
product family collapses to the union of factors over the fiber — the
same union the exact definition yields, so the fast path is not a
heuristic. star(outer, inner, q) is outer over phi of inner's result.
"""

import itertools

from .backend import enumeration_cap
from .errors import CapacityError, EmptyFiberError, IdentityError
from .poset import bits

TENSE_OPS = "PFHG"

PHI_CAP_DEFAULT = 1_000_000


def check_valuation(poset, frame, q):
    if len(q) != frame.m:
        raise IdentityError("history does not cover the frame's instants")
    for a in q:
        if not 0 <= a < poset.n:
            raise ValueError(f"element index {a} out of range")


def check_setval(poset, frame, x):
    if len(x) != frame.m:
        raise IdentityError("history does not cover the frame's instants")
    for mask in x:
        if mask == 0:
            raise ValueError("set-valued history has an empty value")
        if mask >> poset.n:
            raise ValueError("set-valued history mask out of range")


def lift_valuation(q):
    """Exact history as a set-valued one (singletons pointwise)."""
    return tuple(1 << a for a in q)


def prime_valuation(poset, q):
    return tuple(poset.inv[a] for a in q)


def prime_setval(poset, x):
    return tuple(poset.inv_mask(m) for m in x)


def _fiber(frame, op, s):
    if op in ("P", "H"):
        fiber = frame.past[s]
        direction = "incoming"
    elif op in ("F", "G"):
        fiber = frame.future[s]
        direction = "outgoing"
    else:
        raise ValueError(f"unknown tense operator {op!r}")
    if not fiber:
        raise EmptyFiberError(op, frame.names[s], direction)
    return fiber


def _extremal(poset, op, gathered):
    if op in ("P", "F"):
        return poset.min_upper_mask(gathered)
    return poset.max_lower_mask(gathered)


def tense(poset, frame, op, q):
    """Apply one operator to an exact history; returns a set-valued history."""
    check_valuation(poset, frame, q)
    out = []
    for s in range(frame.m):
        gathered = 0
        for t in _fiber(frame, op, s):
            gathered |= 1 << q[t]
        out.append(_extremal(poset, op, gathered))
    return tuple(out)


class Family:
    """Non-empty set of exact histories over one poset and time set."""

    __slots__ = ("poset", "m", "factors", "explicit")

    def __init__(self, poset, m, factors=None, explicit=None):
        if (factors is None) == (explicit is None):
            raise ValueError("a family is either product-form or explicit")
        if explicit is not None and not explicit:
            raise ValueError("a family cannot be empty")
        self.poset = poset
        self.m = m
        self.factors = factors
        self.explicit = explicit

    @classmethod
    def product(cls, poset, x):
        return cls(poset, len(x), factors=tuple(x))

    @classmethod
    def singleton(cls, poset, q):
        return cls(poset, len(q), explicit=frozenset((tuple(q),)))

    @classmethod
    def of(cls, poset, histories):
        histories = frozenset(tuple(q) for q in histories)
        return cls(poset, len(next(iter(histories))), explicit=histories)

    def size(self):
        if self.explicit is not None:
            return len(self.explicit)
        out = 1
        for mask in self.factors:
            out *= mask.bit_count()
        return out

    def members(self, cap=None):
        """Expand to a frozenset of histories; refuses past the cap."""
        if self.explicit is not None:
            return self.explicit
        if cap is None:
            cap = enumeration_cap(PHI_CAP_DEFAULT)
        if self.size() > cap:
            raise CapacityError(
                f"family has {self.size()} histories, above the cap of {cap}; "
                "keep it in product form"
            )
        axes = [tuple(bits(mask)) for mask in self.factors]
        return frozenset(itertools.product(*axes))

    def contains(self, q):
        if len(q) != self.m:
            return False
        if self.explicit is not None:
            return tuple(q) in self.explicit
        return all((mask >> a) & 1 for a, mask in zip(q, self.factors))

    def fiber_union(self, ts):
        """Union of every member's values over the given instants."""
        out = 0
        if self.factors is not None:
            for t in ts:
                out |= self.factors[t]
        else:
            for q in self.explicit:
                for t in ts:
                    out |= 1 << q[t]
        return out

    def prime(self):
        poset = self.poset
        if self.factors is not None:
            return Family.product(poset, prime_setval(poset, self.factors))
        return Family.of(
            poset, (prime_valuation(poset, q) for q in self.explicit)
        )

    def same_histories(self, other, cap=None):
        """Extensional equality (expands product forms; cap applies)."""
        if self.poset is not other.poset or self.m != other.m:
            return False
        if self.factors is not None and other.factors is not None:
            return self.factors == other.factors
        return self.members(cap) == other.members(cap)

    def __repr__(self):
        if self.factors is not None:
            inner = ",".join(
                "{" + ",".join(self.poset.subset_names(m)) + "}"
                for m in self.factors
            )
            return f"Family<product {inner}>"
        return f"Family<{len(self.explicit)} histories>"


def phi(poset, x):
    """All exact histories running inside a set-valued history."""
    x = tuple(x)
    for mask in x:
        if mask == 0:
            raise ValueError("phi of a history with an empty value")
    return Family.product(poset, x)


def tense_family(poset, frame, op, fam):
    """Apply one operator to a family of histories."""
    if fam.m != frame.m:
        raise IdentityError("family does not cover the frame's instants")
    out = []
    for s in range(frame.m):
        gathered = fam.fiber_union(_fiber(frame, op, s))
        out.append(_extremal(poset, op, gathered))
    return tuple(out)


def star(poset, frame, outer, inner, q, cross_check=False):
    """Composite operator: outer over phi of inner's set-valued result."""
    mid = tense(poset, frame, inner, q)
    fam = phi(poset, mid)
    out = tense_family(poset, frame, outer, fam)
    if cross_check:
        expanded = Family.of(poset, fam.members())
        if tense_family(poset, frame, outer, expanded) != out:
            raise AssertionError(
                "product-form evaluation disagrees with explicit expansion"
            )
    return out


def tense_setval(poset, frame, op, x):
    """Operator applied through phi to a set-valued history."""
    check_setval(poset, frame, x)
    return tense_family(poset, frame, op, phi(poset, x))
