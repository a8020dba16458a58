"""Finite orthomodular posets.

An OmpPoset is a finite bounded poset with an antitone involution that is
a complementation, closed under joins of orthogonal pairs and satisfying
the orthomodular identity. Joins and meets are partial; everything here
is honest about undefinedness.

Subsets of the carrier are int bitmasks (bit i = element i). The Subset
wrapper carries the owning poset so mixed-poset operations fail loudly.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import IdentityError, ParseError, PartialityError, ValidationError


def bits(mask):
    """Yield the set bit positions of mask in ascending order."""
    mask = int(mask)
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask):
    return bin(mask).count("1")


class Subset:
    """Non-empty-capable subset of one poset's carrier."""

    __slots__ = ("poset", "mask")

    def __init__(self, poset, mask):
        if mask < 0 or mask >> poset.n:
            raise ValueError(f"mask {mask:#x} out of range for {poset.n} elements")
        self.poset = poset
        self.mask = mask

    def __iter__(self):
        return bits(self.mask)

    def __len__(self):
        return popcount(self.mask)

    def __contains__(self, idx):
        return bool((self.mask >> idx) & 1)

    def __eq__(self, other):
        return (
            isinstance(other, Subset)
            and self.poset is other.poset
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((id(self.poset), self.mask))

    @property
    def names(self):
        return tuple(self.poset.names[i] for i in self)

    def prime(self):
        return Subset(self.poset, self.poset.inv_mask(self.mask))

    def __repr__(self):
        return "{" + ",".join(self.names) + "}"


@dataclass
class AxiomCheck:
    axiom: str
    passed: bool
    witness: str | None = None

    def line(self):
        status = "ok" if self.passed else "FAIL"
        tail = f"  [{self.witness}]" if self.witness else ""
        return f"{status:4}  {self.axiom}{tail}"


@dataclass
class OmpReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def summary(self):
        return "\n".join(c.line() for c in self.checks)


class OmpPoset:
    """Carrier indexed 0..n-1 in declaration order; leq is an n x n bool matrix."""

    def __init__(self, names, leq, inv):
        names = list(names)
        n = len(names)
        leq = np.asarray(leq, dtype=bool)
        if leq.shape != (n, n):
            raise ValueError(f"order matrix must be {n}x{n}")
        inv = list(inv)
        if sorted(inv) != list(range(n)):
            raise ValueError("involution must be a permutation of the carrier")
        if len(set(names)) != n:
            raise ValueError("duplicate element names")
        self.n = n
        self.names = names
        self.leq = leq
        self.leq.setflags(write=False)
        self.inv = inv
        self._index = {name: i for i, name in enumerate(names)}

        self.full_mask = (1 << n) - 1
        self.up = [self._column_mask(leq[i, :]) for i in range(n)]
        self.down = [self._column_mask(leq[:, i]) for i in range(n)]
        self.sup = [self.up[i] & ~(1 << i) for i in range(n)]
        self.sdown = [self.down[i] & ~(1 << i) for i in range(n)]

        bottoms = [i for i in range(n) if self.up[i] == self.full_mask]
        tops = [i for i in range(n) if self.down[i] == self.full_mask]
        self.bottom = bottoms[0] if len(bottoms) == 1 else None
        self.top = tops[0] if len(tops) == 1 else None

        self._minu_cache = {}
        self._maxl_cache = {}
        self._join_cache = {}
        self._meet_cache = {}
        self._tables = None

    @staticmethod
    def _column_mask(row):
        mask = 0
        for i in np.flatnonzero(row):
            mask |= 1 << int(i)
        return mask

    # -- names ----------------------------------------------------------

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no element named {name!r}") from None

    def name(self, idx):
        return self.names[idx]

    def subset(self, *members):
        """Build a Subset from element names or indices."""
        mask = 0
        for m in members:
            mask |= 1 << (m if isinstance(m, int) else self.index(m))
        return Subset(self, mask)

    def subset_names(self, mask):
        return tuple(self.names[i] for i in bits(mask))

    def check_owns(self, subset):
        if subset.poset is not self:
            raise IdentityError("subset belongs to a different poset")

    @property
    def word_sized(self):
        return self.n <= 63

    def tables(self):
        """int64 views of the up/down/strict masks for the batch kernels."""
        if self._tables is None:
            if not self.word_sized:
                raise ValueError("carrier too large for single-word kernels")
            as64 = lambda xs: np.array(xs, dtype=np.int64)
            self._tables = {
                "up": as64(self.up),
                "down": as64(self.down),
                "sup": as64(self.sup),
                "sdown": as64(self.sdown),
            }
        return self._tables

    # -- order ----------------------------------------------------------

    def leq_idx(self, a, b):
        return bool(self.leq[a, b])

    def inv_idx(self, a):
        return self.inv[a]

    def inv_mask(self, mask):
        out = 0
        for b in bits(mask):
            out |= 1 << self.inv[b]
        return out

    def orthogonal(self, a, b):
        """a is under the complement of b (symmetric by antitonicity)."""
        return self.leq_idx(a, self.inv[b])

    # -- cones and extremal elements -------------------------------------

    def upper_cone_mask(self, mask):
        """Common upper bounds; the empty set's cone is the whole carrier."""
        out = self.full_mask
        for b in bits(mask):
            out &= self.up[b]
        return out

    def lower_cone_mask(self, mask):
        out = self.full_mask
        for b in bits(mask):
            out &= self.down[b]
        return out

    def min_of_mask(self, mask):
        """Minimal elements; empty input is a contract violation."""
        if mask == 0:
            raise ValueError("min of the empty set")
        out = 0
        for b in bits(mask):
            if self.sdown[b] & mask == 0:
                out |= 1 << b
        return out

    def max_of_mask(self, mask):
        if mask == 0:
            raise ValueError("max of the empty set")
        out = 0
        for b in bits(mask):
            if self.sup[b] & mask == 0:
                out |= 1 << b
        return out

    def min_upper_mask(self, mask):
        """Minimal common upper bounds (non-empty: the top always bounds)."""
        try:
            return self._minu_cache[mask]
        except KeyError:
            out = self.min_of_mask(self.upper_cone_mask(mask))
            self._minu_cache[mask] = out
            return out

    def max_lower_mask(self, mask):
        try:
            return self._maxl_cache[mask]
        except KeyError:
            out = self.max_of_mask(self.lower_cone_mask(mask))
            self._maxl_cache[mask] = out
            return out

    # Subset-level conveniences used by the CLI and tests.

    def upper_cone(self, B):
        self.check_owns(B)
        return Subset(self, self.upper_cone_mask(B.mask))

    def lower_cone(self, B):
        self.check_owns(B)
        return Subset(self, self.lower_cone_mask(B.mask))

    def min_of(self, B):
        self.check_owns(B)
        return Subset(self, self.min_of_mask(B.mask))

    def max_of(self, B):
        self.check_owns(B)
        return Subset(self, self.max_of_mask(B.mask))

    # -- partial lattice operations ---------------------------------------

    def join_idx(self, a, b):
        """Index of sup(a, b), or None when undefined."""
        key = (a, b) if a <= b else (b, a)
        try:
            return self._join_cache[key]
        except KeyError:
            m = self.min_upper_mask((1 << a) | (1 << b))
            out = m.bit_length() - 1 if popcount(m) == 1 else None
            self._join_cache[key] = out
            return out

    def meet_idx(self, a, b):
        key = (a, b) if a <= b else (b, a)
        try:
            return self._meet_cache[key]
        except KeyError:
            m = self.max_lower_mask((1 << a) | (1 << b))
            out = m.bit_length() - 1 if popcount(m) == 1 else None
            self._meet_cache[key] = out
            return out

    def pointwise_join_mask(self, a, mask):
        """{sup(a, b) : b in mask}; raises when any pair has no sup."""
        out = 0
        for b in bits(mask):
            j = self.join_idx(a, b)
            if j is None:
                raise PartialityError("join", self.names[a], self.names[b])
            out |= 1 << j
        return out

    def pointwise_meet_mask(self, a, mask):
        out = 0
        for b in bits(mask):
            m = self.meet_idx(a, b)
            if m is None:
                raise PartialityError("meet", self.names[a], self.names[b])
            out |= 1 << m
        return out

    # -- axioms -----------------------------------------------------------

    def validate(self):
        """Run the full axiom battery and report every check."""
        checks = []
        names = self.names
        leq = self.leq

        order_ok = True
        witness = None
        if not leq.diagonal().all():
            order_ok = False
            i = int(np.flatnonzero(~leq.diagonal())[0])
            witness = f"{names[i]} not <= itself"
        checks.append(AxiomCheck("reflexive", order_ok, witness))

        anti = ~(leq & leq.T) | np.eye(self.n, dtype=bool)
        anti_ok = bool(anti.all())
        witness = None
        if not anti_ok:
            i, j = (int(x[0]) for x in np.nonzero(~anti))
            witness = f"{names[i]} and {names[j]} below each other"
        checks.append(AxiomCheck("antisymmetric", anti_ok, witness))

        closed = leq @ leq
        trans_ok = bool((~closed | leq).all())
        witness = None
        if not trans_ok:
            i, j = (int(x[0]) for x in np.nonzero(closed & ~leq))
            witness = f"{names[i]} <= .. <= {names[j]} but not {names[i]} <= {names[j]}"
        checks.append(AxiomCheck("transitive", trans_ok, witness))

        checks.append(
            AxiomCheck(
                "bounded",
                self.bottom is not None and self.top is not None,
                None
                if self.bottom is not None and self.top is not None
                else "no unique least/greatest element",
            )
        )

        if not all(c.passed for c in checks):
            return OmpReport(checks)

        bad = [a for a in range(self.n) if self.inv[self.inv[a]] != a]
        checks.append(
            AxiomCheck(
                "involution",
                not bad,
                f"{names[bad[0]]}'' differs from {names[bad[0]]}" if bad else None,
            )
        )

        witness = None
        for a in range(self.n):
            for b in bits(self.up[a]):
                if not self.leq_idx(self.inv[b], self.inv[a]):
                    witness = (
                        f"{names[a]} <= {names[b]} but not "
                        f"{names[b]}' <= {names[a]}'"
                    )
                    break
            if witness:
                break
        checks.append(AxiomCheck("antitone", witness is None, witness))

        witness = None
        for a in range(self.n):
            j = self.join_idx(a, self.inv[a])
            m = self.meet_idx(a, self.inv[a])
            if j != self.top or m != self.bottom:
                witness = f"{names[a]} and {names[a]}' do not complement to bounds"
                break
        checks.append(AxiomCheck("complementation", witness is None, witness))

        witness = None
        for a in range(self.n):
            for b in range(self.n):
                if self.leq_idx(a, self.inv[b]) and self.join_idx(a, b) is None:
                    witness = (
                        f"{names[a]} <= {names[b]}' but "
                        f"{names[a]} v {names[b]} undefined"
                    )
                    break
            if witness:
                break
        checks.append(AxiomCheck("orthogonal joins", witness is None, witness))

        witness = None
        for a in range(self.n):
            for b in bits(self.up[a]):
                m = self.meet_idx(b, self.inv[a])
                j = None if m is None else self.join_idx(a, m)
                if j != b:
                    witness = (
                        f"{names[a]} <= {names[b]} but "
                        f"{names[a]} v ({names[b]} ^ {names[a]}') != {names[b]}"
                    )
                    break
            if witness:
                break
        checks.append(AxiomCheck("orthomodular", witness is None, witness))

        witness = None
        for a in range(self.n):
            for b in bits(self.up[a]):
                j = self.join_idx(a, self.inv[b])
                m = None if j is None else self.meet_idx(b, j)
                if m != a:
                    witness = (
                        f"{names[a]} <= {names[b]} but "
                        f"{names[b]} ^ ({names[a]} v {names[b]}') != {names[a]}"
                    )
                    break
            if witness:
                break
        checks.append(AxiomCheck("dual orthomodular", witness is None, witness))

        return OmpReport(checks)


def _closure(names, pairs):
    n = len(names)
    leq = np.eye(n, dtype=bool)
    for a, b in pairs:
        leq[a, b] = True
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])
    return leq


def parse_poset(text, source="<poset>"):
    """Parse the poset text format.

    Directives: element NAME / cover A B / le A B / inv A B /
    bottom NAME / top NAME. '#' starts a comment. The order is the
    reflexive-transitive closure of the cover/le pairs.
    """
    names = []
    seen = {}
    pairs = []
    inv_pairs = []
    declared_bottom = declared_top = None

    def resolve(tok, lineno):
        if tok not in seen:
            raise ParseError(f"unknown element {tok!r}", lineno)
        return seen[tok]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word, args = parts[0], parts[1:]
        if word == "element":
            if len(args) != 1:
                raise ParseError("element takes one name", lineno)
            if args[0] in seen:
                raise ParseError(f"duplicate element {args[0]!r}", lineno)
            seen[args[0]] = len(names)
            names.append(args[0])
        elif word in ("cover", "le"):
            if len(args) != 2:
                raise ParseError(f"{word} takes two names", lineno)
            pairs.append((resolve(args[0], lineno), resolve(args[1], lineno)))
        elif word == "inv":
            if len(args) != 2:
                raise ParseError("inv takes two names", lineno)
            a, b = (resolve(t, lineno) for t in args)
            if a == b:
                raise ParseError(
                    f"inv {args[0]} {args[0]}: an element cannot be its own "
                    "complement",
                    lineno,
                )
            inv_pairs.append((a, b))
        elif word in ("bottom", "top"):
            if len(args) != 1:
                raise ParseError(f"{word} takes one name", lineno)
            if word == "bottom":
                declared_bottom = resolve(args[0], lineno)
            else:
                declared_top = resolve(args[0], lineno)
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)

    if not names:
        raise ParseError(f"{source}: no elements declared")

    inv = [None] * len(names)
    for a, b in inv_pairs:
        for x, y in ((a, b), (b, a)):
            if inv[x] is not None and inv[x] != y:
                raise ParseError(f"conflicting inv for {names[x]!r}")
            inv[x] = y
    missing = [names[i] for i, v in enumerate(inv) if v is None]
    if missing:
        raise ParseError(f"no inv declared for {', '.join(missing)}")

    leq = _closure(names, pairs)
    both = leq & leq.T & ~np.eye(len(names), dtype=bool)
    if both.any():
        i, j = (int(x[0]) for x in np.nonzero(both))
        raise ParseError(f"order has a cycle through {names[i]!r} and {names[j]!r}")

    poset = OmpPoset(names, leq, inv)
    for declared, actual, label in (
        (declared_bottom, poset.bottom, "bottom"),
        (declared_top, poset.top, "top"),
    ):
        if declared is not None and declared != actual:
            raise ParseError(f"declared {label} {names[declared]!r} is not the {label}")
    return poset


def load_poset(path, validate=True):
    with open(path, encoding="utf-8") as fh:
        poset = parse_poset(fh.read(), source=str(path))
    if validate:
        report = poset.validate()
        if not report.ok:
            lines = "; ".join(c.line() for c in report.failures())
            raise ValidationError(f"{path}: {lines}")
    return poset
