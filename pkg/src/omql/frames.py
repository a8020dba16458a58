"""Time frames: a finite set of instants with a relation on them.

Tense operators only need, per instant s, the set of instants related
into s (its past fiber) and out of s (its future fiber). Both are
precomputed. Serial means every fiber of either kind is non-empty.
"""

import numpy as np

from .errors import ParseError


class TimeFrame:
    def __init__(self, names, rel):
        names = list(names)
        m = len(names)
        rel = np.asarray(rel, dtype=bool)
        if rel.shape != (m, m):
            raise ValueError(f"relation matrix must be {m}x{m}")
        if len(set(names)) != m:
            raise ValueError("duplicate instant names")
        self.m = m
        self.names = names
        self.rel = rel
        self.rel.setflags(write=False)
        self._index = {name: i for i, name in enumerate(names)}
        self.past = tuple(
            tuple(int(t) for t in np.flatnonzero(rel[:, s])) for s in range(m)
        )
        self.future = tuple(
            tuple(int(t) for t in np.flatnonzero(rel[s, :])) for s in range(m)
        )

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no instant named {name!r}") from None

    def is_serial(self):
        return all(self.past) and all(self.future)

    def is_reflexive(self):
        return bool(self.rel.diagonal().all())

    def is_transitive(self):
        return bool((~(self.rel @ self.rel) | self.rel).all())

    def is_quasiorder(self):
        return self.is_reflexive() and self.is_transitive()

    def pairs(self):
        return [
            (self.names[s], self.names[t])
            for s in range(self.m)
            for t in range(self.m)
            if self.rel[s, t]
        ]

    def __repr__(self):
        return f"TimeFrame({self.names}, {len(self.pairs())} arrows)"


def chain_frame(m, names=None):
    """Instants 1..m under the reflexive 'no later than' relation."""
    if names is None:
        names = [str(i + 1) for i in range(m)]
    rel = np.fromfunction(lambda s, t: s <= t, (m, m))
    return TimeFrame(names, rel)


def parse_frame(text, source="<frame>"):
    """Parse the frame text format: time NAME / rel FROM TO, # comments."""
    names = []
    seen = {}
    arrows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word, args = parts[0], parts[1:]
        if word == "time":
            if len(args) != 1:
                raise ParseError("time takes one name", lineno)
            if args[0] in seen:
                raise ParseError(f"duplicate instant {args[0]!r}", lineno)
            seen[args[0]] = len(names)
            names.append(args[0])
        elif word == "rel":
            if len(args) != 2:
                raise ParseError("rel takes two names", lineno)
            for tok in args:
                if tok not in seen:
                    raise ParseError(f"unknown instant {tok!r}", lineno)
            arrows.append((seen[args[0]], seen[args[1]]))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)
    if not names:
        raise ParseError(f"{source}: no instants declared")
    rel = np.zeros((len(names), len(names)), dtype=bool)
    for s, t in arrows:
        rel[s, t] = True
    return TimeFrame(names, rel)


def load_frame(path):
    with open(path, encoding="utf-8") as fh:
        return parse_frame(fh.read(), source=str(path))
