"""Tiny closed expression language over bound histories.

Prefix syntax, one token per word: the four tense operators, phi, prime,
odot, imp, and names bound to histories. Parentheses are optional noise.
Examples:

    H phi odot p q        the operator H applied through phi to p odot q
    imp H p H q           (H p) imp (H q), pointwise
    prime p               the complemented history

Evaluation produces a set-valued history; exact histories lift to
singletons where a set is needed. Tense operators accept an exact
history or a family (phi result); applying one straight to a set-valued
history is a type error, which keeps the two readings distinct.
"""

from .connectives import imp_setval, odot_setval
from .errors import ParseError
from .tense import (
    Family,
    lift_valuation,
    phi,
    prime_setval,
    prime_valuation,
    tense,
    tense_family,
)

VAL = "val"
SET = "set"
FAM = "fam"


class Node:
    def label(self, tight=False):
        raise NotImplementedError

    def __repr__(self):
        return self.label()


class Var(Node):
    def __init__(self, name):
        self.name = name

    def label(self, tight=False):
        return self.name

    def eval(self, ctx):
        try:
            kind, value = ctx.bindings[self.name]
        except KeyError:
            bound = ", ".join(sorted(ctx.bindings)) or "none"
            raise ParseError(
                f"unbound name {self.name!r}; bound: {bound}"
            ) from None
        return kind, value


class Prime(Node):
    def __init__(self, child):
        self.child = child

    def label(self, tight=False):
        return f"{self.child.label(tight=True)}'"

    def eval(self, ctx):
        kind, value = self.child.eval(ctx)
        if kind == VAL:
            return VAL, prime_valuation(ctx.poset, value)
        if kind == SET:
            return SET, prime_setval(ctx.poset, value)
        return FAM, value.prime()


class Phi(Node):
    def __init__(self, child):
        self.child = child

    def label(self, tight=False):
        return f"φ({self.child.label()})"

    def eval(self, ctx):
        kind, value = self.child.eval(ctx)
        if kind == VAL:
            return FAM, Family.singleton(ctx.poset, value)
        if kind == SET:
            return FAM, phi(ctx.poset, value)
        raise ParseError("phi applied to something already a family")


class Tense(Node):
    def __init__(self, op, child):
        self.op = op
        self.child = child

    def label(self, tight=False):
        return f"{self.op}({self.child.label()})"

    def eval(self, ctx):
        kind, value = self.child.eval(ctx)
        if kind == VAL:
            return SET, tense(ctx.poset, ctx.frame, self.op, value)
        if kind == FAM:
            return SET, tense_family(ctx.poset, ctx.frame, self.op, value)
        raise ParseError(
            f"{self.op} applied to a set-valued history; insert phi"
        )


class Binary(Node):
    symbol = "?"

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def label(self, tight=False):
        body = f"{self.left.label(tight=True)}{self.symbol}{self.right.label(tight=True)}"
        return f"({body})" if tight else body

    def _sides(self, ctx):
        sides = []
        for child in (self.left, self.right):
            kind, value = child.eval(ctx)
            if kind == VAL:
                value = lift_valuation(value)
            elif kind == FAM:
                raise ParseError(
                    f"{self.symbol} needs set-valued operands, not a family"
                )
            sides.append(value)
        return sides


class Odot(Binary):
    symbol = "⊙"

    def eval(self, ctx):
        left, right = self._sides(ctx)
        return SET, odot_setval(ctx.poset, left, right)


class Imp(Binary):
    symbol = "→"

    def eval(self, ctx):
        left, right = self._sides(ctx)
        return SET, imp_setval(ctx.poset, left, right)


class Context:
    """Evaluation context: poset, frame, and name bindings.

    bindings maps a name to (VAL, history tuple) or (SET, mask tuple).
    """

    def __init__(self, poset, frame, bindings):
        self.poset = poset
        self.frame = frame
        self.bindings = bindings


_UNARY = {"phi": Phi, "prime": Prime}
_BINARY = {"odot": Odot, "imp": Imp}


def parse_expr(text):
    tokens = text.replace("(", " ").replace(")", " ").split()
    if not tokens:
        raise ParseError("empty expression")
    node, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise ParseError(f"trailing tokens: {' '.join(tokens[pos:])}")
    return node


def _parse(tokens, pos):
    if pos >= len(tokens):
        raise ParseError("expression ended early")
    tok = tokens[pos]
    if tok in ("P", "F", "H", "G"):
        child, pos = _parse(tokens, pos + 1)
        return Tense(tok, child), pos
    if tok in _UNARY:
        child, pos = _parse(tokens, pos + 1)
        return _UNARY[tok](child), pos
    if tok in _BINARY:
        left, pos = _parse(tokens, pos + 1)
        right, pos = _parse(tokens, pos)
        return _BINARY[tok](left, right), pos
    return Var(tok), pos + 1


def eval_to_setval(node, ctx):
    """Evaluate and coerce to a set-valued history."""
    kind, value = node.eval(ctx)
    if kind == VAL:
        return lift_valuation(value)
    if kind == FAM:
        raise ParseError("expression yields a family; apply an operator to it")
    return value
