"""Error types shared across the engine."""


class OmqlError(Exception):
    """Base class for engine errors."""


class ParseError(OmqlError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(OmqlError):
    """A structure failed its axiom checks at load time."""


class IdentityError(OmqlError):
    """Operands belong to different posets or different time sets."""


class PartialityError(OmqlError):
    """A pointwise join/meet hit an undefined pair."""

    def __init__(self, op, left, right):
        super().__init__(f"{op}({left}, {right}) is undefined")
        self.op = op
        self.left = left
        self.right = right


class EmptyFiberError(OmqlError):
    """A tense operator hit a time point with no related instants."""

    def __init__(self, op, point, direction):
        super().__init__(
            f"{op} undefined at {point}: no {direction} instants (frame is not serial)"
        )
        self.op = op
        self.point = point
        self.direction = direction


class CapacityError(OmqlError):
    """An enumeration would exceed the configured cap."""


class PreconditionError(OmqlError):
    """A command's frame/poset precondition is not met."""
