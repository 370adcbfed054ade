"""Exception hierarchy shared by all modules."""


class MingapError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(MingapError, ValueError):
    """Invalid generator or operation parameters."""


class SequenceParseError(ParameterError):
    """A sequence file is empty, malformed, or not strictly increasing."""


class CapacityError(MingapError):
    """A computation would exceed its configured size budget."""


class SequenceOverflowError(CapacityError, OverflowError):
    """A sequence term does not fit in a signed 64-bit integer."""


class HorizonError(MingapError):
    """A first-occurrence map was built with too short a horizon."""


class CollisionError(MingapError):
    """Two billiard eigenvalues coincide exactly."""
