"""Exception types shared across the toolkit."""


class RsmaError(Exception):
    """Base class for toolkit failures."""


class FeasibilityError(RsmaError):
    """A design violates a feasibility constraint (power budget or rate shares).

    Attributes:
        constraint: short name of the violated constraint.
        slack: amount by which the constraint is exceeded (positive = violated).
    """

    def __init__(self, constraint: str, slack: float, message: str | None = None):
        self.constraint = constraint
        self.slack = slack
        super().__init__(
            message or f"{constraint} constraint violated by {slack:.6g}"
        )


class ZfInfeasibleError(RsmaError):
    """Zero-forcing is impossible: more users than antennas or rank-deficient channel."""


class OptimizerInitError(RsmaError):
    """No feasible initial design was supplied to an optimizer."""


class OrderTooLargeError(RsmaError):
    """Exhaustive decoding-order enumeration requested beyond the factorial guard."""


class ConfigError(RsmaError):
    """An experiment configuration is invalid.

    Attributes:
        key: dotted path of the offending field, when known.
    """

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")
