"""Exception types shared across the library."""


class NonlinearDiscountingError(Exception):
    """Base class for library-specific failures."""


class InfeasibleDiversificationError(NonlinearDiscountingError):
    """The requested confidence level cannot be met at any contracted size."""


class CapacityExhaustedError(NonlinearDiscountingError):
    """A zero-survival capacity step was hit before the target amount was funded."""


class BracketFailureError(NonlinearDiscountingError):
    """A root-finding bracket does not change sign."""


class ConfigError(NonlinearDiscountingError):
    """Invalid experiment configuration.

    ``field`` holds a dotted path into the config (e.g. ``"kernel.values"``)
    so CLI errors can point at the offending entry.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
