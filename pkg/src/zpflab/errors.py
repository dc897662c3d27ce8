"""Exception and warning types shared across the package."""


class MissingModeError(KeyError):
    """A field mode needed by a response is absent from the realization."""


class DimensionError(ValueError):
    pass


class ParityError(ValueError):
    """Half-integer arithmetic was asked for a parity it does not have."""


class SameLevelError(ValueError):
    pass


class ConfigError(ValueError):
    """Scenario configuration failed validation."""


class TruncationWarning(UserWarning):
    """An identity was evaluated on a level touched by the ladder truncation."""
