"""Exception hierarchy shared by the library and the CLI.

Every error carries a human readable ``detail`` and the process ``exit_code``
the CLI should terminate with.
"""


class KdvError(Exception):
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigurationError(KdvError):
    exit_code = 2


class DomainError(ConfigurationError):
    """A parameter lies outside the domain of a formula (e.g. r <= 0)."""


class DimensionError(ConfigurationError):
    pass


class PreconditionError(ConfigurationError):
    pass


class UndefinedRatioError(PreconditionError):
    pass


class NumericalError(KdvError):
    exit_code = 3


class FactorizationError(NumericalError):
    pass


class InstabilityError(NumericalError):
    pass


class NonContractionError(NumericalError):
    pass


class PropertyViolation(KdvError):
    exit_code = 4

    def __init__(self, detail: str, seed: int = None, reproducer: dict = None):
        super().__init__(detail)
        self.seed = seed
        self.reproducer = reproducer or {}
