"""Exception hierarchy shared by every module."""


class LabError(Exception):
    """Base class for all library errors."""


class DomainError(LabError, ValueError):
    """Input outside the mathematical domain of an operation."""


class SizeLimitError(LabError):
    """An exhaustive enumeration would exceed the configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds enumeration cap {cap} (set LAB_CAP or --cap)")
        self.what = what
        self.size = size
        self.cap = cap


class DegenerateInputError(DomainError):
    """Input is degenerate (e.g. two equal points asked to span a line)."""


class NotRepresentableError(DomainError):
    """Object has no representation in the requested form (e.g. dual of a vertical line)."""


class PreconditionError(DomainError):
    """A theorem's hypothesis fails for the given input."""


class ConfigInvalidError(DomainError):
    """A configuration violates the invariants its verifier requires."""


class RetryLimitError(LabError):
    """Randomized search gave up after the maximum number of attempts."""


class ConfigError(LabError):
    """Experiment configuration failed schema validation."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
