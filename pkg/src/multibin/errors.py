import os


class MultibinError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(MultibinError, ValueError):
    """Estimates on different scales (or cardinalities) were combined."""


class StructuralError(MultibinError, ValueError):
    """A solution or relation refers to ids that do not exist."""


class InfeasibleError(MultibinError):
    def __init__(self, message, culprits=()):
        super().__init__(message)
        self.culprits = tuple(culprits)


class SizeLimitError(MultibinError):
    """Instance too large for an exact solver; callers fall back to heuristics."""

    def __init__(self, what, size, limit):
        super().__init__(f"{what}: size {size} exceeds exact limit {limit}")
        self.size = size
        self.limit = limit


class PrecedenceCycleError(MultibinError, ValueError):
    pass


class SchemaError(MultibinError, ValueError):
    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def exact_limit(default: int) -> int:
    """Item-count cap for exact solvers, overridable by ``MULTIBIN_EXACT_LIMIT``."""
    raw = os.environ.get("MULTIBIN_EXACT_LIMIT")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default


def check_limit(what: str, size: int, default: int) -> None:
    limit = exact_limit(default)
    if size > limit:
        raise SizeLimitError(what, size, limit)
