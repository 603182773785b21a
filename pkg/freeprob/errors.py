"""Exception hierarchy shared by the library, the CLI and the HTTP surface."""
from typing import Optional


class FreeProbError(Exception):
    """Base class. `exit_code` is what the CLI returns when this escapes a command."""

    exit_code = 1


class UsageError(FreeProbError):
    exit_code = 2


class SizeMismatchError(UsageError):
    def __init__(self, left: int, right: int):
        super().__init__(f"size mismatch: {left} != {right}")
        self.left = left
        self.right = right


class CrossingPartitionError(UsageError):
    pass


class ComputationError(FreeProbError):
    exit_code = 1


class SingularGramError(ComputationError):
    def __init__(self, group: str, k: int, N: int, detail: Optional[str] = None):
        msg = f"Gram matrix is singular for group={group} k={k} N={N}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)
        self.group = group
        self.k = k
        self.N = N


class LawRangeError(ComputationError):
    pass


class TransformUndefinedError(ComputationError):
    pass


class ConfigurationLimitError(ComputationError):
    def __init__(self, name: str, value: int, limit: int):
        super().__init__(f"{name}={value} exceeds the configured limit {limit}")
        self.name = name
        self.value = value
        self.limit = limit
