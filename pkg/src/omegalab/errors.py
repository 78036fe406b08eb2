"""Shared exception types.

Every contract violation raises a subclass of ContractError so callers
(and the CLI) can map failure classes to distinct exit codes.
"""


class ContractError(ValueError):
    """A precondition or mode contract was violated."""


class EmptyDomainError(ContractError):
    """An operation was asked for an empty domain (e.g. primes below 2)."""


class CapacityError(ContractError):
    """Requested range exceeds the 64-bit arithmetic the kernels assume."""


class DegenerateWindowError(ContractError):
    """A prime window collapsed to an empty (or unusable) prime set.

    Carries the bounds that produced the collapse so callers can report
    them or retry with overrides.
    """

    def __init__(self, message: str, lower: float | None = None,
                 upper: float | None = None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class UnknownPresetError(ContractError):
    """A CLI preset string did not parse."""
