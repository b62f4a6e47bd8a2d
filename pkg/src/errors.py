"""Exceptions raised across the razor toolkit."""
from typing import Iterable, Optional


class RazorError(Exception):
    """Base class for every error raised by this package."""


class InvalidDagError(RazorError, ValueError):
    """A graph violates the DAG invariants (range, self-loop, double edge)."""


class CycleError(InvalidDagError):
    """A directed cycle was found where a DAG was expected."""

    def __init__(self, cycle: Optional[Iterable] = None):
        self.cycle = list(cycle) if cycle is not None else None
        message = "graph contains a directed cycle"
        if self.cycle:
            message += f": {self.cycle}"
        super().__init__(message)


class DimensionMismatchError(RazorError, ValueError):
    """Two objects disagree on the number of variables."""

    def __init__(self, left: int, right: int, what: str = "vertex counts"):
        self.left = left
        self.right = right
        super().__init__(f"mismatched {what}: {left} != {right}")


class CeilingExceededError(RazorError, ValueError):
    """A request exceeds a configured enumeration or table ceiling."""


class NotMarkovianError(RazorError, ValueError):
    """A DAG entails a CI that the independence model does not contain."""

    def __init__(self, violating):
        self.violating = violating
        super().__init__(f"DAG is not Markovian: {violating} is entailed but not in the model")


class NotCoveredError(RazorError, ValueError):
    """An edge reversal was requested on an edge that is not covered."""


class MissingRangesError(RazorError, ValueError):
    """A parametric razor was requested without variable ranges."""


class InvalidModelError(RazorError, ValueError):
    """A multinomial model or joint table is malformed."""


class UnknownExampleError(RazorError, KeyError):
    """A catalog id was not recognised."""

    def __init__(self, example_id: str, valid: Iterable[str]):
        self.example_id = example_id
        self.valid = sorted(valid)
        super().__init__(f"unknown example {example_id!r}; valid ids: {', '.join(self.valid)}")

    def __str__(self) -> str:
        return self.args[0]


class FormatError(RazorError, ValueError):
    """A text file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ChickeringSearchError(RazorError):
    """The bounded transformation search failed where a sequence must exist."""


class WitnessUniquenessError(RazorError):
    """A parameterizing set has more than one witness vertex."""

    def __init__(self, members: Iterable[int], witnesses: Iterable[int]):
        self.members = sorted(members)
        self.witnesses = list(witnesses)
        super().__init__(f"{self.members} has witnesses {self.witnesses}")
