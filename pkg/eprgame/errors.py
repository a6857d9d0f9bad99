"""
Exceptions raised by eprgame.
"""

from fractions import Fraction
from pathlib import Path
from typing import Optional


class ProbabilityRangeError(ValueError):
    """
    A probability is outside the closed unit interval.
    """


class InvalidInputError(ValueError):
    """
    A distribution does not satisfy the precondition of an operation.
    """


class InfeasibleInputError(InvalidInputError):
    """
    Completion of the independent probabilities produced an invalid entry.
    """

    def __init__(self, index: int, value: Fraction):
        """
        Name the offending entry.
        """
        self.index = index
        self.value = value
        super().__init__(
            f"Completed entry p{index} = {value} is outside [0, 1]."
        )


class SamplingError(RuntimeError):
    """
    No feasible sample was drawn within the rejection budget.
    """

    def __init__(self, attempts: int):
        """
        Record the number of rejected attempts.
        """
        self.attempts = attempts
        super().__init__(f"No feasible sample after {attempts} attempts.")


class InfeasibleProgramError(RuntimeError):
    """
    Linear program has no optimum.
    """


class InputFormatError(ValueError):
    """
    Malformed input file with a line and column diagnostic.
    """

    def __init__(
        self, message: str, line: int, column: int, path: Optional[Path] = None
    ):
        """
        Store location of the error.
        """
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        """
        Render as path:line:column: message.
        """
        location = "<input>" if self.path is None else str(self.path)
        return f"{location}:{self.line}:{self.column}: {self.message}"
