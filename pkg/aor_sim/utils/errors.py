# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Exception classes."""


class ProfileParseError(ValueError):
    """Raised when a row of a profile file cannot be parsed."""

    def __init__(self, message, line_number=None):
        """Initialize the error.

        Args:
            message (str): Description of the problem.
            line_number (int): 1-based line number in the file.

        """
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super(ProfileParseError, self).__init__(message)
        self.line_number = line_number


class ProfileOrderError(ValueError):
    """Raised when delays are not strictly increasing."""


class EmptyInputError(ValueError):
    """Raised when an input sequence is empty."""


class DomainError(ValueError):
    """Raised when a value is outside of its valid range."""


class DegenerateTraceError(ValueError):
    """Raised when a power delay spectrum has no distinguishable extremum."""


class DegenerateGeometryError(ValueError):
    """Raised on zero-size ellipsoids or coincident points."""


class SamplingStallError(RuntimeError):
    """Raised when rejection sampling stops accepting candidates."""


class GridSpecificationError(ValueError):
    """Raised when bin half-widths do not tile the angular domain."""


class DegenerateDistributionError(ValueError):
    """Raised when a distribution carries no power."""


class NormalizationError(ValueError):
    """Raised when a PDF does not integrate to one."""


class ConfigError(ValueError):
    """Raised when a configuration violates one or more constraints."""

    def __init__(self, problems):
        """Initialize the error.

        Args:
            problems (list): List of "field: reason" strings.

        """
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super(ConfigError, self).__init__(
            "invalid configuration:\n  " + "\n  ".join(self.problems))
