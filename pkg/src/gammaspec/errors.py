"""Exception hierarchy.

Input problems derive from :class:`InputError`, numerical breakdowns from
:class:`NumericalFailure`. The CLI maps them to exit codes 2 and 3.
"""

from __future__ import annotations


class GammaError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class InputError(GammaError):
    """The arguments are malformed or violate a stated precondition."""


class NumericalFailure(GammaError):
    """The computation itself cannot be completed for these inputs."""


class DimensionMismatch(InputError):
    pass


class NotAContraction(InputError):
    pass


class NotCommuting(InputError):
    pass


class NotNormal(InputError):
    pass


class DenominatorVanishes(InputError):
    pass


class InvalidBlockUnitary(InputError):
    pass


class InvalidCoefficients(InputError):
    pass


class UnknownSuite(InputError):
    pass


class ResolventSingular(NumericalFailure):
    pass


class NotSolvable(NumericalFailure):
    pass


class NotReducing(NumericalFailure):
    pass
