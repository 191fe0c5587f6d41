"""Membership, structured singular values and operator models for the
seven- and five-coordinate domains attached to 3x3 block-scalar
structures."""

from .config import DEFAULT, ToleranceConfig
from .errors import GammaError, InputError, NumericalFailure
from .verdict import Category, MembershipVerdict

__version__ = "0.1.0"

__all__ = ["DEFAULT", "ToleranceConfig", "GammaError", "InputError",
           "NumericalFailure", "Category", "MembershipVerdict"]
