"""Membership verdicts shared by the point and matrix tests."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .config import ToleranceConfig


class Category(str, enum.Enum):
    INTERIOR = "INTERIOR"
    CLOSURE = "CLOSURE"
    OUTSIDE = "OUTSIDE"
    UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class MembershipVerdict:
    """Category plus signed margin.

    ``margin`` is positive inside, negative outside; its scale depends on
    the criterion that produced it (recorded in ``criterion``).
    """

    category: Category
    margin: float
    witness: tuple | None = None
    criterion: str = ""

    def to_dict(self) -> dict:
        out = {"category": self.category.value, "margin": self.margin,
               "witness": None if self.witness is None else list(self.witness)}
        if self.criterion:
            out["criterion"] = self.criterion
        return out


def categorize(margin: float, closed: bool, cfg: ToleranceConfig,
               witness=None, criterion: str = "") -> MembershipVerdict:
    band = cfg.undetermined_band
    if margin > band:
        cat = Category.INTERIOR
    elif margin < -band:
        cat = Category.OUTSIDE
    elif closed:
        cat = Category.CLOSURE
    else:
        cat = Category.UNDETERMINED
    return MembershipVerdict(cat, float(margin), witness, criterion)
