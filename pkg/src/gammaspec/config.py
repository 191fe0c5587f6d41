"""Tolerances and grid sizes shared by every routine."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical knobs.

    ``undetermined_band`` is the half-width of the zone around a decision
    threshold inside which membership verdicts are reported as
    UNDETERMINED (or CLOSURE for closed-domain queries).
    """

    commute_tol: float = 1e-8
    residual_tol: float = 1e-8
    rank_tol: float = 1e-9
    grid_1d: int = 512
    grid_2d: int = 128
    refine_iters: int = 60
    undetermined_band: float = 1e-6

    def __post_init__(self):
        for name in ("commute_tol", "residual_tol", "rank_tol", "undetermined_band"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be positive", field=name)
        for name in ("grid_1d", "grid_2d"):
            if getattr(self, name) < 8:
                raise InputError(f"{name} must be at least 8", field=name)
        if self.refine_iters < 0:
            raise InputError("refine_iters must be non-negative", field="refine_iters")
        if self.undetermined_band < self.residual_tol:
            raise InputError("undetermined_band must be >= residual_tol",
                             field="undetermined_band")

    def replace(self, **changes) -> "ToleranceConfig":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_dict(cls, data: dict) -> "ToleranceConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT = ToleranceConfig()


def resolve(cfg: ToleranceConfig | None) -> ToleranceConfig:
    return DEFAULT if cfg is None else cfg
