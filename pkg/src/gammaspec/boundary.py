"""Candidate distinguished-boundary sets and their slice descriptions.

``K`` lives in seven coordinates, ``K1`` in five. Both are cut out by a
few conjugate-linear relations, a unimodular last coordinate and
membership in the closed domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import ToleranceConfig, resolve
from .errors import DenominatorVanishes, InputError
from .linalg import ResidualReport, golden_max
from .membership import as_point, membership, slice_map

__all__ = ["BoundaryReport", "k_membership", "k1_membership", "boundary_slice_check",
           "btetra_residual", "bsym_residual"]

SLICE_CHECKS = ("BW7", "BW5", "BSYM", "BTETRA")


@dataclass
class BoundaryReport:
    in_set: bool
    residuals: ResidualReport
    slice_failures: list | None = None
    agrees_with_relations: bool | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"in_set": self.in_set, "residuals": self.residuals.to_dict()}
        if self.slice_failures is not None:
            out["slice_failures"] = self.slice_failures
        if self.agrees_with_relations is not None:
            out["agrees_with_relations"] = self.agrees_with_relations
        if self.notes:
            out["notes"] = self.notes
        return out


def _closure_residual(domain: str, x, cfg: ToleranceConfig) -> tuple[float, float]:
    v = membership(domain, x, closed=True, cfg=cfg)
    return max(0.0, -v.margin), cfg.undetermined_band


def k_membership(x, cfg: ToleranceConfig | None = None) -> BoundaryReport:
    """Relations defining ``K`` (both relation triples) plus closure membership."""
    cfg = resolve(cfg)
    x1, x2, x3, x4, x5, x6, x7 = as_point(x, 7)
    c = np.conj
    rep = ResidualReport()
    tol = cfg.residual_tol
    rep.add("|x7|=1", abs(abs(x7) - 1), tol)
    rep.add("x1=conj(x6)x7", abs(x1 - c(x6) * x7), tol)
    rep.add("x3=conj(x4)x7", abs(x3 - c(x4) * x7), tol)
    rep.add("x5=conj(x2)x7", abs(x5 - c(x2) * x7), tol)
    rep.add("x2=conj(x5)x7", abs(x2 - c(x5) * x7), tol)
    rep.add("x4=conj(x3)x7", abs(x4 - c(x3) * x7), tol)
    rep.add("closed_domain", *_closure_residual("GAMMA7", x, cfg))
    return BoundaryReport(rep.passed, rep)


def k1_membership(x, cfg: ToleranceConfig | None = None) -> BoundaryReport:
    """Relations defining ``K1`` plus closure membership."""
    cfg = resolve(cfg)
    x1, x2, x3, y1, y2 = as_point(x, 5)
    c = np.conj
    rep = ResidualReport()
    tol = cfg.residual_tol
    rep.add("|x3|=1", abs(abs(x3) - 1), tol)
    rep.add("x1=conj(y2)x3", abs(x1 - c(y2) * x3), tol)
    rep.add("x2=conj(y1)x3", abs(x2 - c(y1) * x3), tol)
    rep.add("closed_domain", *_closure_residual("GAMMA5", x, cfg))
    return BoundaryReport(rep.passed, rep)


def btetra_residual(p) -> float:
    """Distance-like residual from the tetrablock distinguished boundary."""
    x1, x2, x3 = as_point(p, 3)
    c = np.conj
    return float(max(abs(x1 - c(x2) * x3), abs(x2 - c(x1) * x3),
                     abs(abs(x3) - 1), max(0.0, abs(x2) - 1)))


def bsym_residual(p) -> float:
    """Residual from the symmetrized-bidisc distinguished boundary."""
    s, q = as_point(p, 2)
    return float(max(abs(s - np.conj(s) * q), abs(abs(q) - 1), max(0.0, abs(s) - 2)))


def _disc_samples(cfg: ToleranceConfig, closed_circle: bool) -> np.ndarray:
    if closed_circle:
        return np.exp(2j * np.pi * np.arange(cfg.grid_1d) / cfg.grid_1d)
    n_ang = max(8, cfg.grid_1d // 8)
    radii = np.linspace(0.0, 0.98, 8)
    ang = np.exp(2j * np.pi * np.arange(n_ang) / n_ang)
    return np.concatenate([[0j], (radii[1:, None] * ang[None, :]).reshape(-1)])


def _slice_sweep(variant: str, x: np.ndarray, on_circle: bool, cfg: ToleranceConfig
                 ) -> tuple[float, list]:
    """Worst boundary residual of a slice family over circle or disc samples."""
    failures: list = []
    worst = 0.0
    zs = _disc_samples(cfg, on_circle)

    def res(z):
        try:
            return btetra_residual(slice_map(variant, z, x, cfg))
        except DenominatorVanishes:
            return None

    vals = []
    for z in zs:
        r = res(z)
        if r is None:
            failures.append({"slice": variant, "z": [z.real, z.imag], "reason": "denominator"})
            vals.append(-np.inf)
        else:
            vals.append(r)
    vals = np.array(vals)
    k = int(np.argmax(vals))
    worst = float(vals[k])
    if on_circle and np.isfinite(worst):
        h = 2 * np.pi / len(zs)
        t0 = 2 * np.pi * k / len(zs)

        def f(t):
            r = res(np.exp(1j * t))
            return -np.inf if r is None else r

        t, v = golden_max(f, t0 - h, t0 + h, cfg.refine_iters)
        if v > worst:
            worst, zs_k = v, np.exp(1j * t)
        else:
            zs_k = zs[k]
    else:
        zs_k = zs[k]
    if worst > cfg.residual_tol:
        failures.append({"slice": variant, "z": [zs_k.real, zs_k.imag], "residual": worst})
    return worst, failures


def _check_slices(plan, x, cfg) -> tuple[ResidualReport, list]:
    rep = ResidualReport()
    failures: list = []
    for variant, on_circle in plan:
        worst, fails = _slice_sweep(variant, x, on_circle, cfg)
        domain = "circle" if on_circle else "disc"
        rep.add(f"{variant}_on_{domain}", worst, cfg.residual_tol)
        failures.extend(fails)
    return rep, failures


def boundary_slice_check(variant: str, point, cfg: ToleranceConfig | None = None) -> BoundaryReport:
    """Boundary tests through slices into the tetrablock boundary.

    BSYM and BTETRA are the scalar boundary relations of the two small
    domains. BW7 and BW5 sample the slice families over the circle or the
    disc according to which denominators can vanish on the circle, and
    report whether the outcome agrees with the algebraic relations.
    """
    cfg = resolve(cfg)
    tol = cfg.residual_tol
    if variant == "BSYM":
        rep = ResidualReport()
        rep.add("boundary_sym", bsym_residual(point), tol)
        return BoundaryReport(rep.passed, rep)
    if variant == "BTETRA":
        rep = ResidualReport()
        rep.add("boundary_tetra", btetra_residual(point), tol)
        return BoundaryReport(rep.passed, rep)
    if variant == "BW7":
        x = as_point(point, 7)
        a2, a4 = abs(x[1]), abs(x[3])
        rep = ResidualReport()
        rep.add("|x2|<=1", max(0.0, a2 - 1), tol)
        rep.add("|x4|<=1", max(0.0, a4 - 1), tol)
        plan = []
        on2, on4 = abs(a2 - 1) <= tol, abs(a4 - 1) <= tol
        if rep.passed:
            if not on2 and not on4:
                plan = [("ZT", True), ("YT", True)]
            else:
                if on4:
                    plan.append(("ZT", False))
                if on2:
                    plan.append(("YT", False))
        sl, failures = _check_slices(plan, x, cfg)
        rep.extend(sl)
        algebraic = k_membership(x, cfg).in_set
        return BoundaryReport(rep.passed, rep, failures, rep.passed == algebraic)
    if variant == "BW5":
        x = as_point(point, 5)
        a1 = abs(x[3])
        rep = ResidualReport()
        rep.add("|y1|<=2", max(0.0, a1 - 2), tol)
        plan = [("P5", abs(a1 - 2) > tol)] if rep.passed else []
        sl, failures = _check_slices(plan, x, cfg)
        rep.extend(sl)
        algebraic = k1_membership(x, cfg).in_set
        return BoundaryReport(rep.passed, rep, failures, rep.passed == algebraic)
    raise InputError(f"unknown boundary check {variant!r}", allowed=list(SLICE_CHECKS))
