"""Dense complex linear algebra shared by the other modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .config import ToleranceConfig, resolve
from .errors import DimensionMismatch, InputError, NotAContraction, NotCommuting, NotNormal

__all__ = [
    "ResidualCheck", "ResidualReport", "as_cmatrix", "opnorm", "adj",
    "defect_operator", "numerical_radius", "algebraic_residuals",
    "joint_eigen_tuples", "common_frame", "commutator_residual", "golden_max",
]


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert to a square finite complex128 array."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix", shape=m.shape)
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} has non-finite entries")
    return m


def adj(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def opnorm(m: np.ndarray) -> float:
    """Spectral norm; zero for empty matrices."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


@dataclass(frozen=True)
class ResidualCheck:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)

    def to_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual,
                "threshold": self.threshold, "pass": self.passed}


@dataclass
class ResidualReport:
    checks: list[ResidualCheck] = field(default_factory=list)

    def add(self, name: str, residual: float, threshold: float) -> None:
        self.checks.append(ResidualCheck(name, float(residual), float(threshold)))

    def extend(self, other: "ResidualReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(ResidualCheck(prefix + c.name, c.residual, c.threshold))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[ResidualCheck]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> ResidualCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def worst(self, prefix: str = "") -> float:
        vals = [c.residual for c in self.checks if c.name.startswith(prefix)]
        return max(vals) if vals else 0.0

    def to_dict(self) -> list[dict]:
        return [c.to_dict() for c in self.checks]


def defect_operator(t, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Positive square root of ``I - T*T``.

    Eigenvalues of ``I - T*T`` lying in ``(-rank_tol, 0)`` are treated as
    rounding and clamped to zero; anything more negative means ``T`` is
    not a contraction.
    """
    cfg = resolve(cfg)
    t = as_cmatrix(t)
    g = np.eye(t.shape[0]) - adj(t) @ t
    g = (g + adj(g)) / 2
    w, v = np.linalg.eigh(g)
    if w[0] < -cfg.rank_tol:
        raise NotAContraction("I - T*T has a negative eigenvalue", min_eig=float(w[0]))
    w = np.clip(w, 0.0, None)
    d = (v * np.sqrt(w)) @ adj(v)
    return (d + adj(d)) / 2


def golden_max(f, a: float, b: float, iters: int) -> tuple[float, float]:
    """Golden-section search for a local maximum of ``f`` on ``[a, b]``."""
    invphi = (np.sqrt(5.0) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _is_normal(t: np.ndarray, rel: float = 1e-13) -> bool:
    scale = max(opnorm(t), 1.0) ** 2
    return opnorm(adj(t) @ t - t @ adj(t)) <= rel * scale


def numerical_radius(t, cfg: ToleranceConfig | None = None) -> float:
    """max over unit x of |<Tx, x>|.

    Computed as the maximum over theta of the top eigenvalue of the
    Hermitian part of ``exp(i theta) T``: a uniform theta grid, then
    golden-section refinement around the best grid node. Normal inputs
    short-circuit to the spectral radius, which is exact for them.
    """
    cfg = resolve(cfg)
    t = as_cmatrix(t)
    if _is_normal(t):
        return float(np.max(np.abs(np.linalg.eigvals(t))))
    x = (t + adj(t)) / 2
    y = (t - adj(t)) / 2j
    n = cfg.grid_1d
    theta = 2 * np.pi * np.arange(n) / n
    stack = np.cos(theta)[:, None, None] * x - np.sin(theta)[:, None, None] * y
    top = np.linalg.eigvalsh(stack)[:, -1]
    k = int(np.argmax(top))

    def lam(th: float) -> float:
        return float(np.linalg.eigvalsh(np.cos(th) * x - np.sin(th) * y)[-1])

    h = 2 * np.pi / n
    _, best = golden_max(lam, theta[k] - h, theta[k] + h, cfg.refine_iters)
    return max(best, float(top[k]))


def commutator_residual(a: np.ndarray, b: np.ndarray) -> float:
    return opnorm(a @ b - b @ a)


def _family(family) -> list[np.ndarray]:
    if isinstance(family, np.ndarray) and family.ndim == 2:
        family = [family]
    mats = [as_cmatrix(m, f"member {i}") for i, m in enumerate(family)]
    if not mats:
        raise InputError("empty family")
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch("family members have different sizes", dims=sorted(dims))
    return mats


def algebraic_residuals(family, cfg: ToleranceConfig | None = None) -> ResidualReport:
    """Normality, isometry, co-isometry, contraction and commutation residuals."""
    cfg = resolve(cfg)
    mats = _family(family)
    eye = np.eye(mats[0].shape[0])
    rep = ResidualReport()
    for i, m in enumerate(mats):
        mh = adj(m)
        rep.add(f"normal[{i}]", opnorm(mh @ m - m @ mh), cfg.residual_tol)
        rep.add(f"isometry[{i}]", opnorm(mh @ m - eye), cfg.residual_tol)
        rep.add(f"coisometry[{i}]", opnorm(m @ mh - eye), cfg.residual_tol)
        rep.add(f"contraction[{i}]", max(0.0, opnorm(m) - 1.0), cfg.residual_tol)
    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            worst = max(worst, commutator_residual(mats[i], mats[j]))
    rep.add("commute", worst, cfg.commute_tol)
    return rep


def joint_eigen_tuples(family, cfg: ToleranceConfig | None = None,
                       seed: int = 0) -> list[tuple[complex, ...]]:
    """Simultaneous eigenvalue tuples of a commuting normal family.

    A seeded random combination of the members is brought to Schur form;
    for a normal combination with simple spectrum the Schur vectors
    diagonalise every member at once.
    """
    cfg = resolve(cfg)
    mats = _family(family)
    dim = mats[0].shape[0]
    for i, m in enumerate(mats):
        if opnorm(adj(m) @ m - m @ adj(m)) > cfg.residual_tol * max(1.0, opnorm(m) ** 2):
            raise NotNormal(f"member {i} is not normal", index=i)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if commutator_residual(mats[i], mats[j]) > cfg.commute_tol:
                raise NotCommuting(f"members {i} and {j} do not commute", pair=(i, j))
    _, diags = common_frame(mats, seed)
    return [tuple(complex(d[k]) for d in diags) for k in range(dim)]


def common_frame(family: Sequence[np.ndarray], seed: int = 0) -> tuple[np.ndarray, list[np.ndarray]]:
    """Unitary frame from a random combination, plus each member's diagonal in it."""
    mats = _family(family)
    rng = np.random.default_rng(seed)
    coef = rng.standard_normal(len(mats)) + 1j * rng.standard_normal(len(mats))
    combo = sum(c * m for c, m in zip(coef, mats))
    _, q = scipy.linalg.schur(combo, output="complex")
    return q, [np.diag(adj(q) @ m @ q) for m in mats]


def stack_norms(mats: Iterable[np.ndarray]) -> list[float]:
    return [opnorm(m) for m in mats]
