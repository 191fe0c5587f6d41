"""Seeded generators for points and tuples used by the verification suites."""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .config import ToleranceConfig, resolve
from .errors import InputError
from .models import (build_pure_isometry, random_model_coeffs5, random_model_coeffs7)
from .mu import E3, E5, E7, mu_estimate, mu_membership, pi_map
from .tuples import Tuple3, Tuple7
from .verdict import Category

__all__ = ["SAMPLE_KINDS", "sample", "interior_matrix", "haar_points", "tetra_contraction",
           "gamma7_unitary"]

SAMPLE_KINDS = ("interior7", "interior5", "boundaryK", "boundaryK1", "tetra_contraction",
                "gamma7_unitary", "pure_isometry7", "pure_isometry5")


def _ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def interior_matrix(structure, rng: np.random.Generator, cfg: ToleranceConfig,
                    level: tuple[float, float] = (0.05, 0.95)) -> np.ndarray:
    """Random matrix rescaled so that its structured singular value is a
    uniform draw from ``level``; halved until the margin clears the band."""
    while True:
        a = _ginibre(rng, structure.n)
        mu = mu_estimate(structure, a, cfg)
        if mu > 0:
            break
    a = a * (rng.uniform(*level) / mu)
    for _ in range(60):
        v = mu_membership(structure, a, closed=False, cfg=cfg)
        if v.category is Category.INTERIOR and v.margin >= cfg.undetermined_band:
            return a
        a = a / 2
    raise AssertionError("rescaling did not reach the interior")  # pragma: no cover


def haar_points(structure, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    return [pi_map(structure, unitary_group.rvs(structure.n, random_state=rng))
            for _ in range(count)]


def tetra_contraction(rng: np.random.Generator, cfg: ToleranceConfig,
                      max_dim: int = 16) -> Tuple3:
    """Direct sum of interior scalar tetrablock points in a random unitary frame."""
    dim = int(rng.integers(1, max_dim + 1))
    pts = np.array([pi_map(E3, interior_matrix(E3, rng, cfg)) for _ in range(dim)])
    w = unitary_group.rvs(dim, random_state=rng) if dim > 1 else np.eye(1)
    return Tuple3(tuple(w @ np.diag(pts[:, k]) @ w.conj().T for k in range(3)))


def gamma7_unitary(rng: np.random.Generator, max_dim: int = 6) -> Tuple7:
    """Diagonal tuple whose joint eigenvalues are images of Haar unitaries."""
    dim = int(rng.integers(1, max_dim + 1))
    pts = np.array(haar_points(E7, dim, rng))
    return Tuple7(tuple(np.diag(pts[:, k]) for k in range(7)))


def sample(kind: str, count: int, seed: int = 0, cfg: ToleranceConfig | None = None,
           **opts) -> list:
    """``count`` seeded draws of the given kind.

    Options: ``dim`` (pure models, default 2), ``n`` (truncation length,
    default 32), ``max_dim`` (tuple kinds).
    """
    cfg = resolve(cfg)
    if kind not in SAMPLE_KINDS:
        raise InputError(f"unknown sample kind {kind!r}", allowed=list(SAMPLE_KINDS))
    if not isinstance(count, (int, np.integer)) or count < 1:
        raise InputError("count must be a positive integer", got=count)
    rng = np.random.default_rng(seed)
    if kind in ("interior7", "interior5"):
        st = E7 if kind == "interior7" else E5
        return [pi_map(st, interior_matrix(st, rng, cfg)) for _ in range(count)]
    if kind == "boundaryK":
        return haar_points(E7, count, rng)
    if kind == "boundaryK1":
        return haar_points(E5, count, rng)
    if kind == "tetra_contraction":
        return [tetra_contraction(rng, cfg, opts.get("max_dim", 16)) for _ in range(count)]
    if kind == "gamma7_unitary":
        return [gamma7_unitary(rng, opts.get("max_dim", 6)) for _ in range(count)]
    d, n = int(opts.get("dim", 2)), int(opts.get("n", 32))
    gen = random_model_coeffs7 if kind == "pure_isometry7" else random_model_coeffs5
    return [build_pure_isometry(gen(d, rng), n, cfg) for _ in range(count)]
