"""Polynomial falsifier for the spectral-set property.

For a tuple ``T`` and a polynomial ``p`` the check is
``||p(T)|| <= sup |p|`` over the closed domain. The supremum is estimated
from below on a cloud of domain points (images of unitaries, of diagonal
unitaries and of norm-one matrices) followed by local ascent over the
unitary group, so a reported violation may be spurious only if the cloud
misses the true supremum by more than the band.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.optimize
from scipy.stats import unitary_group

from .config import ToleranceConfig, resolve
from .errors import InputError
from .linalg import ResidualReport, opnorm
from .mu import E5, E7, pi_stack
from .tuples import ClassificationReport, OperatorTuple, Tuple5, Tuple7

__all__ = ["Polynomial", "random_polynomials", "von_neumann_probe", "sampled_sup"]


@dataclass(frozen=True)
class Polynomial:
    """Sum of ``coef * x^alpha`` over ``terms = ((coef, alpha), ...)``."""

    n_vars: int
    terms: tuple

    @property
    def degree(self) -> int:
        return max(sum(a) for _, a in self.terms)

    def eval_points(self, xs: np.ndarray) -> np.ndarray:
        xs = np.atleast_2d(np.asarray(xs, dtype=complex))
        out = np.zeros(xs.shape[0], dtype=complex)
        for c, alpha in self.terms:
            out += c * np.prod(xs ** np.asarray(alpha), axis=1)
        return out

    def eval_tuple(self, ops) -> np.ndarray:
        dim = ops[0].shape[0]
        powers: dict = {}

        def power(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = np.eye(dim) if k == 0 else power(i, k - 1) @ ops[i]
            return powers[(i, k)]

        out = np.zeros((dim, dim), dtype=complex)
        for c, alpha in self.terms:
            mono = np.eye(dim, dtype=complex)
            for i, k in enumerate(alpha):
                if k:
                    mono = mono @ power(i, k)
            out += c * mono
        return out

    def to_dict(self) -> dict:
        return {"n_vars": self.n_vars,
                "terms": [[[c.real, c.imag], list(a)] for c, a in self.terms]}


def random_polynomials(n_vars: int, count: int, degree: int = 3, seed: int = 0
                       ) -> list[Polynomial]:
    """The coordinate functions followed by ``count`` sparse random polynomials
    of degree at most ``degree`` with unit-scale complex coefficients."""
    rng = np.random.default_rng(seed)
    polys = [Polynomial(n_vars, ((1 + 0j, tuple(int(i == j) for j in range(n_vars))),))
             for i in range(n_vars)]
    monos = [a for a in itertools.product(range(degree + 1), repeat=n_vars)
             if 0 < sum(a) <= degree]
    for _ in range(count):
        k = int(rng.integers(1, 5))
        idx = rng.choice(len(monos), size=k, replace=False)
        coef = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        coef /= np.abs(coef).sum()
        polys.append(Polynomial(n_vars, tuple((complex(c), monos[i]) for c, i in zip(coef, idx))))
    return polys


def _structure(n_vars: int):
    if n_vars == 7:
        return E7
    if n_vars == 5:
        return E5
    raise InputError("polynomials must be in 5 or 7 variables")


@lru_cache(maxsize=8)
def _cloud(n_vars: int, seed: int, n_haar: int):
    """Domain points and the unitaries behind the first ``n_haar`` of them."""
    st = _structure(n_vars)
    rng = np.random.default_rng(seed)
    us = unitary_group.rvs(3, size=n_haar, random_state=rng)
    grid = 2 * np.pi * np.arange(12) / 12
    diags = np.array([np.diag(np.exp(1j * np.array(t))) for t in itertools.product(grid, repeat=3)])
    g = rng.standard_normal((n_haar // 4, 3, 3)) + 1j * rng.standard_normal((n_haar // 4, 3, 3))
    g /= np.linalg.norm(g, 2, axis=(1, 2))[:, None, None]
    pts = np.concatenate([pi_stack(st, us), pi_stack(st, diags), pi_stack(st, g)])
    return pts, us


def _herm(params: np.ndarray) -> np.ndarray:
    h = np.zeros((3, 3), dtype=complex)
    h[np.diag_indices(3)] = params[:3]
    iu = np.triu_indices(3, 1)
    h[iu] = params[3:6] + 1j * params[6:9]
    return h + np.triu(h, 1).conj().T


@lru_cache(maxsize=4096)
def _sup_cached(poly: Polynomial, seed: int, n_haar: int, iters: int) -> float:
    st = _structure(poly.n_vars)
    pts, us = _cloud(poly.n_vars, seed, n_haar)
    vals = np.abs(poly.eval_points(pts))
    best = float(vals.max())
    for k in np.argsort(vals[:n_haar])[::-1][:2]:
        u0 = us[k]

        def neg(prm):
            u = u0 @ scipy.linalg.expm(1j * _herm(prm))
            return -abs(poly.eval_points(pi_stack(st, u[None]))[0])

        res = scipy.optimize.minimize(neg, np.zeros(9), method="Nelder-Mead",
                                      options={"maxiter": iters, "xatol": 1e-10, "fatol": 1e-13,
                                               "initial_simplex": np.vstack([np.zeros(9),
                                                                             0.05 * np.eye(9)])})
        best = max(best, -float(res.fun))
    return best


def sampled_sup(poly: Polynomial, seed: int = 0, n_haar: int = 2000, iters: int = 300) -> float:
    """Lower estimate of ``sup |poly|`` over the closed domain."""
    return _sup_cached(poly, seed, n_haar, iters)


def von_neumann_probe(tup, n_polys: int = 50, degree: int = 3, seed: int = 0,
                      cfg: ToleranceConfig | None = None, n_haar: int = 2000,
                      polys: list[Polynomial] | None = None) -> ClassificationReport:
    """Compare ``||p(T)||`` with the sampled supremum of ``|p|``.

    ``verdict`` false means some polynomial exceeded the sampled supremum
    by more than the band, which refutes the spectral-set property up to
    the accuracy of the sampled supremum.
    """
    cfg = resolve(cfg)
    if isinstance(tup, Tuple7):
        n_vars = 7
    elif isinstance(tup, Tuple5):
        n_vars = 5
    else:
        raise InputError("von_neumann_probe needs a Tuple7 or Tuple5")
    if not isinstance(tup, OperatorTuple):
        raise InputError("expected an operator tuple")
    tup.require_commuting(cfg)
    if polys is None:
        polys = random_polynomials(n_vars, n_polys, degree, seed)
    rep = ResidualReport()
    worst, violations = 0.0, []
    for k, p in enumerate(polys):
        val = opnorm(p.eval_tuple(tup.ops))
        sup = sampled_sup(p, seed, n_haar)
        excess = val - sup
        worst = max(worst, excess)
        rep.add(f"poly[{k}]", max(0.0, excess), cfg.undetermined_band)
        if excess > cfg.undetermined_band:
            violations.append({"index": k, "norm": val, "sampled_sup": sup,
                               "polynomial": p.to_dict()})
    return ClassificationReport(rep.passed, rep,
                                info={"worst_excess": worst, "violations": violations})
