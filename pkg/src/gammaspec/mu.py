"""Structured singular value for block-scalar structures.

A structure ``E(n; s; r_1..r_s)`` is the set of ``diag(z_1 I_{r_1}, ...,
z_s I_{r_s})``. For such structures

    det(I - A diag(z)) = R_{pi(A)}(z)

where ``pi`` collects sums of principal minors and ``R`` is the defining
polynomial evaluated by :func:`r_eval`. ``mu_E(A) < 1`` exactly when this
polynomial has no zero on the closed polydisc.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import prod

import numpy as np
import scipy.linalg
import scipy.optimize

from .config import ToleranceConfig, resolve
from .errors import DimensionMismatch, InputError
from .linalg import as_cmatrix, golden_max, opnorm
from .verdict import MembershipVerdict, categorize

MU_CAP = 1e6


@dataclass(frozen=True)
class BlockStructure:
    """Block sizes ``r`` with ``sum(r) == n``.

    ``order`` optionally permutes the coordinates away from the canonical
    exponent ordering (used for the five-coordinate convention).
    """

    n: int
    r: tuple[int, ...]
    order: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        r = tuple(int(v) for v in self.r)
        object.__setattr__(self, "r", r)
        if not r or any(v < 1 for v in r):
            raise InputError("block sizes must be positive", r=r)
        if sum(r) != self.n:
            raise InputError("block sizes must sum to n", n=self.n, r=r)
        if self.order is not None:
            order = tuple(tuple(int(a) for a in alpha) for alpha in self.order)
            object.__setattr__(self, "order", order)
            if sorted(order) != sorted(self.canonical_exponents):
                raise InputError("order must permute the exponent set")

    @property
    def s(self) -> int:
        return len(self.r)

    @property
    def N(self) -> int:
        return prod(v + 1 for v in self.r) - 1

    @cached_property
    def canonical_exponents(self) -> tuple[tuple[int, ...], ...]:
        # alpha < beta iff alpha_j0 < beta_j0 at the last differing index j0
        alphas = [a for a in itertools.product(*(range(v + 1) for v in self.r)) if any(a)]
        return tuple(sorted(alphas, key=lambda a: tuple(reversed(a))))

    @property
    def exponents(self) -> tuple[tuple[int, ...], ...]:
        return self.order if self.order is not None else self.canonical_exponents

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out, start = [], 0
        for v in self.r:
            out.append(tuple(range(start, start + v)))
            start += v
        return tuple(out)

    def to_dict(self) -> dict:
        return {"n": self.n, "s": self.s, "r": list(self.r)}

    @classmethod
    def from_dict(cls, d: dict) -> "BlockStructure":
        r = tuple(d["r"])
        if "s" in d and int(d["s"]) != len(r):
            raise InputError("s must equal len(r)")
        key = (int(d["n"]), r)
        if key in _NAMED:
            return _NAMED[key]
        return cls(int(d["n"]), r)


E7 = BlockStructure(3, (1, 1, 1))
# five-coordinate convention (x1, x2, x3, y1, y2)
E5 = BlockStructure(3, (1, 2), order=((1, 0), (1, 1), (1, 2), (0, 1), (0, 2)))
E3 = BlockStructure(2, (1, 1))
E2 = BlockStructure(2, (2,))
_NAMED = {(s.n, s.r): s for s in (E7, E5, E3, E2)}


def _as_point(x, n: int) -> np.ndarray:
    v = np.asarray(x, dtype=complex).reshape(-1)
    if v.shape[0] != n:
        raise DimensionMismatch(f"expected {n} coordinates", got=v.shape[0])
    if not np.all(np.isfinite(v)):
        raise InputError("point has non-finite coordinates")
    return v


def r_eval(structure: BlockStructure, x, z) -> complex:
    """``1 + sum_j (-1)^{|alpha_j|} x_j z^{alpha_j}``."""
    x = _as_point(x, structure.N)
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape[0] != structure.s:
        raise DimensionMismatch(f"expected {structure.s} polydisc coordinates")
    total = 1 + 0j
    for xj, alpha in zip(x, structure.exponents):
        total += (-1) ** sum(alpha) * xj * prod(zk ** ak for zk, ak in zip(z, alpha))
    return complex(total)


def r_eval_grid(structure: BlockStructure, x, zs: np.ndarray) -> np.ndarray:
    """Vectorised :func:`r_eval`; ``zs`` has shape (..., s)."""
    x = _as_point(x, structure.N)
    zs = np.asarray(zs, dtype=complex)
    total = np.ones(zs.shape[:-1], dtype=complex)
    for xj, alpha in zip(x, structure.exponents):
        mono = np.ones_like(total)
        for k, ak in enumerate(alpha):
            if ak:
                mono = mono * zs[..., k] ** ak
        total += (-1) ** sum(alpha) * xj * mono
    return total


def pi_map(structure: BlockStructure, a) -> np.ndarray:
    """Sums of principal minors, one per exponent."""
    a = as_cmatrix(a)
    if a.shape[0] != structure.n:
        raise DimensionMismatch(f"expected a {structure.n}x{structure.n} matrix")
    out = []
    for alpha in structure.exponents:
        choices = [itertools.combinations(blk, k) for blk, k in zip(structure.blocks, alpha)]
        total = 0j
        for pick in itertools.product(*choices):
            idx = [i for part in pick for i in part]
            total += np.linalg.det(a[np.ix_(idx, idx)])
        out.append(total)
    return np.array(out, dtype=complex)


def _structure_diag(structure: BlockStructure, phases: np.ndarray) -> np.ndarray:
    """Expand per-block phases (..., s) into per-row multipliers (..., n)."""
    return np.repeat(phases, structure.r, axis=-1)


def _cubic_radius(c1: np.ndarray, c2: np.ndarray, c3: np.ndarray) -> np.ndarray:
    """Largest root modulus of ``t^3 - c1 t^2 + c2 t - c3`` (Cardano, vectorised)."""
    shift = c1 / 3
    p = c2 - c1 * c1 / 3
    q = -2 * c1 ** 3 / 27 + c1 * c2 / 3 - c3
    disc = np.sqrt(q * q / 4 + p ** 3 / 27)
    w = np.where(np.abs(-q / 2 + disc) >= np.abs(-q / 2 - disc), -q / 2 + disc, -q / 2 - disc)
    u = w ** (1 / 3)
    rot = np.exp(2j * np.pi * np.arange(3) / 3)
    uk = u[..., None] * rot
    with np.errstate(divide="ignore", invalid="ignore"):
        roots = np.where(np.abs(uk) > 0, uk - p[..., None] / (3 * uk), 0) + shift[..., None]
    return np.max(np.abs(roots), axis=-1)


def _spectral_radius_stack(a: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Spectral radii of ``a diag(d_k)`` for each row ``d_k``.

    For 3x3 the characteristic polynomial is formed from principal minors
    and solved in closed form; the values only seed the refinement.
    """
    if a.shape[0] != 3:
        return np.max(np.abs(np.linalg.eigvals(a[None, :, :] * d[:, None, :])), axis=-1)
    m2 = [np.linalg.det(a[np.ix_(ij, ij)]) for ij in ((0, 1), (0, 2), (1, 2))]
    z1, z2, z3 = d[:, 0], d[:, 1], d[:, 2]
    c1 = a[0, 0] * z1 + a[1, 1] * z2 + a[2, 2] * z3
    c2 = m2[0] * z1 * z2 + m2[1] * z1 * z3 + m2[2] * z2 * z3
    c3 = np.linalg.det(a) * z1 * z2 * z3
    return _cubic_radius(c1, c2, c3)


def mu_torus(structure: BlockStructure, a, cfg: ToleranceConfig | None = None
             ) -> tuple[float, tuple[float, ...]]:
    """Maximum over the torus of the spectral radius of ``A diag(z)``.

    For complex block-scalar structures this maximum equals mu; the
    spectral radius is plurisubharmonic in ``z`` so the polydisc maximum
    sits on the torus. One phase is fixed to 1 since a global phase does
    not change the spectral radius. Returns the value and the maximising
    phase angles.
    """
    cfg = resolve(cfg)
    a = as_cmatrix(a)
    if a.shape[0] != structure.n:
        raise DimensionMismatch(f"expected a {structure.n}x{structure.n} matrix")
    if structure.s in (1, a.shape[0]):
        # diagonal similarity commuting with the structure leaves mu unchanged
        a = scipy.linalg.matrix_balance(a, permute=False, separate=False)[0]
    s = structure.s
    if s == 1:
        return float(np.max(np.abs(np.linalg.eigvals(a)))), (0.0,)

    free = s - 1
    n1 = cfg.grid_1d if free == 1 else cfg.grid_2d if free == 2 else max(8, cfg.grid_2d // 4)
    axes = [2 * np.pi * np.arange(n1) / n1] * free
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, free)
    phases = np.concatenate([np.exp(1j * mesh), np.ones((mesh.shape[0], 1))], axis=1)
    vals = _spectral_radius_stack(a, _structure_diag(structure, phases))

    def f(th):
        ph = np.append(np.exp(1j * np.asarray(th)), 1.0)
        d = np.repeat(ph, structure.r)
        return float(np.max(np.abs(np.linalg.eigvals(a * d[None, :]))))

    h = 2 * np.pi / n1
    best_val, best_th = -1.0, None
    for k in np.argsort(vals)[::-1][:4]:
        start = mesh[k]
        if free == 1:
            th, v = golden_max(lambda t: f([t]), start[0] - h, start[0] + h, cfg.refine_iters)
            th = np.array([th])
        else:
            res = scipy.optimize.minimize(lambda t: -f(t), start, method="Nelder-Mead",
                                          options={"xatol": 1e-11, "fatol": 1e-14,
                                                   "initial_simplex": start + h * np.vstack(
                                                       [np.zeros(free), np.eye(free)]),
                                                   "maxiter": 400 * free})
            th, v = res.x, -res.fun
        v0 = f(start)
        if v < v0:
            th, v = start, v0
        if v > best_val:
            best_val, best_th = float(v), th
    return best_val, tuple(float(t) for t in best_th) + (0.0,)


def mu_estimate(structure: BlockStructure, a, cfg: ToleranceConfig | None = None) -> float:
    """Estimate ``mu_E(A)``; zero when no zero of ``R`` exists below the cap."""
    val, _ = mu_torus(structure, a, cfg)
    return 0.0 if val < 1.0 / MU_CAP else val


def mu_membership(structure: BlockStructure, a, closed: bool = False,
                  cfg: ToleranceConfig | None = None) -> MembershipVerdict:
    """Is ``R_{pi(A)}`` zero-free on the closed polydisc (``mu < 1``)?

    The margin is ``1 - mu``; CLOSURE means ``mu = 1`` within the band.
    """
    cfg = resolve(cfg)
    val, th = mu_torus(structure, a, cfg)
    return categorize(1.0 - val, closed, cfg, witness=th, criterion="mu")


def r_min_on_polydisc(structure: BlockStructure, x, n_radial: int = 6,
                      n_angular: int = 24) -> tuple[float, tuple[complex, ...]]:
    """Brute-force minimum of ``|R_x|`` over a radius-by-angle grid of the
    closed polydisc. Coarse diagnostic only: a small value suggests a zero
    nearby but a positive value certifies nothing."""
    radii = np.linspace(0.0, 1.0, n_radial)
    angles = 2 * np.pi * np.arange(n_angular) / n_angular
    disc = (radii[:, None] * np.exp(1j * angles)[None, :]).reshape(-1)
    disc = np.unique(np.round(disc, 14))
    axes = [disc] * structure.s
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, structure.s)
    vals = np.abs(r_eval_grid(structure, x, mesh))
    k = int(np.argmin(vals))
    return float(vals[k]), tuple(complex(v) for v in mesh[k])


def pi_preimage(structure: BlockStructure, x) -> np.ndarray:
    """Some matrix ``A`` with ``pi(A) = x`` for the four named structures.

    Every preimage gives the same ``R`` polynomial, hence the same
    zero-freeness verdict.
    """
    if structure == E2:
        s, p = _as_point(x, 2)
        return np.array([[0, -p], [1, s]], dtype=complex)
    if structure == E3:
        x1, x2, x3 = _as_point(x, 3)
        return np.array([[x1, 1], [x1 * x2 - x3, x2]], dtype=complex)
    if structure == E5:
        x1, x2, x3, y1, y2 = _as_point(x, 5)
        alpha = x1 * y1 - x2
        beta = x3 - x1 * y2 + alpha * y1
        return np.array([[x1, alpha, beta], [1, 0, -y2], [0, 1, y1]], dtype=complex)
    if structure == E7:
        return _preimage7(_as_point(x, 7))
    raise InputError("preimage only available for the named structures")


def _preimage7(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5, x6, x7 = x
    p = x1 * x2 - x3  # a12 a21
    q = x1 * x4 - x5  # a13 a31
    r = x2 * x4 - x6  # a23 a32
    c = x7 - x1 * x2 * x4 + x1 * r + x2 * q + x4 * p  # a12 a23 a31 + a13 a21 a32
    roots = np.roots([1, -c, p * q * r]) if abs(c) + abs(p * q * r) > 0 else np.zeros(2)
    u = roots[np.argmax(np.abs(roots))] if len(roots) else 0j
    scale = 1 + abs(c)
    if abs(u) > 1e-10 * scale:
        a = [[x1, 1, q], [p, x2, u], [1, r / u, x4]]
    else:
        k = int(np.argmin([abs(p), abs(q), abs(r)]))
        if k == 2:
            a = [[x1, 1, q], [p, x2, 0], [1, 0, x4]]
        elif k == 1:
            a = [[x1, 1, 0], [p, x2, 1], [0, r, x4]]
        else:
            a = [[x1, 0, 1], [0, x2, 1], [q, r, x4]]
    return np.array(a, dtype=complex)


def pi_stack(structure: BlockStructure, mats: np.ndarray) -> np.ndarray:
    """:func:`pi_map` over a stack of 3x3 matrices (named structures) or a loop."""
    a = np.asarray(mats, dtype=complex)
    if a.ndim != 3:
        raise DimensionMismatch("expected a stack of matrices")
    if structure in (E7, E5):
        m12 = a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
        m13 = a[:, 0, 0] * a[:, 2, 2] - a[:, 0, 2] * a[:, 2, 0]
        m23 = a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1]
        det = np.linalg.det(a)
        if structure == E7:
            cols = (a[:, 0, 0], a[:, 1, 1], m12, a[:, 2, 2], m13, m23, det)
        else:
            cols = (a[:, 0, 0], m12 + m13, det, a[:, 1, 1] + a[:, 2, 2], m23)
        return np.stack(cols, axis=1)
    return np.array([pi_map(structure, m) for m in a])
