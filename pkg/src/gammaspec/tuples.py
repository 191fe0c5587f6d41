"""Commuting operator tuples: positivity functions, fractional families,
the fundamental equations, contraction probes and unitary / isometry
classification.

Tuples are finite matrices. A tuple may carry an ``edge_mask``: an
orthonormal basis of a subspace where a truncation is known to break the
algebraic identities. Classification residuals are then evaluated on the
compression ``Q X Q`` with ``Q`` the projection onto the complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Sequence

import numpy as np
import scipy.optimize

from .boundary import btetra_residual, k1_membership, k_membership
from .config import ToleranceConfig, resolve
from .errors import (DimensionMismatch, InputError, NotAContraction, NotCommuting,
                     NotSolvable, ResolventSingular)
from .linalg import (ResidualReport, adj, as_cmatrix, commutator_residual, golden_max,
                     joint_eigen_tuples, numerical_radius, opnorm)

__all__ = [
    "OperatorTuple", "Tuple7", "Tuple5", "Tuple3", "Tuple2", "rho_eval",
    "rho_multipliers", "fractional_family", "solve_fundamental",
    "FundamentalSolution", "contraction_probe", "classify_tuple",
    "ClassificationReport", "eta_family_classify", "embed5to7", "eta_tuple",
]


# ---------------------------------------------------------------- tuple types

@dataclass(frozen=True, eq=False)
class OperatorTuple:
    ops: tuple
    edge_mask: np.ndarray | None = None

    names: ClassVar[tuple[str, ...]] = ()

    def __post_init__(self):
        ops = tuple(as_cmatrix(m, f"operator {i}") for i, m in enumerate(self.ops))
        if len(ops) != len(self.names):
            raise DimensionMismatch(f"{type(self).__name__} needs {len(self.names)} operators",
                                    got=len(ops))
        dims = {m.shape[0] for m in ops}
        if len(dims) != 1:
            raise DimensionMismatch("operators have different sizes", dims=sorted(dims))
        object.__setattr__(self, "ops", ops)
        if self.edge_mask is not None:
            e = np.asarray(self.edge_mask, dtype=complex)
            if e.ndim == 1:
                e = e[:, None]
            if e.shape[0] != self.dim:
                raise DimensionMismatch("edge mask has the wrong row count")
            if e.shape[1]:
                e = np.linalg.qr(e)[0]
            object.__setattr__(self, "edge_mask", e)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def __getattr__(self, name):
        if name in type(self).names:
            return self.ops[type(self).names.index(name)]
        raise AttributeError(name)

    @classmethod
    def scalar(cls, point) -> "OperatorTuple":
        v = np.asarray(point, dtype=complex).reshape(-1)
        return cls(tuple(np.array([[c]]) for c in v))

    @classmethod
    def zeros(cls, dim: int = 1) -> "OperatorTuple":
        return cls(tuple(np.zeros((dim, dim), complex) for _ in cls.names))

    def compression(self) -> np.ndarray:
        """Projection off the edge subspace (identity when there is none)."""
        q = np.eye(self.dim, dtype=complex)
        if self.edge_mask is not None and self.edge_mask.shape[1]:
            q -= self.edge_mask @ adj(self.edge_mask)
        return q

    def commute_residual(self) -> float:
        worst = 0.0
        for i in range(len(self.ops)):
            for j in range(i + 1, len(self.ops)):
                worst = max(worst, commutator_residual(self.ops[i], self.ops[j]))
        return worst

    def require_commuting(self, cfg: ToleranceConfig) -> None:
        r = self.commute_residual()
        if r > cfg.commute_tol:
            raise NotCommuting("tuple members do not commute", residual=r)

    def conjugate(self, u: np.ndarray) -> "OperatorTuple":
        """Unitary change of basis ``U* T U``."""
        mask = None if self.edge_mask is None else adj(u) @ self.edge_mask
        return type(self)(tuple(adj(u) @ m @ u for m in self.ops), mask)


class Tuple7(OperatorTuple):
    names = ("T1", "T2", "T3", "T4", "T5", "T6", "T7")


class Tuple5(OperatorTuple):
    names = ("S1", "S2", "S3", "St1", "St2")


class Tuple3(OperatorTuple):
    names = ("A", "B", "P")


class Tuple2(OperatorTuple):
    names = ("S", "P")


def _as_tuple(t, cls):
    if isinstance(t, cls):
        return t
    if isinstance(t, OperatorTuple):
        raise DimensionMismatch(f"expected {cls.__name__}, got {type(t).__name__}")
    return cls(tuple(t))


# ---------------------------------------------------------------- rho

def _badj(x: np.ndarray) -> np.ndarray:
    return np.swapaxes(x, -1, -2).conj()


def _re(x: np.ndarray) -> np.ndarray:
    return (x + _badj(x)) / 2


def _rho7(t: Sequence[np.ndarray]) -> np.ndarray:
    t1, t2, t3, t4, t5, t6, t7 = t
    eye = np.eye(t1.shape[-1])
    g = lambda a: _badj(a) @ a  # noqa: E731
    out = (eye - g(t7)) + (g(t2) + g(t4) + g(t6) - g(t1) - g(t3) - g(t5))
    out = out - 2 * _re(t2 - _badj(t1) @ t3) - 2 * _re(t4 - _badj(t1) @ t5)
    out = out + 2 * _re(t6 - _badj(t1) @ t7) - 2 * _re(_badj(t4) @ t6 - _badj(t5) @ t7)
    out = out - 2 * _re(_badj(t2) @ t6 - _badj(t3) @ t7) - 2 * _re(_badj(t5) @ t3 - _badj(t4) @ t2)
    return out


def _rho5(s: Sequence[np.ndarray]) -> np.ndarray:
    s1, s2, s3, st1, st2 = s
    eye = np.eye(s1.shape[-1])
    g = lambda a: _badj(a) @ a  # noqa: E731
    out = (eye - g(s3)) + (g(st1) - g(s2) - g(s1) + g(st2))
    out = out - 2 * _re(st1 - _badj(s1) @ s2) + 2 * _re(st2 - _badj(s1) @ s3)
    out = out - 2 * _re(_badj(st1) @ st2 - _badj(s2) @ s3)
    return out


def _rho_tetra(t: Sequence[np.ndarray]) -> np.ndarray:
    a, b, p = t
    eye = np.eye(a.shape[-1])
    return (eye - _badj(p) @ p) + (_badj(b) @ b - _badj(a) @ a) - 2 * _re(b - _badj(a) @ p)


def _rho_sym(t: Sequence[np.ndarray]) -> np.ndarray:
    s, p = t
    eye = np.eye(s.shape[-1])
    x = s - _badj(s) @ p
    return 2 * (eye - _badj(p) @ p) - x - _badj(x)


_RHO = {
    # variant: (function, arity, argument order, parameter count)
    "RHO7_1": (_rho7, 7, (0, 1, 2, 3, 4, 5, 6), 2),
    "RHO7_2": (_rho7, 7, (1, 0, 2, 3, 5, 4, 6), 2),
    "RHO7_3": (_rho7, 7, (3, 0, 4, 1, 5, 2, 6), 2),
    "RHO5": (_rho5, 5, (0, 1, 2, 3, 4), 1),
    "RHO_TETRA": (_rho_tetra, 3, (0, 1, 2), 1),
    "RHO_SYM": (_rho_sym, 2, (0, 1), 1),
}
RHO_VARIANTS = tuple(_RHO)


def _multipliers(variant: str, z: np.ndarray) -> np.ndarray:
    """Batched multipliers; ``z`` has shape (G, n_params), result (G, arity)."""
    one = np.ones(z.shape[0], dtype=complex)
    if variant == "RHO7_1":
        z2, z3 = z.T
        cols = (one, z2, z2, z3, z3, z2 * z3, z2 * z3)
    elif variant == "RHO7_2":
        z1, z3 = z.T
        cols = (z1, one, z1, z3, z1 * z3, z3, z1 * z3)
    elif variant == "RHO7_3":
        z1, z2 = z.T
        cols = (z1, z2, z1 * z2, one, z1, z2, z1 * z2)
    elif variant == "RHO5":
        w = z[:, 0]
        cols = (one, w, w * w, w, w * w)
    elif variant == "RHO_TETRA":
        w = z[:, 0]
        cols = (one, w, w)
    else:
        w = z[:, 0]
        cols = (w, w * w)
    return np.stack(cols, axis=1)


def rho_multipliers(variant: str, params) -> tuple[complex, ...]:
    """Per-operator scalar multipliers for the standard parameterisations.

    RHO7_1 takes ``(z2, z3)``, RHO7_2 ``(z1, z3)``, RHO7_3 ``(z1, z2)``;
    RHO5 takes ``z``; RHO_TETRA takes ``omega`` (scaling B and P);
    RHO_SYM takes ``alpha`` (scaling S by alpha and P by alpha^2).
    """
    prm = np.atleast_1d(np.asarray(params, dtype=complex))
    if variant not in _RHO:
        raise InputError(f"unknown rho variant {variant!r}", allowed=list(RHO_VARIANTS))
    if prm.shape != (_RHO[variant][3],):
        raise DimensionMismatch(f"{variant} takes {_RHO[variant][3]} parameter(s)")
    return tuple(complex(v) for v in _multipliers(variant, prm[None, :])[0])


def _rho_min_eigs(variant: str, ops: Sequence[np.ndarray], thetas: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of the scaled positivity function at each angle row."""
    fn, _, order, _ = _RHO[variant]
    mult = _multipliers(variant, np.exp(1j * thetas))
    scaled = [mult[:, k, None, None] * ops[k][None] for k in range(len(ops))]
    val = _re(fn([scaled[k] for k in order]))
    return np.linalg.eigvalsh(val)[:, 0]


def rho_eval(variant: str, tup, scalings=None,
             cfg: ToleranceConfig | None = None) -> tuple[np.ndarray, float]:
    """Evaluate a positivity function on a scaled tuple.

    ``scalings[i]`` multiplies the i-th operator of the tuple before the
    function is applied (see :func:`rho_multipliers`). Returns the
    Hermitian value and its smallest eigenvalue.
    """
    cfg = resolve(cfg)
    if variant not in _RHO:
        raise InputError(f"unknown rho variant {variant!r}", allowed=list(RHO_VARIANTS))
    fn, arity, order, _ = _RHO[variant]
    ops = tup.ops if isinstance(tup, OperatorTuple) else tuple(as_cmatrix(m) for m in tup)
    if len(ops) != arity:
        raise DimensionMismatch(f"{variant} needs {arity} operators", got=len(ops))
    sc = np.ones(arity, complex) if scalings is None else np.asarray(scalings, complex).reshape(-1)
    if sc.shape != (arity,):
        raise DimensionMismatch(f"{variant} needs {arity} scalings")
    scaled = [c * m for c, m in zip(sc, ops)]
    last = scaled[{7: 6, 5: 2, 3: 2, 2: 1}[arity]]
    if opnorm(last) > 1 + cfg.residual_tol:
        raise NotAContraction("defect of the last operator is not positive",
                              norm=opnorm(last))
    val = _re(fn([scaled[k] for k in order]))
    return val, float(np.linalg.eigvalsh(val)[0])


# ---------------------------------------------------------------- fractional

def _right_resolvent(x: np.ndarray, r: np.ndarray, z, cfg: ToleranceConfig) -> np.ndarray:
    """``x r^{-1}``, refusing near-singular ``r``."""
    if np.linalg.cond(r) > 1 / cfg.rank_tol:
        raise ResolventSingular("resolvent factor is singular", z=complex(z))
    return np.linalg.solve(r.T, x.T).T


def fractional_family(variant: str, tup, z: complex,
                      cfg: ToleranceConfig | None = None) -> Tuple3 | Tuple2:
    """Linear-fractional slices of a tuple at ``z``.

    F7_Z1, F7_Z2, F7_Z3 and F5 return triples, F5_SYM returns a pair.
    """
    cfg = resolve(cfg)
    z = complex(z)
    if variant in ("F7_Z1", "F7_Z2", "F7_Z3"):
        t1, t2, t3, t4, t5, t6, t7 = _as_tuple(tup, Tuple7).ops
        eye = np.eye(t1.shape[0])
        if variant == "F7_Z1":
            nums, den = (t2 - z * t3, t4 - z * t5, t6 - z * t7), eye - z * t1
        elif variant == "F7_Z2":
            nums, den = (t1 - z * t3, t4 - z * t6, t5 - z * t7), eye - z * t2
        else:
            nums, den = (t1 - z * t5, t2 - z * t6, t3 - z * t7), eye - z * t4
        return Tuple3(tuple(_right_resolvent(n, den, z, cfg) for n in nums))
    if variant in ("F5", "F5_SYM"):
        s1, s2, s3, st1, st2 = _as_tuple(tup, Tuple5).ops
        eye = np.eye(s1.shape[0])
        if variant == "F5":
            nums, den = (2 * s1 - z * s2, st1 - 2 * z * st2, s2 - 2 * z * s3), 2 * eye - z * st1
            return Tuple3(tuple(_right_resolvent(n, den, z, cfg) for n in nums))
        nums, den = (st1 - z * s2, st2 - z * s3), eye - z * s1
        return Tuple2(tuple(_right_resolvent(n, den, z, cfg) for n in nums))
    raise InputError(f"unknown fractional family {variant!r}",
                     allowed=["F7_Z1", "F7_Z2", "F7_Z3", "F5", "F5_SYM"])


# ---------------------------------------------------------------- fundamental

@dataclass
class FundamentalSolution:
    """Solutions of ``D F1 D = A - B* P`` and ``D F2 D = B - A* P`` with
    ``D`` the defect operator of ``P``; both act as zero off its range."""

    F1: np.ndarray
    F2: np.ndarray
    defect_rank: int
    residual1: float
    residual2: float
    radius_profile: list[tuple[complex, float]]
    range_basis: np.ndarray

    @property
    def max_radius(self) -> float:
        return max(r for _, r in self.radius_profile)

    def to_dict(self) -> dict:
        from .jsonio import encode_matrix
        return {"F1": encode_matrix(self.F1), "F2": encode_matrix(self.F2),
                "defect_rank": self.defect_rank, "residual1": self.residual1,
                "residual2": self.residual2, "max_radius": self.max_radius,
                "radius_profile": [[[w.real, w.imag], r] for w, r in self.radius_profile]}


def solve_fundamental(triple, cfg: ToleranceConfig | None = None,
                      n_omega: int = 64) -> FundamentalSolution:
    """Solve both fundamental equations in the eigenbasis of ``D_P``.

    The defect rank counts eigenvalues of ``I - P*P`` above ``rank_tol``.
    Entries of the right-hand side that touch the kernel of ``D_P`` must
    vanish, otherwise there is no solution.
    """
    cfg = resolve(cfg)
    a, b, p = _as_tuple(triple, Tuple3).ops
    g = np.eye(p.shape[0]) - adj(p) @ p
    w, v = np.linalg.eigh(_re(g))
    if w[0] < -cfg.rank_tol:
        raise NotAContraction("P is not a contraction", min_eig=float(w[0]))
    keep = w > cfg.rank_tol
    d = np.sqrt(np.clip(w, 0.0, None))
    dp = (v * d) @ adj(v)
    out = []
    for name, m in (("F1", a - adj(b) @ p), ("F2", b - adj(a) @ p)):
        mp = adj(v) @ m @ v
        null_mass = np.abs(mp[~keep, :]).max(initial=0.0)
        null_mass = max(null_mass, np.abs(mp[:, ~keep]).max(initial=0.0))
        if null_mass > cfg.residual_tol:
            raise NotSolvable(f"{name}: right side has mass off the defect range",
                              residual=float(null_mass))
        fp = np.zeros_like(mp)
        dk = d[keep]
        fp[np.ix_(keep, keep)] = mp[np.ix_(keep, keep)] / np.outer(dk, dk)
        f = v @ fp @ adj(v)
        out.append((f, opnorm(dp @ f @ dp - m)))
    (f1, r1), (f2, r2) = out
    omegas = np.exp(2j * np.pi * np.arange(n_omega) / n_omega)
    profile = [(complex(om), numerical_radius(f1 + om * f2, cfg)) for om in omegas]
    return FundamentalSolution(f1, f2, int(keep.sum()), r1, r2, profile, v[:, keep])


# ---------------------------------------------------------------- probes

@dataclass
class ClassificationReport:
    verdict: bool
    checks: ResidualReport
    spectrum_check: list | None = None
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "checks": self.checks.to_dict()}
        if self.spectrum_check is not None:
            out["spectrum_check"] = self.spectrum_check
        if self.info:
            out["info"] = self.info
        return out


def _torus_min(f, n_params: int, grid: int, iters: int) -> tuple[float, tuple[float, ...]]:
    """Minimum over the torus of a batched function of angle rows: uniform
    grid, then local refinement from the best node."""
    theta = 2 * np.pi * np.arange(grid) / grid
    mesh = np.stack(np.meshgrid(*([theta] * n_params), indexing="ij"), -1).reshape(-1, n_params)
    vals = f(mesh)
    k = int(np.argmin(vals))
    start, h = mesh[k], 2 * np.pi / grid
    one = lambda t: float(f(np.atleast_2d(t))[0])  # noqa: E731
    if n_params == 1:
        t, v = golden_max(lambda u: -one([u]), start[0] - h, start[0] + h, iters)
        t, v = np.array([t]), -v
    else:
        res = scipy.optimize.minimize(
            one, start, method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 20 * max(iters, 1),
                     "initial_simplex": start + h * np.vstack([np.zeros(n_params),
                                                               np.eye(n_params)])})
        t, v = res.x, float(res.fun)
    if vals[k] <= v:
        t, v = start, float(vals[k])
    return float(v), tuple(float(np.mod(x, 2 * np.pi)) for x in t)


def _rho_min(variant: str, tup: OperatorTuple, grid: int, cfg: ToleranceConfig):
    last = tup.ops[{7: 6, 5: 2, 3: 2, 2: 1}[len(tup.ops)]]
    if opnorm(last) > 1 + cfg.residual_tol:
        raise NotAContraction("defect of the last operator is not positive")
    return _torus_min(lambda th: _rho_min_eigs(variant, tup.ops, th),
                      _RHO[variant][3], grid, cfg.refine_iters)


def _tetra_necessary(tr: Tuple3, grid: int, cfg: ToleranceConfig) -> float:
    """Worst negative part over omega of the two tetrablock positivity tests."""
    a, b, p = tr.ops
    if opnorm(p) > 1 + cfg.residual_tol:
        return opnorm(p) - 1
    swapped = Tuple3((b, a, p))
    worst = 0.0
    for t in (tr, swapped):
        m, _ = _rho_min("RHO_TETRA", t, grid, cfg)
        worst = max(worst, -m)
    return worst


def _sym_necessary(pair: Tuple2, grid: int, cfg: ToleranceConfig) -> float:
    s, p = pair.ops
    if opnorm(p) > 1 + cfg.residual_tol:
        return opnorm(p) - 1
    m, _ = _rho_min("RHO_SYM", pair, grid, cfg)
    return max(0.0, -m)


def _family_samples(grid: int) -> np.ndarray:
    ang = np.exp(2j * np.pi * np.arange(grid) / grid)
    return np.concatenate([[0j], 0.5 * ang[::4], 0.95 * ang[::2]])


def contraction_probe(tup, cfg: ToleranceConfig | None = None,
                      grid: int = 16) -> ClassificationReport:
    """Battery of necessary conditions for a tuple to be a contraction for
    the seven-, five- or three-coordinate domain.

    ``verdict`` true means no necessary condition was falsified; it is not
    a certificate of sufficiency. ``info`` carries the spectral radius of
    ``A_z + B_z`` for the first seven-point family, which does not enter
    the verdict.
    """
    cfg = resolve(cfg)
    if not isinstance(tup, OperatorTuple):
        raise InputError("contraction_probe needs a Tuple7, Tuple5 or Tuple3")
    tup.require_commuting(cfg)
    rep = ResidualReport()
    info: dict = {}
    tol = cfg.residual_tol
    if isinstance(tup, Tuple7):
        limits = [1.0] * 7
    elif isinstance(tup, Tuple5):
        limits = [1.0, 2.0, 1.0, 2.0, 1.0]
    elif isinstance(tup, Tuple3):
        limits = [1.0] * 3
    else:
        raise InputError("contraction_probe needs a Tuple7, Tuple5 or Tuple3")
    for name, m, lim in zip(tup.names, tup.ops, limits):
        rep.add(f"norm[{name}]", max(0.0, opnorm(m) - lim), tol)
    if not rep.passed:
        return ClassificationReport(False, rep, info=info)

    skipped = 0
    if isinstance(tup, Tuple3):
        rep.add("rho_tetra", _tetra_necessary(tup, grid, cfg), tol)
    elif isinstance(tup, Tuple7):
        for v in ("RHO7_1", "RHO7_2", "RHO7_3"):
            m, th = _rho_min(v, tup, grid, cfg)
            rep.add(v.lower(), max(0.0, -m), tol)
        worst, sr = 0.0, 0.0
        for fam in ("F7_Z1", "F7_Z2", "F7_Z3"):
            for z in _family_samples(grid):
                try:
                    tr = fractional_family(fam, tup, z, cfg)
                except ResolventSingular:
                    skipped += 1
                    continue
                worst = max(worst, _tetra_necessary(tr, max(8, grid // 2), cfg))
                if fam == "F7_Z1":
                    sr = max(sr, float(np.max(np.abs(np.linalg.eigvals(tr.A + tr.B)))))
        rep.add("fractional_tetra", worst, tol)
        info["spectral_radius_A_plus_B"] = sr
    else:
        m, _ = _rho_min("RHO5", tup, 4 * grid, cfg)
        rep.add("rho5", max(0.0, -m), tol)
        worst_t, worst_s = 0.0, 0.0
        for z in _family_samples(grid):
            try:
                worst_t = max(worst_t, _tetra_necessary(fractional_family("F5", tup, z, cfg),
                                                        max(8, grid // 2), cfg))
                worst_s = max(worst_s, _sym_necessary(fractional_family("F5_SYM", tup, z, cfg),
                                                      max(8, grid // 2), cfg))
            except ResolventSingular:
                skipped += 1
        rep.add("fractional_tetra", worst_t, tol)
        rep.add("fractional_sym", worst_s, tol)
    info["skipped_singular_samples"] = skipped
    return ClassificationReport(rep.passed, rep, info=info)


# ---------------------------------------------------------------- classify

CLASSIFY_KINDS = ("UNITARY7", "UNITARY5", "ISOMETRY7", "ISOMETRY5",
                  "TETRA_UNITARY", "TETRA_ISOMETRY")


def _kind_tuple(kind: str):
    if kind.endswith("7"):
        return Tuple7
    if kind.endswith("5"):
        return Tuple5
    return Tuple3


def classify_tuple(kind: str, tup, with_spectrum: bool = False,
                   cfg: ToleranceConfig | None = None, seed: int = 0) -> ClassificationReport:
    """Check the algebraic characterisation of unitary / isometry tuples.

    For the seven-tuple: norm bounds on the first six operators, the last
    operator unitary (or isometric) and ``N_i = N_{7-i}^* N_7`` for
    ``i = 1..6``. For the five-tuple: norm bounds, ``M3`` unitary (or
    isometric), ``M1 = Mt2^* M3`` and ``M2 = Mt1^* M3``. For triples:
    ``A = B^* P``, ``B = A^* P`` and ``P`` unitary (or isometric).
    """
    cfg = resolve(cfg)
    if kind not in CLASSIFY_KINDS:
        raise InputError(f"unknown kind {kind!r}", allowed=list(CLASSIFY_KINDS))
    tup = _as_tuple(tup, _kind_tuple(kind))
    tup.require_commuting(cfg)
    q = tup.compression()
    eye = np.eye(tup.dim)
    tol = cfg.residual_tol
    rep = ResidualReport()
    comp = lambda x: opnorm(q @ x @ q)  # noqa: E731
    unitary = kind.startswith("UNITARY") or kind == "TETRA_UNITARY"

    def iso_checks(name, m):
        rep.add(f"isometry[{name}]", comp(adj(m) @ m - eye), tol)
        if unitary:
            rep.add(f"coisometry[{name}]", comp(m @ adj(m) - eye), tol)

    if kind.endswith("7"):
        n = tup.ops
        for i in range(6):
            rep.add(f"norm[T{i + 1}]", max(0.0, opnorm(n[i]) - 1), tol)
        iso_checks("T7", n[6])
        for i in range(6):
            rep.add(f"T{i + 1}=T{6 - i}*T7", comp(n[i] - adj(n[5 - i]) @ n[6]), tol)
    elif kind.endswith("5"):
        s1, s2, s3, st1, st2 = tup.ops
        for name, m, lim in (("S1", s1, 1), ("St2", st2, 1), ("S2", s2, 2), ("St1", st1, 2)):
            rep.add(f"norm[{name}]", max(0.0, opnorm(m) - lim), tol)
        iso_checks("S3", s3)
        rep.add("S1=St2*S3", comp(s1 - adj(st2) @ s3), tol)
        rep.add("S2=St1*S3", comp(s2 - adj(st1) @ s3), tol)
    else:
        a, b, p = tup.ops
        rep.add("norm[A]", max(0.0, opnorm(a) - 1), tol)
        rep.add("norm[B]", max(0.0, opnorm(b) - 1), tol)
        iso_checks("P", p)
        rep.add("A=B*P", comp(a - adj(b) @ p), tol)
        rep.add("B=A*P", comp(b - adj(a) @ p), tol)

    spectrum = None
    if with_spectrum:
        pts = joint_eigen_tuples(list(tup.ops), cfg, seed)
        spectrum = []
        for pt in pts:
            if kind.endswith("7"):
                ok = k_membership(pt, cfg).in_set
            elif kind.endswith("5"):
                ok = k1_membership(pt, cfg).in_set
            else:
                ok = btetra_residual(pt) <= tol
            spectrum.append({"point": [[c.real, c.imag] for c in pt], "in_set": bool(ok)})
    verdict = rep.passed and (spectrum is None or all(s["in_set"] for s in spectrum))
    return ClassificationReport(verdict, rep, spectrum)


def eta_tuple(tup7, eta: complex) -> Tuple5:
    """``(N1, N3 + eta N5, eta N7, N2 + eta N4, eta N6)``."""
    t = _as_tuple(tup7, Tuple7)
    n1, n2, n3, n4, n5, n6, n7 = t.ops
    return Tuple5((n1, n3 + eta * n5, eta * n7, n2 + eta * n4, eta * n6), t.edge_mask)


def eta_family_classify(tup7, kind: str = "UNITARY", etas: int = 16,
                        cfg: ToleranceConfig | None = None) -> ClassificationReport:
    """Classify the five-tuples obtained by the eta projection at ``etas``
    equally spaced points of the circle, plus norm bounds on the seven-tuple."""
    cfg = resolve(cfg)
    if kind not in ("UNITARY", "ISOMETRY"):
        raise InputError("kind must be UNITARY or ISOMETRY")
    t = _as_tuple(tup7, Tuple7)
    t.require_commuting(cfg)
    rep = ResidualReport()
    for name, m in zip(t.names, t.ops):
        rep.add(f"norm[{name}]", max(0.0, opnorm(m) - 1), cfg.residual_tol)
    failed = []
    for k in range(etas):
        eta = np.exp(2j * np.pi * k / etas)
        sub = classify_tuple(kind + "5", eta_tuple(t, eta), cfg=cfg)
        rep.extend(sub.checks, prefix=f"eta[{k}].")
        if not sub.verdict:
            failed.append(k)
    return ClassificationReport(rep.passed, rep, info={"failed_eta_indices": failed})


def embed5to7(tup5) -> Tuple7:
    """``(S1, St1/2, S2/2, St1/2, S2/2, St2, S3)``."""
    t = _as_tuple(tup5, Tuple5)
    s1, s2, s3, st1, st2 = t.ops
    return Tuple7((s1, st1 / 2, s2 / 2, st1 / 2, s2 / 2, st2, s3), t.edge_mask)
