"""Constructive models.

* Unitary tuples from a 3x3 block unitary whose blocks are commuting
  normal matrices, via block minors.
* Pure isometry tuples as truncated block Toeplitz multiplication
  operators by linear pencils ``X + Y* z`` on ``E (x) C^N``.
* Wold decomposition of a tuple into its unitary and pure parts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ToleranceConfig, resolve
from .errors import InputError, InvalidBlockUnitary, InvalidCoefficients, NotReducing
from .linalg import ResidualReport, adj, as_cmatrix, commutator_residual, golden_max, opnorm
from .tuples import ClassificationReport, OperatorTuple, Tuple5, Tuple7, _as_tuple

__all__ = [
    "BlockUnitary3", "IsometryModelCoeffs7", "IsometryModelCoeffs5",
    "build_gamma7_unitary", "build_gamma5_unitary", "validate_model_coeffs",
    "build_pure_isometry", "WoldDecomposition", "wold_decompose", "direct_sum",
]


# ---------------------------------------------------------------- block unitaries

@dataclass(frozen=True, eq=False)
class BlockUnitary3:
    """Nine ``m x m`` blocks ``U[i][j]`` of a ``3m x 3m`` unitary."""

    blocks: tuple

    def __post_init__(self):
        rows = self.blocks
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise InvalidBlockUnitary("need a 3x3 grid of blocks")
        blk = tuple(tuple(as_cmatrix(b, f"block {i}{j}") for j, b in enumerate(r))
                    for i, r in enumerate(rows))
        if len({b.shape[0] for r in blk for b in r}) != 1:
            raise InvalidBlockUnitary("blocks have different sizes")
        object.__setattr__(self, "blocks", blk)

    @property
    def m(self) -> int:
        return self.blocks[0][0].shape[0]

    def assembled(self) -> np.ndarray:
        return np.block([list(r) for r in self.blocks])

    @classmethod
    def from_matrix(cls, u, m: int = 1) -> "BlockUnitary3":
        u = as_cmatrix(u)
        if u.shape[0] != 3 * m:
            raise InvalidBlockUnitary("matrix size must be 3m")
        return cls(tuple(tuple(u[i * m:(i + 1) * m, j * m:(j + 1) * m] for j in range(3))
                         for i in range(3)))

    def residuals(self, cfg: ToleranceConfig | None = None) -> ResidualReport:
        cfg = resolve(cfg)
        u = self.assembled()
        rep = ResidualReport()
        rep.add("unitary", max(opnorm(adj(u) @ u - np.eye(len(u))),
                               opnorm(u @ adj(u) - np.eye(len(u)))), cfg.residual_tol)
        flat = [b for r in self.blocks for b in r]
        rep.add("normal", max(opnorm(adj(b) @ b - b @ adj(b)) for b in flat), cfg.residual_tol)
        worst = 0.0
        for i in range(9):
            for j in range(i + 1, 9):
                worst = max(worst, commutator_residual(flat[i], flat[j]))
        rep.add("commute", worst, cfg.residual_tol)
        return rep


def _checked_blocks(u: BlockUnitary3, cfg: ToleranceConfig):
    rep = u.residuals(cfg)
    if not rep.passed:
        bad = rep.failures()[0]
        raise InvalidBlockUnitary(f"block unitary fails {bad.name}", residual=bad.residual)
    return u.blocks


def _minors(b):
    (u11, u12, u13), (u21, u22, u23), (u31, u32, u33) = b
    n3 = u11 @ u22 - u12 @ u21
    n5 = u11 @ u33 - u13 @ u31
    n6 = u22 @ u33 - u23 @ u32
    n7 = (u11 @ (u22 @ u33 - u23 @ u32) - u12 @ (u21 @ u33 - u31 @ u23)
          + u13 @ (u21 @ u32 - u31 @ u22))
    return u11, u22, n3, u33, n5, n6, n7


def build_gamma7_unitary(u: BlockUnitary3, cfg: ToleranceConfig | None = None) -> Tuple7:
    """Diagonal entries, principal 2x2 block minors and the block determinant."""
    cfg = resolve(cfg)
    return Tuple7(_minors(_checked_blocks(u, cfg)))


def build_gamma5_unitary(u: BlockUnitary3, cfg: ToleranceConfig | None = None) -> Tuple5:
    """``(U11, N3 + N5, N7, U22 + U33, N6)`` in the minor notation above."""
    cfg = resolve(cfg)
    n1, n2, n3, n4, n5, n6, n7 = _minors(_checked_blocks(u, cfg))
    return Tuple5((n1, n3 + n5, n7, n2 + n4, n6))


def random_block_unitary(m: int, rng: np.random.Generator) -> BlockUnitary3:
    """Blocks ``W diag_t(U(t)_ij) W*`` with Haar ``U(t)`` and a common Haar frame ``W``."""
    from scipy.stats import unitary_group
    w = unitary_group.rvs(m, random_state=rng) if m > 1 else np.eye(1)
    us = [unitary_group.rvs(3, random_state=rng) for _ in range(m)]
    return BlockUnitary3(tuple(tuple(w @ np.diag([ut[i, j] for ut in us]) @ adj(w)
                                     for j in range(3)) for i in range(3)))


# ---------------------------------------------------------------- pencil models

@dataclass(frozen=True, eq=False)
class IsometryModelCoeffs7:
    """``Phi_i(z) = A_i + A_{7-i}^* z`` for ``i = 1..6`` on a space of dim ``E_dim``."""

    A: tuple

    def __post_init__(self):
        a = tuple(as_cmatrix(m, f"A{i + 1}") for i, m in enumerate(self.A))
        if len(a) != 6 or len({m.shape[0] for m in a}) != 1:
            raise InvalidCoefficients("need six square coefficients of equal size")
        object.__setattr__(self, "A", a)

    @property
    def E_dim(self) -> int:
        return self.A[0].shape[0]

    def pencils(self) -> list[tuple[str, np.ndarray, np.ndarray, float]]:
        """(name, constant term, conjugated linear coefficient, norm cap)."""
        return [(f"Phi{i + 1}", self.A[i], self.A[5 - i], 1.0) for i in range(6)]


@dataclass(frozen=True, eq=False)
class IsometryModelCoeffs5:
    """Pencils ``B1 + B2* z``, ``B2 + B1* z``, ``C1 + C2* z``, ``C2 + C1* z``."""

    B1: np.ndarray
    B2: np.ndarray
    C1: np.ndarray
    C2: np.ndarray

    def __post_init__(self):
        for name in ("B1", "B2", "C1", "C2"):
            object.__setattr__(self, name, as_cmatrix(getattr(self, name), name))
        if len({getattr(self, n).shape[0] for n in ("B1", "B2", "C1", "C2")}) != 1:
            raise InvalidCoefficients("coefficients have different sizes")

    @property
    def F_dim(self) -> int:
        return self.B1.shape[0]

    def pencils(self) -> list[tuple[str, np.ndarray, np.ndarray, float]]:
        return [("W1", self.B1, self.B2, 1.0), ("Wt2", self.B2, self.B1, 1.0),
                ("W2", self.C1, self.C2, 2.0), ("Wt1", self.C2, self.C1, 2.0)]


def _pencil_sup(x: np.ndarray, y: np.ndarray, cfg: ToleranceConfig) -> tuple[float, float]:
    """``sup_{|z|=1} ||x + y* z||`` with the maximising angle."""
    yh = adj(y)
    n = cfg.grid_1d
    theta = 2 * np.pi * np.arange(n) / n
    stack = x[None] + np.exp(1j * theta)[:, None, None] * yh[None]
    vals = np.linalg.norm(stack, 2, axis=(1, 2))
    k = int(np.argmax(vals))
    h = 2 * np.pi / n
    t, v = golden_max(lambda s: opnorm(x + np.exp(1j * s) * yh), theta[k] - h, theta[k] + h,
                      cfg.refine_iters)
    if v < vals[k]:
        t, v = theta[k], float(vals[k])
    return float(v), float(np.mod(t, 2 * np.pi))


def validate_model_coeffs(coeffs, cfg: ToleranceConfig | None = None) -> ClassificationReport:
    """Norm caps on every pencil over the circle and the commutator
    conditions that make all pencils commute with each other.

    Two pencils ``X + Y* z`` and ``U + V* z`` commute exactly when
    ``[X, U] = 0``, ``[Y*, V*] = 0`` and ``[X, V*] + [Y*, U] = 0``.
    """
    cfg = resolve(cfg)
    if not isinstance(coeffs, (IsometryModelCoeffs7, IsometryModelCoeffs5)):
        raise InputError("expected model coefficients")
    pens = coeffs.pencils()
    rep = ResidualReport()
    witnesses = {}
    for name, x, y, cap in pens:
        sup, t = _pencil_sup(x, y, cfg)
        rep.add(f"sup_norm[{name}]", max(0.0, sup - cap), cfg.residual_tol)
        witnesses[name] = {"sup": sup, "theta": t}
    for i in range(len(pens)):
        for j in range(i + 1, len(pens)):
            ni, x, y, _ = pens[i]
            nj, u, v, _ = pens[j]
            r = max(commutator_residual(x, u), commutator_residual(adj(y), adj(v)),
                    opnorm(x @ adj(v) - adj(v) @ x + adj(y) @ u - u @ adj(y)))
            rep.add(f"commute[{ni},{nj}]", r, cfg.residual_tol)
    return ClassificationReport(rep.passed, rep, info={"norm_witnesses": witnesses})


def _toeplitz(x: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    """Multiplication by ``x + y* z`` on ``n`` coefficient blocks:
    ``x`` on the block diagonal, ``y*`` on the first block subdiagonal."""
    return np.kron(np.eye(n), x) + np.kron(np.eye(n, k=-1), adj(y))


def build_pure_isometry(coeffs, n: int, cfg: ToleranceConfig | None = None) -> OperatorTuple:
    """Truncated model on ``E (x) C^n`` with the shift as the last operator.

    The identities involving one application of the shift fail only on the
    highest coefficient block, which is recorded as the edge mask.
    """
    cfg = resolve(cfg)
    if n < 2:
        raise InputError("truncation length must be at least 2")
    rep = validate_model_coeffs(coeffs, cfg)
    if not rep.verdict:
        bad = rep.checks.failures()[0]
        raise InvalidCoefficients(f"coefficients fail {bad.name}", residual=bad.residual)
    d = coeffs.pencils()[0][1].shape[0]
    shift = np.kron(np.eye(n, k=-1), np.eye(d))
    edge = np.zeros((n * d, d), dtype=complex)
    edge[(n - 1) * d:, :] = np.eye(d)
    mats = {name: _toeplitz(x, y, n) for name, x, y, _ in coeffs.pencils()}
    if isinstance(coeffs, IsometryModelCoeffs7):
        return Tuple7(tuple(mats[f"Phi{i + 1}"] for i in range(6)) + (shift,), edge)
    return Tuple5((mats["W1"], mats["W2"], shift, mats["Wt1"], mats["Wt2"]), edge)


def random_model_coeffs7(d: int, rng: np.random.Generator, normal_frame: bool = True
                         ) -> IsometryModelCoeffs7:
    """Simultaneously diagonal coefficients with ``|a_i| + |a_{7-i}| <= 1`` per eigenvalue."""
    from scipy.stats import unitary_group
    w = unitary_group.rvs(d, random_state=rng) if (d > 1 and normal_frame) else np.eye(d)
    diag = np.zeros((6, d), dtype=complex)
    for i in range(3):
        mags = rng.dirichlet([1, 1, 1], size=d)[:, :2] * rng.uniform(0.3, 1.0, size=(d, 1))
        ph = np.exp(2j * np.pi * rng.random((d, 2)))
        diag[i], diag[5 - i] = (mags * ph).T
    return IsometryModelCoeffs7(tuple(w @ np.diag(v) @ adj(w) for v in diag))


def random_model_coeffs5(d: int, rng: np.random.Generator) -> IsometryModelCoeffs5:
    from scipy.stats import unitary_group
    w = unitary_group.rvs(d, random_state=rng) if d > 1 else np.eye(d)

    def pair(cap):
        mags = rng.dirichlet([1, 1, 1], size=d)[:, :2] * cap * rng.uniform(0.3, 1.0, (d, 1))
        v = mags * np.exp(2j * np.pi * rng.random((d, 2)))
        return [w @ np.diag(c) @ adj(w) for c in v.T]

    b1, b2 = pair(1.0)
    c1, c2 = pair(2.0)
    return IsometryModelCoeffs5(b1, b2, c1, c2)


# ---------------------------------------------------------------- Wold

def direct_sum(a: OperatorTuple, b: OperatorTuple) -> OperatorTuple:
    """Block-diagonal sum; edge masks are padded into the summed space."""
    if type(a) is not type(b):
        raise InputError("direct sum of different tuple kinds")
    import scipy.linalg
    ops = tuple(scipy.linalg.block_diag(x, y) for x, y in zip(a.ops, b.ops))
    masks = []
    if a.edge_mask is not None and a.edge_mask.shape[1]:
        masks.append(np.vstack([a.edge_mask, np.zeros((b.dim, a.edge_mask.shape[1]))]))
    if b.edge_mask is not None and b.edge_mask.shape[1]:
        masks.append(np.vstack([np.zeros((a.dim, b.edge_mask.shape[1])), b.edge_mask]))
    return type(a)(ops, np.hstack(masks) if masks else None)


@dataclass
class WoldDecomposition:
    unitary_basis: np.ndarray
    pure_basis: np.ndarray
    restricted_unitary: OperatorTuple | None
    restricted_pure: OperatorTuple | None
    residuals: ResidualReport

    @property
    def unitary_dim(self) -> int:
        return self.unitary_basis.shape[1]

    @property
    def pure_dim(self) -> int:
        return self.pure_basis.shape[1]

    def to_dict(self) -> dict:
        from .jsonio import encode_matrix, encode_tuple
        return {
            "unitary_dim": self.unitary_dim, "pure_dim": self.pure_dim,
            "unitary_basis": encode_matrix(self.unitary_basis) if self.unitary_dim else [],
            "restricted_unitary": None if self.restricted_unitary is None
            else encode_tuple(self.restricted_unitary),
            "restricted_pure": None if self.restricted_pure is None
            else encode_tuple(self.restricted_pure),
            "residuals": self.residuals.to_dict(),
        }


def _orth(m: np.ndarray, tol: float) -> np.ndarray:
    if m.shape[1] == 0:
        return m
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, s > tol]


def wold_decompose(tup, cfg: ToleranceConfig | None = None) -> WoldDecomposition:
    """Split off the largest subspace on which the isometric coordinate is
    unitary: the intersection of the ranges of its powers."""
    cfg = resolve(cfg)
    if not isinstance(tup, (Tuple7, Tuple5)):
        raise InputError("wold_decompose needs a Tuple7 or Tuple5")
    tup.require_commuting(cfg)
    v = tup.ops[6] if isinstance(tup, Tuple7) else tup.ops[2]
    q = tup.compression()
    iso = opnorm(q @ (adj(v) @ v - np.eye(tup.dim)) @ q)
    if iso > cfg.residual_tol:
        raise InputError("designated coordinate is not isometric off the edge", residual=iso)
    basis = np.eye(tup.dim, dtype=complex)
    for _ in range(tup.dim + 1):
        nxt = _orth(v @ basis, cfg.rank_tol)
        if nxt.shape[1] == basis.shape[1]:
            basis = nxt
            break
        basis = nxt
    h1 = basis
    if h1.shape[1]:
        full = np.linalg.svd(h1, full_matrices=True)[0]
        h2 = full[:, h1.shape[1]:]
    else:
        h2 = np.eye(tup.dim, dtype=complex)
    rep = ResidualReport()
    worst = 0.0
    for m in tup.ops:
        if h1.shape[1] and h2.shape[1]:
            worst = max(worst, opnorm(adj(h2) @ m @ h1), opnorm(adj(h1) @ m @ h2))
    rep.add("reducing", worst, cfg.residual_tol)
    if worst > cfg.residual_tol:
        raise NotReducing("range intersection does not reduce the tuple", residual=worst)
    cls = type(tup)
    ru = cls(tuple(adj(h1) @ m @ h1 for m in tup.ops)) if h1.shape[1] else None
    rp = None
    if h2.shape[1]:
        mask = None
        if tup.edge_mask is not None and tup.edge_mask.shape[1]:
            mask = _orth(adj(h2) @ tup.edge_mask, cfg.rank_tol)
        rp = cls(tuple(adj(h2) @ m @ h2 for m in tup.ops), mask)
    return WoldDecomposition(h1, h2, ru, rp, rep)
