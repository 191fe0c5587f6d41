"""Point membership for the symmetrized bidisc, the tetrablock and the
five- and seven-coordinate domains, together with the rational maps,
slices, rotations and projection that relate them.

Coordinates:

* SYM2   ``(s, p)``
* TETRA3 ``(x1, x2, x3)``
* GAMMA5 ``(x1, x2, x3, y1, y2)``
* GAMMA7 ``(x1, ..., x7)``
"""

from __future__ import annotations

import cmath

import numpy as np
import scipy.optimize

from .config import ToleranceConfig, resolve
from .errors import DenominatorVanishes, DimensionMismatch, InputError
from .linalg import golden_max
from .verdict import Category, MembershipVerdict, categorize

DOMAIN_DIM = {"SYM2": 2, "TETRA3": 3, "GAMMA5": 5, "GAMMA7": 7}
PSI_VARIANTS = ("PSI7_1", "PSI7_2", "PSI7_3", "PSI5", "PSI3")
SLICE_VARIANTS = ("XT", "YT", "ZT", "P5", "SYM5")
ROTATIONS = ("V2", "V2P", "V2PP", "V5")
_SUP_CAP = 1e12

__all__ = [
    "Category", "MembershipVerdict", "DOMAIN_DIM", "as_point", "psi_eval",
    "slice_map", "eta_project", "rotate_point", "membership",
    "membership_oracle", "oracle_routes", "sym2_roots",
]


def as_point(x, n: int, name: str = "point") -> np.ndarray:
    v = np.asarray(x, dtype=complex).reshape(-1)
    if v.shape[0] != n:
        raise DimensionMismatch(f"{name} must have {n} coordinates", got=int(v.shape[0]))
    if not np.all(np.isfinite(v)):
        raise InputError(f"{name} has non-finite coordinates")
    return v


def _domain(domain: str) -> int:
    if domain not in DOMAIN_DIM:
        raise InputError(f"unknown domain {domain!r}", allowed=sorted(DOMAIN_DIM))
    return DOMAIN_DIM[domain]


# ---------------------------------------------------------------- rational maps

def _psi_numden(variant: str, x: np.ndarray, z, w=None):
    """Numerator and denominator, vectorised over ``z`` (and ``w``)."""
    if variant == "PSI7_1":
        x1, x2, x3, x4, x5, x6, x7 = x
        return (x1 - z * x3 - w * x5 + z * w * x7, 1 - z * x2 - w * x4 + z * w * x6)
    if variant == "PSI7_2":
        x1, x2, x3, x4, x5, x6, x7 = x
        return (x2 - z * x3 - w * x6 + z * w * x7, 1 - z * x1 - w * x4 + z * w * x5)
    if variant == "PSI7_3":
        x1, x2, x3, x4, x5, x6, x7 = x
        return (x4 - z * x5 - w * x6 + z * w * x7, 1 - z * x1 - w * x2 + z * w * x3)
    if variant == "PSI5":
        x1, x2, x3, y1, y2 = x
        return (x3 * z * z - x2 * z + x1, y2 * z * z - y1 * z + 1)
    if variant == "PSI3":
        a, b, p = x
        return (a - z * p, 1 - z * b)
    raise InputError(f"unknown psi variant {variant!r}", allowed=list(PSI_VARIANTS))


def psi_eval(variant: str, params, point, cfg: ToleranceConfig | None = None) -> complex:
    """Evaluate one of the linear-fractional test functions.

    ``PSI7_*`` take ``(z, w)`` and a seven-point; ``PSI5`` takes ``z`` and a
    five-point; ``PSI3`` takes ``z`` and ``(a, b, p)`` giving
    ``(a - z p) / (1 - z b)``.
    """
    cfg = resolve(cfg)
    dims = {"PSI7_1": 7, "PSI7_2": 7, "PSI7_3": 7, "PSI5": 5, "PSI3": 3}
    if variant not in dims:
        raise InputError(f"unknown psi variant {variant!r}", allowed=list(PSI_VARIANTS))
    x = as_point(point, dims[variant])
    prm = np.atleast_1d(np.asarray(params, dtype=complex))
    if variant.startswith("PSI7"):
        if prm.shape != (2,):
            raise DimensionMismatch("PSI7 variants take (z, w)")
        num, den = _psi_numden(variant, x, prm[0], prm[1])
    else:
        if prm.shape != (1,):
            raise DimensionMismatch(f"{variant} takes a single z")
        num, den = _psi_numden(variant, x, prm[0])
    if abs(den) <= cfg.residual_tol:
        raise DenominatorVanishes("denominator vanishes", params=[complex(v) for v in prm])
    return complex(num / den)


def slice_map(variant: str, z: complex, point, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """One-parameter slices into tetrablock or symmetrized-bidisc coordinates."""
    cfg = resolve(cfg)
    z = complex(z)
    if variant in ("XT", "YT", "ZT"):
        x1, x2, x3, x4, x5, x6, x7 = as_point(point, 7)
        if variant == "XT":
            num, den = (x2 - z * x3, x4 - z * x5, x6 - z * x7), 1 - x1 * z
        elif variant == "YT":
            num, den = (x1 - z * x3, x4 - z * x6, x5 - z * x7), 1 - x2 * z
        else:
            num, den = (x1 - z * x5, x2 - z * x6, x3 - z * x7), 1 - x4 * z
    elif variant == "P5":
        x1, x2, x3, y1, y2 = as_point(point, 5)
        num, den = (2 * x1 - z * x2, y1 - 2 * z * y2, x2 - 2 * z * x3), 2 - y1 * z
    elif variant == "SYM5":
        x1, x2, x3, y1, y2 = as_point(point, 5)
        num, den = (y1 - z * x2, y2 - z * x3), 1 - z * x1
    else:
        raise InputError(f"unknown slice variant {variant!r}", allowed=list(SLICE_VARIANTS))
    if abs(den) <= cfg.residual_tol:
        raise DenominatorVanishes("slice denominator vanishes", z=z)
    return np.array(num, dtype=complex) / den


def eta_project(x, eta: complex, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """``(x1, x3 + eta x5, eta x7, x2 + eta x4, eta x6)``."""
    cfg = resolve(cfg)
    x1, x2, x3, x4, x5, x6, x7 = as_point(x, 7)
    eta = complex(eta)
    if abs(eta) > 1 + cfg.residual_tol:
        raise InputError("eta must lie in the closed unit disc", eta=eta)
    return np.array([x1, x3 + eta * x5, eta * x7, x2 + eta * x4, eta * x6], dtype=complex)


def rotate_point(point, omega: complex, variant: str,
                 cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Scalar circle actions that preserve each domain.

    V2, V2P and V2PP rotate the first and third, first and second, and
    second and third polydisc variables of the seven-point polynomial; V5
    rotates the second variable of the five-point polynomial.
    """
    cfg = resolve(cfg)
    w = complex(omega)
    if abs(abs(w) - 1) > cfg.residual_tol:
        raise InputError("omega must be unimodular", omega=w)
    if variant == "V5":
        x1, x2, x3, y1, y2 = as_point(point, 5)
        return np.array([x1, w * x2, w * w * x3, w * y1, w * w * y2])
    x1, x2, x3, x4, x5, x6, x7 = as_point(point, 7)
    if variant == "V2":
        return np.array([w * x1, x2, w * x3, w * x4, w * w * x5, w * x6, w * w * x7])
    if variant == "V2P":
        return np.array([w * x1, w * x2, w * w * x3, x4, w * x5, w * x6, w * w * x7])
    if variant == "V2PP":
        return np.array([x1, w * x2, w * x3, w * x4, w * x5, w * w * x6, w * w * x7])
    raise InputError(f"unknown rotation {variant!r}", allowed=list(ROTATIONS))


# ---------------------------------------------------------------- suprema

def _abs_ratio(num, den):
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.abs(num) / np.abs(den)
    r = np.where((np.abs(den) == 0) & (np.abs(num) == 0), np.nan, r)
    return np.minimum(r, _SUP_CAP)


def _abs_ratio_scalar(num, den) -> float:
    a, b = abs(complex(num)), abs(complex(den))
    if b == 0:
        return np.nan if a == 0 else _SUP_CAP
    return min(a / b, _SUP_CAP)


def _circle_sup(numden, cfg: ToleranceConfig) -> tuple[float, float]:
    """Sup over the unit circle of ``|num/den|``; returns (value, angle)."""
    n = cfg.grid_1d
    theta = 2 * np.pi * np.arange(n) / n
    vals = _abs_ratio(*numden(np.exp(1j * theta)))
    if np.all(np.isnan(vals)):
        return 0.0, 0.0
    k = int(np.nanargmax(vals))

    def f(t):
        v = _abs_ratio_scalar(*numden(cmath.exp(1j * t)))
        return -np.inf if np.isnan(v) else v

    h = 2 * np.pi / n
    t, v = golden_max(f, theta[k] - h, theta[k] + h, cfg.refine_iters)
    if not v > vals[k]:
        t, v = theta[k], float(vals[k])
    return float(v), float(np.mod(t, 2 * np.pi))


def _torus_sup(numden, cfg: ToleranceConfig) -> tuple[float, tuple[float, float]]:
    """Sup over the two-torus of ``|num/den|``; returns (value, angles)."""
    n = cfg.grid_2d
    theta = 2 * np.pi * np.arange(n) / n
    z = np.exp(1j * theta)[:, None]
    w = np.exp(1j * theta)[None, :]
    vals = _abs_ratio(*numden(z, w))
    flat = np.where(np.isnan(vals), -np.inf, vals).reshape(-1)
    if not np.isfinite(flat).any():
        return 0.0, (0.0, 0.0)

    def f(t):
        v = _abs_ratio_scalar(*numden(cmath.exp(1j * t[0]), cmath.exp(1j * t[1])))
        return np.inf if np.isnan(v) else -v

    h = 2 * np.pi / n
    best_v, best_t = -np.inf, (0.0, 0.0)
    fin = flat[np.isfinite(flat)]
    if fin.max() - fin.min() <= 1e-13 * max(1.0, fin.max()):
        # constant modulus on the grid: nothing to refine
        k = int(np.argmax(flat))
        return float(flat[k]), (float(theta[k // n]), float(theta[k % n]))
    for k in np.argsort(flat)[::-1][:3]:
        start = np.array([theta[k // n], theta[k % n]])
        v0 = float(flat[k])
        if v0 >= _SUP_CAP:
            v, t = v0, start
        else:
            res = scipy.optimize.minimize(
                f, start, method="Nelder-Mead",
                options={"xatol": 1e-9, "fatol": 1e-15, "maxiter": 20 * max(cfg.refine_iters, 1),
                         "initial_simplex": start + h * np.array([[0, 0], [1, 0], [0, 1]])})
            v, t = (-float(res.fun), res.x) if -res.fun > v0 else (v0, start)
        if v > best_v:
            best_v, best_t = v, (float(np.mod(t[0], 2 * np.pi)), float(np.mod(t[1], 2 * np.pi)))
    return float(best_v), best_t


# ---------------------------------------------------------------- membership

def sym2_roots(s: complex, p: complex) -> tuple[complex, complex]:
    """Roots of ``lambda^2 - s lambda + p``."""
    disc = np.sqrt(complex(s) * s - 4 * p)
    l1, l2 = (s + disc) / 2, (s - disc) / 2
    # the smaller root via Vieta avoids cancellation
    if abs(l1) < abs(l2):
        l1, l2 = l2, l1
    if l1 != 0:
        l2 = p / l1
    return complex(l1), complex(l2)


def _sym2_margin(s, p) -> float:
    return 1.0 - max(abs(r) for r in sym2_roots(s, p))


def _close(a, b, cfg) -> bool:
    return abs(a - b) <= cfg.residual_tol * (1 + abs(a) + abs(b))


def _tetra(x: np.ndarray, closed: bool, cfg: ToleranceConfig) -> MembershipVerdict:
    x1, x2, x3 = x
    bound = 1.0 - float(np.max(np.abs(x)))
    if bound < -cfg.undetermined_band:
        return categorize(bound, closed, cfg, criterion="coordinate_bound")
    if _close(x3, x1 * x2, cfg):
        margin = min(1 - abs(x1), 1 - abs(x2))
        return categorize(margin, closed, cfg, criterion="degenerate")
    sup, t = _circle_sup(lambda z: _psi_numden("PSI3", x, z), cfg)
    margin = min(bound, 1 - abs(x2), 1 - sup)
    return categorize(margin, closed, cfg, witness=(t,), criterion="sup_circle")


def _gamma5(x: np.ndarray, closed: bool, cfg: ToleranceConfig) -> MembershipVerdict:
    x1, x2, x3, y1, y2 = x
    bound = float(np.min(np.array([1, 2, 1, 2, 1]) - np.abs(x)))
    if bound < -cfg.undetermined_band:
        return categorize(bound, closed, cfg, criterion="coordinate_bound")
    den_margin = _sym2_margin(y1, y2)
    if den_margin < -cfg.undetermined_band:
        return categorize(den_margin, closed, cfg, criterion="denominator")
    if _close(x3, x1 * y2, cfg) and _close(x2, x1 * y1, cfg):
        margin = min(1 - abs(x1), den_margin, bound)
        return categorize(margin, closed, cfg, criterion="degenerate")
    sup, t = _circle_sup(lambda z: _psi_numden("PSI5", x, z), cfg)
    margin = min(bound, den_margin, 1 - sup)
    return categorize(margin, closed, cfg, witness=(t,), criterion="sup_circle")


def _gamma7(x: np.ndarray, closed: bool, cfg: ToleranceConfig) -> MembershipVerdict:
    x1, x2, x3, x4, x5, x6, x7 = x
    bound = 1.0 - float(np.max(np.abs(x)))
    if bound < -cfg.undetermined_band:
        return categorize(bound, closed, cfg, criterion="coordinate_bound")
    inner = _tetra(np.array([x2, x4, x6]), closed, cfg)
    if inner.margin < -cfg.undetermined_band:
        return categorize(inner.margin, closed, cfg, criterion="tetrablock_part")
    if _close(x7, x6 * x1, cfg) and _close(x3, x2 * x1, cfg) and _close(x5, x4 * x1, cfg):
        margin = min(1 - abs(x1), inner.margin)
        return categorize(margin, closed, cfg, criterion="degenerate")
    sup, t = _torus_sup(lambda z, w: _psi_numden("PSI7_1", x, z, w), cfg)
    margin = min(bound, inner.margin, 1 - sup)
    return categorize(margin, closed, cfg, witness=t, criterion="sup_torus")


def membership(domain: str, point, closed: bool = False,
               cfg: ToleranceConfig | None = None) -> MembershipVerdict:
    """Decide membership of ``point`` in the open domain (or its closure).

    The margin is ``1 - sup|Psi|`` over the relevant torus, lowered by any
    necessary condition (coordinate bounds, denominator zero-freeness)
    that is tighter.
    """
    cfg = resolve(cfg)
    x = as_point(point, _domain(domain))
    if domain == "SYM2":
        return categorize(_sym2_margin(*x), closed, cfg, criterion="roots")
    if domain == "TETRA3":
        return _tetra(x, closed, cfg)
    if domain == "GAMMA5":
        return _gamma5(x, closed, cfg)
    return _gamma7(x, closed, cfg)


# ---------------------------------------------------------------- oracles

def _sym2_closed_form(x: np.ndarray) -> float:
    s, p = x
    return min((1 - abs(p) ** 2) - abs(s - np.conj(s) * p), 2 - abs(s))


def _tetra_closed_form(x: np.ndarray) -> float:
    x1, x2, x3 = x
    lhs = abs(x1 - np.conj(x2) * x3) + abs(x2 - np.conj(x1) * x3)
    return min((1 - abs(x3) ** 2) - lhs, 1 - abs(x1), 1 - abs(x2))


def _circle_min(f, cfg: ToleranceConfig) -> tuple[float, float]:
    n = cfg.grid_1d
    theta = 2 * np.pi * np.arange(n) / n
    vals = np.array([f(t) for t in theta])
    k = int(np.argmin(vals))
    h = 2 * np.pi / n
    t, v = golden_max(lambda u: -f(u), theta[k] - h, theta[k] + h, cfg.refine_iters)
    if -v < vals[k]:
        return float(-v), float(np.mod(t, 2 * np.pi))
    return float(vals[k]), float(theta[k])


def _slice_route(domain: str, x: np.ndarray, closed: bool, cfg: ToleranceConfig) -> MembershipVerdict:
    """Zero-freeness through one-variable slices.

    The polynomial factors as ``(1 - x1 z1)`` times a lower polynomial whose
    coefficients are the slice at ``z1``; for ``|x1| < 1`` an argument
    principle count in ``z1`` reduces the test to ``z1`` on the circle.
    """
    first = 1 - abs(x[0])
    if first < -cfg.undetermined_band or first <= cfg.residual_tol:
        return categorize(first, closed, cfg, criterion="slice_denominator")
    if domain == "GAMMA7":
        variant, inner = "XT", _tetra_closed_form
    else:
        variant, inner = "SYM5", _sym2_closed_form
    worst, t = _circle_min(lambda u: inner(slice_map(variant, np.exp(1j * u), x, cfg)), cfg)
    return categorize(min(first, worst), closed, cfg, witness=(t,), criterion=f"slice_{variant}")


def _mu_route(domain: str, x: np.ndarray, closed: bool, cfg: ToleranceConfig) -> MembershipVerdict:
    from .mu import E2, E3, E5, E7, mu_membership, pi_preimage
    structure = {"SYM2": E2, "TETRA3": E3, "GAMMA5": E5, "GAMMA7": E7}[domain]
    return mu_membership(structure, pi_preimage(structure, x), closed, cfg)


def oracle_routes(domain: str, point, closed: bool = False,
                  cfg: ToleranceConfig | None = None) -> dict[str, MembershipVerdict]:
    """Every independent membership route available for ``domain``.

    * ``mu``: build a matrix with the given minor sums and compute its
      structured singular value as a torus maximum of spectral radii.
    * ``slice``: slices into the next smaller domain, tested in closed form.
    * ``closed_form``: explicit inequalities for the two small domains.
    """
    cfg = resolve(cfg)
    x = as_point(point, _domain(domain))
    out = {"mu": _mu_route(domain, x, closed, cfg)}
    if domain == "SYM2":
        out["closed_form"] = categorize(_sym2_closed_form(x), closed, cfg, criterion="closed_form")
    elif domain == "TETRA3":
        out["closed_form"] = categorize(_tetra_closed_form(x), closed, cfg, criterion="closed_form")
    else:
        out["slice"] = _slice_route(domain, x, closed, cfg)
    return out


def membership_oracle(domain: str, point, closed: bool = False,
                      cfg: ToleranceConfig | None = None, route: str | None = None
                      ) -> MembershipVerdict:
    """Verdict from an independent route (``closed_form`` for the small
    domains, ``mu`` for the others unless ``route`` says otherwise)."""
    cfg = resolve(cfg)
    _domain(domain)
    if route is None:
        route = "closed_form" if domain in ("SYM2", "TETRA3") else "mu"
    x = as_point(point, DOMAIN_DIM[domain])
    if route == "mu":
        return _mu_route(domain, x, closed, cfg)
    if route == "closed_form" and domain in ("SYM2", "TETRA3"):
        f = _sym2_closed_form if domain == "SYM2" else _tetra_closed_form
        return categorize(f(x), closed, cfg, criterion="closed_form")
    if route == "slice" and domain in ("GAMMA5", "GAMMA7"):
        return _slice_route(domain, x, closed, cfg)
    raise InputError(f"route {route!r} not available for {domain}")
