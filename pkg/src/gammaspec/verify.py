"""Seeded property campaigns.

Each suite samples inputs, evaluates one or more properties and reports
per-property pass counts, the worst residual seen and a few counterexample
payloads. A passing suite means no counterexample was found at the sampled
scale, nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .boundary import boundary_slice_check, k1_membership, k_membership
from .config import ToleranceConfig, resolve
from .errors import InputError, UnknownSuite
from .jsonio import encode_point
from .linalg import opnorm
from .membership import (ROTATIONS, eta_project, membership, membership_oracle,
                         rotate_point)
from .models import (build_gamma5_unitary, build_gamma7_unitary, build_pure_isometry, direct_sum,
                     random_block_unitary, random_model_coeffs5, random_model_coeffs7,
                     wold_decompose)
from .mu import E3, E5, E7, mu_estimate, pi_map
from .probes import von_neumann_probe
from .sampling import haar_points, interior_matrix, tetra_contraction
from .tuples import (Tuple3, Tuple5, Tuple7, classify_tuple, contraction_probe, embed5to7,
                     eta_family_classify, eta_tuple, rho_eval, rho_multipliers, solve_fundamental)
from .verdict import Category

__all__ = ["SUITES", "verify", "Tally", "mixed_point", "interior_point"]

_MAX_EXAMPLES = 5


@dataclass
class Tally:
    """Pass count, worst residual and a few counterexamples for one property."""

    name: str
    count: int = 0
    passed: int = 0
    worst: float = 0.0
    counterexamples: list = field(default_factory=list)

    def record(self, ok: bool, residual: float = 0.0, payload=None) -> None:
        self.count += 1
        self.passed += bool(ok)
        if np.isfinite(residual):
            self.worst = max(self.worst, float(residual))
        if not ok and len(self.counterexamples) < _MAX_EXAMPLES:
            self.counterexamples.append(payload)

    @property
    def ok(self) -> bool:
        return self.passed == self.count

    def to_dict(self) -> dict:
        return {"name": self.name, "count": self.count, "passed": self.passed,
                "worst_residual": self.worst, "counterexamples": self.counterexamples}


# ---------------------------------------------------------------- generators

def mixed_point(structure, rng: np.random.Generator, scale=(0.3, 1.6)) -> np.ndarray:
    """Image of a norm-one matrix, then scaled; lands on either side of the boundary."""
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    return rng.uniform(*scale) * pi_map(structure, g / opnorm(g))


def interior_point(structure, rng: np.random.Generator, cfg: ToleranceConfig) -> np.ndarray:
    return pi_map(structure, interior_matrix(structure, rng, cfg))


def _domain(structure) -> str:
    return "GAMMA7" if structure is E7 else "GAMMA5"


def _decided(v, cfg) -> bool:
    return abs(v.margin) > cfg.undetermined_band


def _haar(n: int, rng) -> np.ndarray:
    return unitary_group.rvs(n, random_state=rng) if n > 1 else np.eye(1, dtype=complex)


def _diag_tuple(cls, pts: np.ndarray, rng) -> object:
    w = _haar(pts.shape[0], rng)
    return cls(tuple(w @ np.diag(pts[:, k]) @ w.conj().T for k in range(pts.shape[1])))


# ---------------------------------------------------------------- suites

def _rotations(rng, c, cfg):
    t = {v: Tally(f"rotation_{v}_preserves_category") for v in ROTATIONS}
    omegas = np.exp(2j * np.pi * (np.arange(c["omegas"]) + 0.5) / c["omegas"])
    for st, variants in ((E7, ("V2", "V2P", "V2PP")), (E5, ("V5",))):
        dom = _domain(st)
        for _ in range(c["points"]):
            x = mixed_point(st, rng)
            base = membership(dom, x, cfg=cfg)
            if not _decided(base, cfg):
                continue
            for v in variants:
                for om in omegas:
                    r = membership(dom, rotate_point(x, om, v, cfg), cfg=cfg)
                    if not _decided(r, cfg):
                        continue
                    t[v].record(r.category == base.category, 0.0,
                                {"point": encode_point(x), "omega": [om.real, om.imag]})
    return list(t.values())


def _eta_transfer(rng, c, cfg):
    inside = Tally("interior_point_projects_inside_for_every_eta")
    outside = Tally("outside_point_has_some_eta_projection_not_inside")
    etas = np.exp(2j * np.pi * np.arange(c["etas"]) / c["etas"])
    for _ in range(c["interior"]):
        x = interior_point(E7, rng, cfg)
        cats = [membership("GAMMA5", eta_project(x, e, cfg), cfg=cfg) for e in etas]
        worst = max(-v.margin for v in cats)
        inside.record(all(v.category is Category.INTERIOR for v in cats), max(0.0, worst),
                      {"point": encode_point(x)})
    while outside.count < c["outside"]:
        x = mixed_point(E7, rng, (1.0, 2.0))
        if membership("GAMMA7", x, cfg=cfg).margin >= -0.1:
            continue
        cats = [membership("GAMMA5", eta_project(x, e, cfg), cfg=cfg) for e in etas]
        outside.record(any(v.category is not Category.INTERIOR for v in cats), 0.0,
                       {"point": encode_point(x)})
    return [inside, outside]


def _boundary_inclusion(rng, c, cfg):
    k = Tally("unitary_image_in_K")
    k1 = Tally("unitary_image_in_K1")
    for _ in range(c["unitaries"]):
        u = unitary_group.rvs(3, random_state=rng)
        r = k_membership(pi_map(E7, u), cfg)
        k.record(r.in_set, r.residuals.worst(), None)
        r1 = k1_membership(pi_map(E5, u), cfg)
        k1.record(r1.in_set, r1.residuals.worst(), None)
    return [k, k1]


def _boundary_slices(rng, c, cfg):
    t7 = Tally("BW7_slice_test_agrees_with_K_relations")
    t5 = Tally("BW5_slice_test_agrees_with_K1_relations")
    for i in range(c["points"]):
        on = i % 2 == 0
        for st, tally, variant in ((E7, t7, "BW7"), (E5, t5, "BW5")):
            if on:
                x = haar_points(st, 1, rng)[0]
            else:
                x = mixed_point(st, rng, (0.2, 1.0))
            r = boundary_slice_check(variant, x, cfg)
            tally.record(bool(r.agrees_with_relations), 0.0,
                         {"point": encode_point(x), "slice_in_set": r.in_set})
    return [t7, t5]


def _slice_identity(rng, c, cfg):
    out = []
    for st in (E7, E5):
        dom = _domain(st)
        t = Tally(f"{dom}_slice_route_matches_membership")
        for _ in range(c["points"]):
            x = mixed_point(st, rng)
            a = membership(dom, x, cfg=cfg)
            b = membership_oracle(dom, x, cfg=cfg, route="slice")
            if _decided(a, cfg) and _decided(b, cfg):
                t.record(a.category == b.category, 0.0, {"point": encode_point(x)})
        out.append(t)
    return out


def _tetra_families(rng, c, cfg):
    t7 = Tally("seven_tuple_pairs_with_last_are_tetrablock_contractions")
    t5 = Tally("five_tuple_triples_are_tetrablock_contractions")
    for _ in range(c["tuples"]):
        dim = int(rng.integers(1, 4))
        tup = _diag_tuple(Tuple7, np.array([interior_point(E7, rng, cfg) for _ in range(dim)]), rng)
        n = tup.ops
        for i, j in ((0, 5), (1, 4), (2, 3)):
            r = contraction_probe(Tuple3((n[i], n[j], n[6])), cfg)
            t7.record(r.verdict, r.checks.worst(), {"pair": [i + 1, j + 1]})
        tup5 = _diag_tuple(Tuple5, np.array([interior_point(E5, rng, cfg) for _ in range(dim)]),
                           rng)
        s1, s2, s3, st1, st2 = tup5.ops
        for name, tr in (("S1,St2,S3", (s1, st2, s3)), ("St1/2,S2/2,S3", (st1 / 2, s2 / 2, s3)),
                         ("S2/2,St1/2,S3", (s2 / 2, st1 / 2, s3))):
            r = contraction_probe(Tuple3(tr), cfg)
            t5.record(r.verdict, r.checks.worst(), {"triple": name})
    return [t7, t5]


def _contraction_necessary(rng, c, cfg):
    probe = Tally("interior_scalar_tuple_passes_contraction_probe")
    bd = Tally("tetrablock_boundary_triple_has_vanishing_rho")
    for i in range(c["points"]):
        st, cls = (E7, Tuple7) if i % 2 == 0 else (E5, Tuple5)
        x = interior_point(st, rng, cfg)
        r = contraction_probe(cls.scalar(x), cfg, grid=16)
        probe.record(r.verdict, r.checks.worst(), {"point": encode_point(x)})
    zs = np.exp(2j * np.pi * np.arange(c["omegas"]) / c["omegas"])
    for _ in range(c["boundary"]):
        p = pi_map(E3, _haar(2, rng))
        worst = max(abs(rho_eval("RHO_TETRA", Tuple3.scalar(p), rho_multipliers("RHO_TETRA", z),
                                 cfg)[1]) for z in zs)
        bd.record(worst < 1e-12, worst, {"point": encode_point(p)})
    return [probe, bd]


def _fundamental(rng, c, cfg):
    res = Tally("fundamental_equations_solved")
    rad = Tally("numerical_radius_of_pencil_at_most_one")
    scal = Tally("scalar_solution_matches_closed_form")
    for _ in range(c["triples"]):
        tr = tetra_contraction(rng, cfg, c["max_dim"])
        sol = solve_fundamental(tr, cfg)
        r = max(sol.residual1, sol.residual2)
        res.record(r < cfg.residual_tol, r)
        rad.record(sol.max_radius <= 1 + cfg.residual_tol, max(0.0, sol.max_radius - 1))
        a, b, p = pi_map(E3, interior_matrix(E3, rng, cfg))
        f1 = solve_fundamental(Tuple3.scalar((a, b, p)), cfg).F1[0, 0]
        err = abs(f1 - (a - np.conj(b) * p) / (1 - abs(p) ** 2))
        scal.record(err < 1e-12, err, {"point": encode_point((a, b, p))})
    return [res, rad, scal]


def _unitary_builders(rng, c, cfg):
    out = {k: Tally(f"built_{k}_classifies_with_spectrum_in_boundary")
           for k in ("UNITARY7", "UNITARY5")}
    for i in range(c["unitaries"]):
        u = random_block_unitary((1, 2, 4)[i % 3], rng)
        for kind, build in (("UNITARY7", build_gamma7_unitary), ("UNITARY5", build_gamma5_unitary)):
            r = classify_tuple(kind, build(u, cfg), with_spectrum=True, cfg=cfg)
            out[kind].record(r.verdict, r.checks.worst(), {"m": u.m})
    return list(out.values())


def _isometry_models(rng, c, cfg):
    t7 = Tally("seven_point_model_is_isometry")
    t5 = Tally("five_point_model_is_isometry")
    te = Tally("eta_family_of_seven_point_model_is_isometry")
    for i in range(c["models"]):
        d = int(rng.integers(1, 4))
        m7 = build_pure_isometry(random_model_coeffs7(d, rng), c["n"], cfg)
        r = classify_tuple("ISOMETRY7", m7, cfg=cfg)
        t7.record(r.verdict, r.checks.worst(), {"E_dim": d})
        r = eta_family_classify(m7, "ISOMETRY", cfg=cfg)
        te.record(r.verdict, r.checks.worst(), {"E_dim": d})
        m5 = build_pure_isometry(random_model_coeffs5(d, rng), c["n"], cfg)
        r = classify_tuple("ISOMETRY5", m5, cfg=cfg)
        t5.record(r.verdict, r.checks.worst(), {"E_dim": d})
    return [t7, t5, te]


def _gamma_unitary(st, dim: int, rng):
    cls = Tuple7 if st is E7 else Tuple5
    return _diag_tuple(cls, np.array(haar_points(st, dim, rng)), rng)


def _wold(rng, c, cfg):
    dims = Tally("unitary_dimension_recovered")
    parts = Tally("restricted_parts_classify")
    red = Tally("subspaces_reduce_the_tuple")
    for i in range(c["sums"]):
        st = E7 if i % 2 == 0 else E5
        dim = int(rng.integers(2, 7))
        u = _gamma_unitary(st, dim, rng)
        gen = random_model_coeffs7 if st is E7 else random_model_coeffs5
        pure = build_pure_isometry(gen(int(rng.integers(1, 3)), rng), c["n"], cfg)
        tup = direct_sum(u, pure).conjugate(_haar(u.dim + pure.dim, rng))
        w = wold_decompose(tup, cfg)
        dims.record(w.unitary_dim == dim, 0.0, {"expected": dim, "got": w.unitary_dim})
        red.record(w.residuals.passed and w.residuals.worst() < 1e-8, w.residuals.worst())
        suffix = "7" if st is E7 else "5"
        ok, worst = True, 0.0
        if w.restricted_unitary is not None:
            r = classify_tuple("UNITARY" + suffix, w.restricted_unitary, cfg=cfg)
            ok, worst = ok and r.verdict, max(worst, r.checks.worst())
        if w.restricted_pure is not None:
            r = classify_tuple("ISOMETRY" + suffix, w.restricted_pure, cfg=cfg)
            ok, worst = ok and r.verdict, max(worst, r.checks.worst())
            ok = ok and wold_decompose(w.restricted_pure, cfg).unitary_dim == 0
        parts.record(ok, worst)
    return [dims, parts, red]


def _embedding(rng, c, cfg):
    up = Tally("embedded_five_point_unitary_is_seven_point_unitary")
    down = Tally("eta_projection_of_seven_point_unitary_is_five_point_unitary")
    for i in range(c["unitaries"]):
        u = random_block_unitary((1, 2)[i % 2], rng)
        r = classify_tuple("UNITARY7", embed5to7(build_gamma5_unitary(u, cfg)), cfg=cfg)
        up.record(r.verdict, r.checks.worst())
        t7 = build_gamma7_unitary(u, cfg)
        eta = np.exp(2j * np.pi * rng.random())
        r = classify_tuple("UNITARY5", eta_tuple(t7, eta), cfg=cfg)
        down.record(r.verdict, r.checks.worst())
    return [up, down]


def _planted_violator(st, rng, cfg):
    """Image of a scaled unitary, which breaks the coordinate bound."""
    dom = _domain(st)
    while True:
        x = pi_map(st, rng.uniform(1.1, 1.5) * unitary_group.rvs(3, random_state=rng))
        if membership(dom, x, cfg=cfg).margin < -0.2:
            return x


def _von_neumann(rng, c, cfg):
    clean = Tally("no_violation_at_interior_scalar_tuples")
    planted = Tally("planted_violator_flagged")
    for i in range(c["points"]):
        st, cls = (E7, Tuple7) if i % 2 == 0 else (E5, Tuple5)
        x = interior_point(st, rng, cfg)
        r = von_neumann_probe(cls.scalar(x), n_polys=c["polys"], cfg=cfg)
        clean.record(r.verdict, r.info["worst_excess"], {"point": encode_point(x)})
    for i in range(c["planted"]):
        st, cls = (E7, Tuple7) if i % 2 == 0 else (E5, Tuple5)
        x = _planted_violator(st, rng, cfg)
        flagged = (not von_neumann_probe(cls.scalar(x), n_polys=c["polys"], cfg=cfg).verdict
                   or not contraction_probe(cls.scalar(x), cfg).verdict)
        planted.record(flagged, 0.0, {"point": encode_point(x)})
    return [clean, planted]


def _mu_consistency(rng, c, cfg):
    diag = Tally("mu_of_diagonal_is_max_modulus")
    ident = Tally("mu_of_identity_is_one")
    homog = Tally("mu_is_homogeneous")
    for _ in range(c["matrices"]):
        d = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        for st in (E7, E5):
            err = abs(mu_estimate(st, np.diag(d), cfg) - np.abs(d).max())
            diag.record(err < 1e-6, err, {"diag": encode_point(d)})
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        for st in (E7, E5):
            m = mu_estimate(st, a, cfg)
            for t in (0.5, 2.0):
                err = abs(mu_estimate(st, t * a, cfg) - t * m)
                homog.record(err < 1e-5, err, {"t": t})
    for st in (E7, E5, E3):
        err = abs(mu_estimate(st, np.eye(st.n), cfg) - 1)
        ident.record(err < 1e-6, err)
    return [diag, ident, homog]


def _cross_agreement(rng, c, cfg):
    out = []
    for st in (E7, E5):
        dom = _domain(st)
        t = Tally(f"{dom}_membership_agrees_with_oracle")
        for _ in range(c["points"]):
            x = mixed_point(st, rng)
            a = membership(dom, x, cfg=cfg)
            b = membership_oracle(dom, x, cfg=cfg)
            if _decided(a, cfg) and _decided(b, cfg):
                t.record(a.category == b.category, 0.0,
                         {"point": encode_point(x), "margins": [a.margin, b.margin]})
        out.append(t)
    return out


SUITES = {
    "rotations": (_rotations, {"points": 100, "omegas": 16},
                  "circle actions preserve membership"),
    "eta_transfer": (_eta_transfer, {"interior": 50, "outside": 50, "etas": 64},
                     "seven-point membership is equivalent to membership of all eta projections"),
    "boundary_inclusion": (_boundary_inclusion, {"unitaries": 1000},
                           "images of unitaries lie in K and K1"),
    "boundary_slices": (_boundary_slices, {"points": 50},
                        "slice descriptions of K and K1 agree with their relations"),
    "slice_identity": (_slice_identity, {"points": 100},
                       "slice criteria agree with the rational-function criteria"),
    "tetra_families": (_tetra_families, {"tuples": 30},
                       "coordinate triples of contractions are tetrablock contractions"),
    "contraction_necessary": (_contraction_necessary,
                              {"points": 200, "boundary": 50, "omegas": 64},
                              "contractions satisfy the positivity tests"),
    "fundamental": (_fundamental, {"triples": 200, "max_dim": 16},
                    "tetrablock contractions have fundamental operators of numerical radius"
                    " at most one"),
    "unitary_builders": (_unitary_builders, {"unitaries": 100},
                         "minor tuples of block unitaries are unitaries"),
    "isometry_models": (_isometry_models, {"models": 50, "n": 32},
                        "pencil models are pure isometries"),
    "wold": (_wold, {"sums": 50, "n": 32},
             "isometries split into a unitary and a pure part"),
    "embedding": (_embedding, {"unitaries": 50},
                  "embedding and eta projection map unitaries to unitaries"),
    "von_neumann": (_von_neumann, {"points": 100, "polys": 50, "planted": 20},
                    "contractions satisfy the polynomial inequality on sampled polynomials"),
    "mu_consistency": (_mu_consistency, {"matrices": 100},
                       "structured singular value agrees with closed forms"),
    "cross_agreement": (_cross_agreement, {"points": 500},
                        "membership agrees with the independent oracle"),
}


def verify(suite: str, seed: int = 0, counts: dict | None = None,
           cfg: ToleranceConfig | None = None) -> dict:
    """Run a named campaign and return a JSON-ready report."""
    cfg = resolve(cfg)
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}", allowed=sorted(SUITES))
    fn, defaults, statement = SUITES[suite]
    c = dict(defaults)
    for k, v in (counts or {}).items():
        if k not in defaults:
            raise InputError(f"suite {suite!r} has no count {k!r}", allowed=sorted(defaults))
        c[k] = int(v)
    tallies = fn(np.random.default_rng(seed), c, cfg)
    passed = all(t.ok for t in tallies)
    scale = ", ".join(f"{k}={v}" for k, v in sorted(c.items()))
    return {
        "suite": suite,
        "property": statement,
        "seed": seed,
        "counts": c,
        "properties": [t.to_dict() for t in tallies],
        "passed": passed,
        "conclusion": (f"no counterexample found at scale ({scale}, seed={seed})" if passed
                       else f"counterexample found at scale ({scale}, seed={seed})"),
    }
