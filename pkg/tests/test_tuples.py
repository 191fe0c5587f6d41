import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from gammaspec.errors import (DimensionMismatch, InputError, NotAContraction, NotCommuting,
                              NotSolvable)
from gammaspec.membership import slice_map
from gammaspec.mu import E3, E5, E7, pi_map
from gammaspec.tuples import (Tuple2, Tuple3, Tuple5, Tuple7, classify_tuple, contraction_probe,
                              embed5to7, eta_family_classify, eta_tuple, fractional_family,
                              rho_eval, rho_multipliers, solve_fundamental)

seeds = st.integers(0, 2**31 - 1)
angle = st.floats(0, 2 * np.pi)


def _point(st_, seed, scale=0.8):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((st_.n, st_.n)) + 1j * rng.standard_normal((st_.n, st_.n))
    return pi_map(st_, scale * g / np.linalg.norm(g, 2))


def _rho_scalar(variant, x, params):
    return rho_eval(variant, [np.array([[c]]) for c in x], rho_multipliers(variant, params))[1]


def test_tuple_validation():
    with pytest.raises(DimensionMismatch):
        Tuple3((np.eye(2), np.eye(2)))
    with pytest.raises(DimensionMismatch):
        Tuple2((np.eye(2), np.eye(3)))
    t = Tuple7.scalar(np.arange(7))
    assert t.T7[0, 0] == 6 and t.dim == 1
    with pytest.raises(NotCommuting):
        Tuple2((np.diag([1, -1]), np.array([[0, 1], [1, 0]]))).require_commuting(
            __import__("gammaspec").DEFAULT)


@given(seeds, angle, angle)
def test_rho7_is_difference_of_squared_moduli(seed, s, t):
    x1, x2, x3, x4, x5, x6, x7 = x = _point(E7, seed)
    z, w = np.exp(1j * s), np.exp(1j * t)
    num = x1 - z * x3 - w * x5 + z * w * x7
    den = 1 - z * x2 - w * x4 + z * w * x6
    assert _rho_scalar("RHO7_1", x, (z, w)) == pytest.approx(abs(den) ** 2 - abs(num) ** 2,
                                                            abs=1e-12)
    # the other two variants are the first one with coordinates relabelled
    y2 = x[[1, 0, 2, 3, 5, 4, 6]]
    assert _rho_scalar("RHO7_2", x, (z, w)) == pytest.approx(_rho_scalar("RHO7_1", y2, (z, w)),
                                                            abs=1e-12)


@given(seeds, angle)
def test_rho5_and_small_rhos(seed, s):
    z = np.exp(1j * s)
    x1, x2, x3, y1, y2 = x = _point(E5, seed)
    num = x1 - x2 * z + x3 * z * z
    den = 1 - y1 * z + y2 * z * z
    assert _rho_scalar("RHO5", x, z) == pytest.approx(abs(den) ** 2 - abs(num) ** 2, abs=1e-12)
    a, b, p = _point(E3, seed)
    assert _rho_scalar("RHO_TETRA", (a, b, p), z) == pytest.approx(
        abs(1 - z * b) ** 2 - abs(a - z * p) ** 2, abs=1e-12)
    sv, pv = 2 * a, a * a * 0.9
    assert _rho_scalar("RHO_SYM", (sv, pv), z) == pytest.approx(
        (abs(2 - z * sv) ** 2 - abs(2 * z * pv - sv) ** 2) / 2, abs=1e-12)


def test_rho_on_tetrablock_boundary_vanishes(rng):
    p = pi_map(E3, unitary_group.rvs(2, random_state=rng))
    for s in np.linspace(0, 2 * np.pi, 16, endpoint=False):
        assert abs(_rho_scalar("RHO_TETRA", p, np.exp(1j * s))) < 1e-12


def test_rho_rejects_non_contraction():
    with pytest.raises(NotAContraction):
        rho_eval("RHO_TETRA", Tuple3.scalar((0, 0, 1.5)))
    with pytest.raises(InputError):
        rho_eval("RHO9", Tuple3.scalar((0, 0, 0)))


@given(seeds, st.floats(0, 0.95), angle)
def test_fractional_families_extend_slices(seed, r, t):
    z = r * np.exp(1j * t)
    pts = np.array([_point(E7, seed + k, 0.7) for k in range(3)])
    tup = Tuple7(tuple(np.diag(pts[:, k]) for k in range(7)))
    for fam, sl in (("F7_Z1", "XT"), ("F7_Z2", "YT"), ("F7_Z3", "ZT")):
        tr = fractional_family(fam, tup, z)
        want = np.array([slice_map(sl, z, p) for p in pts])
        assert np.allclose([np.diag(m) for m in tr.ops], want.T, atol=1e-10)
    q = np.array([_point(E5, seed + k, 0.7) for k in range(3)])
    tup5 = Tuple5(tuple(np.diag(q[:, k]) for k in range(5)))
    for fam, sl in (("F5", "P5"), ("F5_SYM", "SYM5")):
        tr = fractional_family(fam, tup5, z)
        want = np.array([slice_map(sl, z, p) for p in q])
        assert np.allclose([np.diag(m) for m in tr.ops], want.T, atol=1e-10)


@given(seeds)
def test_fundamental_scalar_formula(seed):
    a, b, p = _point(E3, seed)
    sol = solve_fundamental(Tuple3.scalar((a, b, p)))
    assert sol.F1[0, 0] == pytest.approx((a - np.conj(b) * p) / (1 - abs(p) ** 2), abs=1e-12)
    assert sol.F2[0, 0] == pytest.approx((b - np.conj(a) * p) / (1 - abs(p) ** 2), abs=1e-12)


@given(seeds)
def test_fundamental_on_direct_sums(seed):
    rng = np.random.default_rng(seed)
    pts = np.array([_point(E3, seed + k) for k in range(4)])
    w = unitary_group.rvs(4, random_state=rng)
    tr = Tuple3(tuple(w @ np.diag(pts[:, k]) @ w.conj().T for k in range(3)))
    sol = solve_fundamental(tr)
    assert max(sol.residual1, sol.residual2) < 1e-10
    assert sol.max_radius <= 1 + 1e-8
    assert sol.defect_rank == 4


def test_fundamental_unsolvable_and_isometric_p():
    a = np.array([[0, 0], [1, 0]], dtype=complex)
    p = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(NotSolvable):
        solve_fundamental(Tuple3((a, np.zeros((2, 2)), p)))
    # unitary P leaves a zero-dimensional defect space and zero operators
    sol = solve_fundamental(Tuple3.scalar((0.3, 0.3, 1.0)))
    assert sol.defect_rank == 0 and sol.F1[0, 0] == 0


def test_classify_examples():
    assert classify_tuple("UNITARY7", Tuple7.scalar(np.ones(7))).verdict
    pt = (1j, 1j, -1, 1j, -1, -1, -1j)
    rep = classify_tuple("UNITARY7", Tuple7.scalar(pt), with_spectrum=True)
    assert rep.verdict and rep.spectrum_check[0]["in_set"]
    assert not classify_tuple("UNITARY7", Tuple7.scalar(0.5 * np.ones(7))).verdict
    assert classify_tuple("TETRA_UNITARY", Tuple3.scalar((0.0, 0.0, 1.0))).verdict
    with pytest.raises(InputError):
        classify_tuple("UNITARY9", Tuple7.scalar(np.ones(7)))


def test_classify_truncated_shift_needs_edge_mask():
    n = 6
    s = np.eye(n, k=-1)
    z = np.zeros((n, n))
    edge = np.zeros((n, 1))
    edge[-1] = 1
    ops = (z, z, z, z, z, z, s)
    assert classify_tuple("ISOMETRY7", Tuple7(ops, edge)).verdict
    assert not classify_tuple("ISOMETRY7", Tuple7(ops)).verdict
    assert not classify_tuple("UNITARY7", Tuple7(ops, edge)).verdict


@settings(max_examples=6)
@given(seeds)
def test_contraction_probe_scalar_interior(seed):
    assert contraction_probe(Tuple7.scalar(_point(E7, seed))).verdict
    assert contraction_probe(Tuple5.scalar(_point(E5, seed))).verdict


def test_contraction_probe_flags_outside(rng):
    u = unitary_group.rvs(3, random_state=rng)
    assert not contraction_probe(Tuple7.scalar(pi_map(E7, 1.3 * u))).verdict
    assert not contraction_probe(Tuple3.scalar((0.9, 0.9, 0.0))).verdict


def test_eta_and_embedding_maps():
    t = Tuple7.scalar(np.arange(1, 8))
    e = eta_tuple(t, 1j)
    assert np.allclose([m[0, 0] for m in e.ops], [1, 3 + 5j, 7j, 2 + 4j, 6j])
    t5 = Tuple5.scalar((1, 2, 3, 4, 5))
    assert np.allclose([m[0, 0] for m in embed5to7(t5).ops], [1, 2, 1, 2, 1, 5, 3])


def test_eta_family_of_unitary(rng):
    x = pi_map(E7, unitary_group.rvs(3, random_state=rng))
    assert eta_family_classify(Tuple7.scalar(x)).verdict
    assert not eta_family_classify(Tuple7.scalar(0.9 * x)).verdict
