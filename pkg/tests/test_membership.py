import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import unitary_group

from gammaspec.errors import DenominatorVanishes, DimensionMismatch, InputError
from gammaspec.membership import (eta_project, membership, membership_oracle, oracle_routes,
                                  psi_eval, rotate_point, slice_map, sym2_roots)
from gammaspec.mu import E2, E3, E5, E7, pi_map
from gammaspec.verdict import Category

seeds = st.integers(0, 2**31 - 1)
unit = st.floats(0.05, 0.95)


def _g(seed, n=3):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _schur_block(a, z):
    """Lower-right 2x2 block after eliminating the first variable at ``z``."""
    return a[1:, 1:] + z * np.outer(a[1:, 0], a[0, 1:]) / (1 - a[0, 0] * z)


def test_zero_is_interior_with_unit_margin():
    for dom, n in (("SYM2", 2), ("TETRA3", 3), ("GAMMA5", 5), ("GAMMA7", 7)):
        v = membership(dom, np.zeros(n))
        assert v.category is Category.INTERIOR
        assert v.margin == pytest.approx(1.0)


def test_point_length_checked():
    with pytest.raises(DimensionMismatch):
        membership("GAMMA7", np.zeros(5))
    with pytest.raises(InputError):
        membership("GAMMA9", np.zeros(5))


@given(unit, unit, st.floats(0, 6.28), st.floats(0, 6.28))
def test_sym2_from_roots(r1, r2, t1, t2):
    l1, l2 = r1 * np.exp(1j * t1), r2 * np.exp(1j * t2)
    v = membership("SYM2", (l1 + l2, l1 * l2))
    assert v.category is Category.INTERIOR
    assert v.margin == pytest.approx(1 - max(r1, r2), abs=1e-9)
    assert membership("SYM2", (l1 / r1 * 1.1 + l2, l1 / r1 * 1.1 * l2)).category is Category.OUTSIDE
    a, b = sym2_roots(l1 + l2, l1 * l2)
    assert sorted([abs(a), abs(b)]) == pytest.approx(sorted([r1, r2]), abs=1e-9)


@given(seeds, st.floats(0.3, 1.7))
def test_tetra_matches_closed_form(seed, scale):
    a = _g(seed, 2)
    x = scale * pi_map(E3, a / np.linalg.norm(a, 2))
    v = membership("TETRA3", x)
    w = membership_oracle("TETRA3", x)
    if abs(v.margin) > 1e-6 and abs(w.margin) > 1e-6:
        assert v.category == w.category


@given(unit, unit, unit, st.floats(0, 6.28))
def test_product_points(a, b, c, t):
    x = pi_map(E7, np.diag([a * np.exp(1j * t), b, -c]))
    v = membership("GAMMA7", x)
    assert v.category is Category.INTERIOR
    assert v.margin == pytest.approx(1 - max(a, b, c), abs=1e-9)


@given(seeds, st.floats(0.3, 1.6))
def test_gamma7_agrees_with_mu_oracle(seed, scale):
    a = _g(seed)
    x = scale * pi_map(E7, a / np.linalg.norm(a, 2))
    v = membership("GAMMA7", x)
    w = membership_oracle("GAMMA7", x)
    if abs(v.margin) > 1e-6 and abs(w.margin) > 1e-6:
        assert v.category == w.category


@given(seeds, st.floats(0.3, 1.6))
def test_gamma5_agrees_with_mu_oracle(seed, scale):
    a = _g(seed)
    x = scale * pi_map(E5, a / np.linalg.norm(a, 2))
    v = membership("GAMMA5", x)
    w = membership_oracle("GAMMA5", x)
    if abs(v.margin) > 1e-6 and abs(w.margin) > 1e-6:
        assert v.category == w.category


def test_unitary_images_are_on_the_boundary(rng):
    u = unitary_group.rvs(3, random_state=rng)
    for st_, dom in ((E7, "GAMMA7"), (E5, "GAMMA5")):
        x = pi_map(st_, u)
        assert membership(dom, x, closed=True).category is Category.CLOSURE
        assert membership(dom, x).category is Category.UNDETERMINED
        assert membership(dom, pi_map(st_, 0.9 * u)).category is Category.INTERIOR
        assert membership(dom, pi_map(st_, 1.2 * u)).category is Category.OUTSIDE


def test_oracle_routes_available():
    assert set(oracle_routes("GAMMA7", np.zeros(7))) == {"mu", "slice"}
    assert set(oracle_routes("TETRA3", np.zeros(3))) == {"mu", "closed_form"}
    assert membership_oracle("GAMMA5", np.zeros(5), route="slice").category is Category.INTERIOR


def test_psi_formulas():
    x = np.arange(1, 8) / 10
    z, w = 0.3j, -0.5
    want = (x[0] - z * x[2] - w * x[4] + z * w * x[6]) / (1 - z * x[1] - w * x[3] + z * w * x[5])
    assert psi_eval("PSI7_1", (z, w), x) == pytest.approx(want)
    a, b, p = 0.2, 0.3j, 0.1
    assert psi_eval("PSI3", 0.5, (a, b, p)) == pytest.approx((a - 0.5 * p) / (1 - 0.5 * b))
    with pytest.raises(DenominatorVanishes):
        psi_eval("PSI3", 1.0, (0.0, 1.0, 0.0))
    with pytest.raises(DimensionMismatch):
        psi_eval("PSI7_1", (0.1,), x)


@given(seeds, st.floats(0, 6.28), st.floats(0.0, 0.95))
def test_xt_slice_is_schur_complement(seed, t, r):
    a = _g(seed) / 4
    z = r * np.exp(1j * t)
    b = _schur_block(a, z)
    want = [b[0, 0], b[1, 1], np.linalg.det(b)]
    assert np.allclose(slice_map("XT", z, pi_map(E7, a)), want, atol=1e-10)


@given(seeds, st.floats(0, 6.28))
def test_sym5_slice_is_schur_complement(seed, t):
    a = _g(seed) / 4
    z = 0.8 * np.exp(1j * t)
    b = _schur_block(a, z)
    assert np.allclose(slice_map("SYM5", z, pi_map(E5, a)), pi_map(E2, b), atol=1e-10)


def test_slice_denominator_vanishes():
    x = np.zeros(7)
    x[0] = 1.0
    with pytest.raises(DenominatorVanishes):
        slice_map("XT", 1.0, x)


@given(seeds, st.floats(0.3, 1.6), st.floats(0, 6.28),
       st.sampled_from(["V2", "V2P", "V2PP", "V5"]))
def test_rotation_preserves_category(seed, scale, t, variant):
    st_, dom = (E5, "GAMMA5") if variant == "V5" else (E7, "GAMMA7")
    a = _g(seed)
    x = scale * pi_map(st_, a / np.linalg.norm(a, 2))
    v = membership(dom, x)
    r = membership(dom, rotate_point(x, np.exp(1j * t), variant))
    if abs(v.margin) > 1e-6 and abs(r.margin) > 1e-6:
        assert v.category == r.category


def test_rotation_matches_matrix_conjugation(rng):
    # V2 rotates the first and third variables: pi(A diag(w, 1, w)) up to the global form
    a = rng.standard_normal((3, 3))
    w = np.exp(0.7j)
    got = rotate_point(pi_map(E7, a), w, "V2")
    assert np.allclose(got, pi_map(E7, a @ np.diag([w, 1, w])))
    with pytest.raises(InputError):
        rotate_point(np.zeros(7), 0.5, "V2")


@given(seeds, st.floats(0, 6.28))
def test_eta_projection_of_interior_is_interior(seed, t):
    a = _g(seed)
    x = pi_map(E7, 0.8 * a / np.linalg.norm(a, 2))
    assert membership("GAMMA5", eta_project(x, np.exp(1j * t))).category is Category.INTERIOR


def test_eta_projection_matches_matrix():
    # the projection equals pi_(1,2) of A diag(1, 1, eta) with the last two blocks merged
    a = np.arange(9).reshape(3, 3) / 10 + 0.05j
    eta = np.exp(0.4j)
    assert np.allclose(eta_project(pi_map(E7, a), eta), pi_map(E5, a @ np.diag([1, 1, eta])))
    with pytest.raises(InputError):
        eta_project(np.zeros(7), 1.5)
