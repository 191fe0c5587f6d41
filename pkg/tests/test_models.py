import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from gammaspec.boundary import k_membership
from gammaspec.errors import InputError, InvalidBlockUnitary, InvalidCoefficients
from gammaspec.models import (BlockUnitary3, IsometryModelCoeffs5, IsometryModelCoeffs7,
                              build_gamma5_unitary, build_gamma7_unitary, build_pure_isometry,
                              direct_sum, random_block_unitary, random_model_coeffs5,
                              random_model_coeffs7, validate_model_coeffs, wold_decompose)
from gammaspec.mu import E5, E7, pi_map
from gammaspec.tuples import Tuple7, classify_tuple

seeds = st.integers(0, 2**31 - 1)


def test_scalar_block_unitary_gives_pi_image(rng):
    u = unitary_group.rvs(3, random_state=rng)
    b = BlockUnitary3.from_matrix(u, 1)
    assert np.allclose([m[0, 0] for m in build_gamma7_unitary(b).ops], pi_map(E7, u))
    assert np.allclose([m[0, 0] for m in build_gamma5_unitary(b).ops], pi_map(E5, u))


def test_permutation_example():
    p = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    t = build_gamma7_unitary(BlockUnitary3.from_matrix(p))
    assert np.allclose([m[0, 0] for m in t.ops], [0, 0, -1, 1, 0, 0, -1])


@settings(max_examples=10)
@given(seeds, st.sampled_from([1, 2, 4]))
def test_built_unitaries_classify(seed, m):
    u = random_block_unitary(m, np.random.default_rng(seed))
    r7 = classify_tuple("UNITARY7", build_gamma7_unitary(u), with_spectrum=True)
    r5 = classify_tuple("UNITARY5", build_gamma5_unitary(u), with_spectrum=True)
    assert r7.verdict and r7.checks.worst() < 1e-9
    assert r5.verdict and r5.checks.worst() < 1e-9
    for s in r7.spectrum_check:
        assert k_membership(np.array([complex(*c) for c in s["point"]])).in_set


def test_block_unitary_validation(rng):
    with pytest.raises(InvalidBlockUnitary):
        BlockUnitary3.from_matrix(np.eye(4), 1)
    with pytest.raises(InvalidBlockUnitary):
        build_gamma7_unitary(BlockUnitary3.from_matrix(2 * np.eye(3)))
    # unitary but with non-commuting blocks
    u = unitary_group.rvs(6, random_state=rng)
    with pytest.raises(InvalidBlockUnitary):
        build_gamma7_unitary(BlockUnitary3.from_matrix(u, 2))


def test_scalar_pencil_caps():
    # sup over the circle of |a + conj(b) z| is |a| + |b|
    ok = IsometryModelCoeffs7(tuple(np.array([[v]]) for v in (0.5, 0.2, 0.1, 0.3, 0.6, 0.4)))
    rep = validate_model_coeffs(ok)
    assert rep.verdict
    assert rep.info["norm_witnesses"]["Phi1"]["sup"] == pytest.approx(0.9, abs=1e-12)
    bad = IsometryModelCoeffs7(tuple(np.array([[v]]) for v in (0.8, 0, 0, 0, 0, 0.8)))
    assert not validate_model_coeffs(bad).verdict
    with pytest.raises(InvalidCoefficients):
        build_pure_isometry(bad, 8)


def test_noncommuting_coefficients_rejected():
    x = np.array([[0, 0.3], [0, 0]])
    y = np.array([[0, 0], [0.3, 0]])
    zero = np.zeros((2, 2))
    rep = validate_model_coeffs(IsometryModelCoeffs7((x, y, zero, zero, zero, zero)))
    assert not rep.verdict
    assert any(c.name.startswith("commute") for c in rep.checks.failures())


@settings(max_examples=8)
@given(seeds, st.integers(1, 3))
def test_pure_models_are_isometries(seed, d):
    rng = np.random.default_rng(seed)
    t7 = build_pure_isometry(random_model_coeffs7(d, rng), 12)
    assert t7.dim == 12 * d
    r = classify_tuple("ISOMETRY7", t7)
    assert r.verdict and r.checks.worst() < 1e-10
    t5 = build_pure_isometry(random_model_coeffs5(d, rng), 12)
    r = classify_tuple("ISOMETRY5", t5)
    assert r.verdict and r.checks.worst() < 1e-10


def test_pure_model_five_point_pencils():
    c = IsometryModelCoeffs5(*(np.array([[v]]) for v in (0.4, 0.5, 1.0, 0.8)))
    assert validate_model_coeffs(c).verdict
    t = build_pure_isometry(c, 4)
    assert np.allclose(t.S2[:2, :2], [[1.0, 0], [0.8, 1.0]])


def test_wold_splits_direct_sum(rng):
    x = pi_map(E7, unitary_group.rvs(3, random_state=rng))
    y = pi_map(E7, unitary_group.rvs(3, random_state=rng))
    unitary = Tuple7(tuple(np.diag([a, b]) for a, b in zip(x, y)))
    pure = build_pure_isometry(random_model_coeffs7(2, rng), 10)
    w = unitary_group.rvs(22, random_state=rng)
    tup = direct_sum(unitary, pure).conjugate(w)
    dec = wold_decompose(tup)
    assert (dec.unitary_dim, dec.pure_dim) == (2, 20)
    assert dec.residuals.worst() < 1e-8
    assert classify_tuple("UNITARY7", dec.restricted_unitary).verdict
    assert classify_tuple("ISOMETRY7", dec.restricted_pure).verdict


def test_wold_of_pure_and_of_non_isometry(rng):
    pure = build_pure_isometry(random_model_coeffs7(1, rng), 8)
    dec = wold_decompose(pure)
    assert dec.unitary_dim == 0 and dec.restricted_unitary is None
    with pytest.raises(InputError):
        wold_decompose(Tuple7.scalar(0.5 * np.ones(7)))
