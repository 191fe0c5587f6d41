import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import unitary_group

from gammaspec.boundary import (boundary_slice_check, bsym_residual, btetra_residual,
                                k1_membership, k_membership)
from gammaspec.errors import InputError
from gammaspec.mu import E2, E3, E5, E7, pi_map

seeds = st.integers(0, 2**31 - 1)


def _u(seed, n=3):
    return unitary_group.rvs(n, random_state=np.random.default_rng(seed))


@given(seeds)
def test_unitary_images_lie_in_k_and_k1(seed):
    u = _u(seed)
    r = k_membership(pi_map(E7, u))
    assert r.in_set and r.residuals.worst() < 1e-10
    r1 = k1_membership(pi_map(E5, u))
    assert r1.in_set and r1.residuals.worst() < 1e-10


def test_permutation_point_in_k():
    p = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    x = pi_map(E7, p)
    assert np.allclose(x, [0, 0, -1, 1, 0, 0, -1])
    assert k_membership(x).in_set


def test_k_rejects_interior_and_perturbed(rng):
    u = unitary_group.rvs(3, random_state=rng)
    assert not k_membership(pi_map(E7, 0.9 * u)).in_set
    x = pi_map(E7, u)
    x[1] += 1e-3
    r = k_membership(x)
    assert not r.in_set
    assert {c.name for c in r.residuals.failures()} >= {"x2=conj(x5)x7"}
    y = pi_map(E5, u)
    y[0] += 1e-3
    assert not k1_membership(y).in_set


def test_small_boundary_residuals(rng):
    u = unitary_group.rvs(2, random_state=rng)
    assert btetra_residual(pi_map(E3, u)) < 1e-14
    assert bsym_residual(pi_map(E2, u)) < 1e-14
    assert btetra_residual(pi_map(E3, 0.5 * u)) > 0.1
    assert bsym_residual((2.5, 1.0)) > 0.4


@given(seeds)
def test_slice_checks_agree_on_k(seed):
    u = _u(seed)
    r7 = boundary_slice_check("BW7", pi_map(E7, u))
    assert r7.in_set and r7.agrees_with_relations
    r5 = boundary_slice_check("BW5", pi_map(E5, u))
    assert r5.in_set and r5.agrees_with_relations


@given(seeds, st.floats(0.2, 0.95))
def test_slice_checks_agree_off_k(seed, t):
    u = _u(seed)
    r7 = boundary_slice_check("BW7", pi_map(E7, t * u))
    assert not r7.in_set and r7.agrees_with_relations
    r5 = boundary_slice_check("BW5", pi_map(E5, t * u))
    assert not r5.in_set and r5.agrees_with_relations


def test_slice_check_with_unimodular_coordinate():
    # diagonal unitaries put |x2| = |x4| = 1, which switches the slice sweep to the disc
    x = pi_map(E7, np.diag(np.exp(1j * np.array([0.3, 1.1, -2.0]))))
    r = boundary_slice_check("BW7", x)
    assert r.in_set and r.agrees_with_relations
    assert any("disc" in c.name for c in r.residuals.checks)


def test_small_domain_checks_and_unknown_variant():
    assert boundary_slice_check("BTETRA", (0.0, 0.0, 1.0)).in_set
    assert boundary_slice_check("BSYM", (0.0, 1.0)).in_set
    assert not boundary_slice_check("BSYM", (0.0, 0.5)).in_set
    with pytest.raises(InputError):
        boundary_slice_check("BW9", np.zeros(7))
