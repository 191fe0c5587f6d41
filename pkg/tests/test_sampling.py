import numpy as np
import pytest

from gammaspec.boundary import k1_membership, k_membership
from gammaspec.errors import InputError
from gammaspec.membership import membership
from gammaspec.sampling import sample
from gammaspec.tuples import classify_tuple, contraction_probe
from gammaspec.verdict import Category


def test_boundary_samples_lie_in_K():
    pts = sample("boundaryK", 5, seed=7)
    assert len(pts) == 5
    assert all(k_membership(x).in_set for x in pts)
    assert all(k1_membership(x).in_set for x in sample("boundaryK1", 5, seed=7))


@pytest.mark.parametrize("kind,domain", [("interior7", "GAMMA7"), ("interior5", "GAMMA5")])
def test_interior_samples(kind, domain):
    for x in sample(kind, 5, seed=1):
        assert membership(domain, x).category is Category.INTERIOR


def test_tuple_samples():
    (t,) = sample("gamma7_unitary", 1, seed=2)
    assert classify_tuple("UNITARY7", t).verdict
    (tr,) = sample("tetra_contraction", 1, seed=2, max_dim=4)
    assert contraction_probe(tr, grid=8).verdict
    (m,) = sample("pure_isometry5", 1, seed=2, dim=1, n=8)
    assert m.dim == 8 and classify_tuple("ISOMETRY5", m).verdict


def test_determinism():
    a = sample("interior5", 3, seed=11)
    b = sample("interior5", 3, seed=11)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_invalid_requests():
    with pytest.raises(InputError):
        sample("nope", 1)
    with pytest.raises(InputError):
        sample("boundaryK", 0)
