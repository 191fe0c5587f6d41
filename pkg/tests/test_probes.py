import numpy as np
import pytest

from gammaspec.errors import InputError
from gammaspec.mu import E5, E7, pi_map
from gammaspec.probes import Polynomial, random_polynomials, sampled_sup, von_neumann_probe
from gammaspec.sampling import interior_matrix
from gammaspec.config import DEFAULT
from gammaspec.tuples import Tuple3, Tuple5, Tuple7


def test_eval_tuple_matches_scalar_evaluation(rng):
    polys = random_polynomials(7, 5, seed=3)
    x = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    ops = Tuple7.scalar(x).ops
    for p in polys:
        assert p.eval_tuple(ops)[0, 0] == pytest.approx(p.eval_points(x)[0], abs=1e-12)


def test_eval_tuple_on_diagonal(rng):
    p = random_polynomials(5, 3, seed=1)[-1]
    xs = rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5))
    ops = tuple(np.diag(xs[:, k]) for k in range(5))
    assert np.allclose(np.diag(p.eval_tuple(ops)), p.eval_points(xs))


def test_coordinate_sups():
    # sup of each coordinate over the closure equals its value at the identity
    # or at a permutation: 1 for the diagonal entries and det, 1 for minors
    polys = random_polynomials(7, 0)
    for p in polys:
        assert sampled_sup(p) == pytest.approx(1.0, abs=1e-6)
    polys5 = random_polynomials(5, 0)
    assert [round(sampled_sup(p), 6) for p in polys5] == [1.0, 2.0, 1.0, 2.0, 1.0]


def test_interior_tuple_passes(rng):
    for st, cls in ((E7, Tuple7), (E5, Tuple5)):
        x = pi_map(st, interior_matrix(st, rng, DEFAULT))
        rep = von_neumann_probe(cls.scalar(x), n_polys=10)
        assert rep.verdict


def test_scaled_unitary_is_flagged():
    u = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
    x = pi_map(E7, 1.3 * u)
    rep = von_neumann_probe(Tuple7.scalar(x), n_polys=0)
    assert not rep.verdict
    assert rep.info["violations"]


def test_probe_rejects_triples():
    with pytest.raises(InputError):
        von_neumann_probe(Tuple3.scalar((0, 0, 0)))
    with pytest.raises(InputError):
        sampled_sup(Polynomial(3, ((1, (1, 0, 0)),)))
