import pytest

from gammaspec.errors import InputError, UnknownSuite
from gammaspec.verify import SUITES, verify

SMALL = {
    "rotations": {"points": 4, "omegas": 4},
    "eta_transfer": {"interior": 2, "outside": 2, "etas": 8},
    "boundary_inclusion": {"unitaries": 20},
    "boundary_slices": {"points": 4},
    "slice_identity": {"points": 6},
    "tetra_families": {"tuples": 2},
    "contraction_necessary": {"points": 4, "boundary": 4, "omegas": 8},
    "fundamental": {"triples": 4, "max_dim": 4},
    "unitary_builders": {"unitaries": 3},
    "isometry_models": {"models": 2, "n": 8},
    "wold": {"sums": 2, "n": 8},
    "embedding": {"unitaries": 2},
    "von_neumann": {"points": 2, "polys": 4, "planted": 2},
    "mu_consistency": {"matrices": 5},
    "cross_agreement": {"points": 10},
}


def test_every_suite_has_small_counts():
    assert set(SMALL) == set(SUITES)


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_suite_passes_at_small_scale(suite):
    rep = verify(suite, seed=3, counts=SMALL[suite])
    assert rep["passed"], rep["properties"]
    assert rep["conclusion"].startswith("no counterexample found at scale")
    assert all(p["count"] > 0 for p in rep["properties"])


def test_report_is_deterministic():
    c = SMALL["boundary_inclusion"]
    assert verify("boundary_inclusion", 5, c) == verify("boundary_inclusion", 5, c)


def test_errors():
    with pytest.raises(UnknownSuite):
        verify("nope")
    with pytest.raises(InputError):
        verify("wold", counts={"bogus": 1})
