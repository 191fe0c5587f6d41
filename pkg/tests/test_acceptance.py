"""Acceptance criteria 1 to 11, each at full scale and stated tolerance."""

import time

import pytest

from gammaspec.verify import verify


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
        return ok
    return emit


def run(suite, **counts):
    t0 = time.perf_counter()
    rep = verify(suite, seed=0, counts=counts or None)
    props = {p["name"]: p for p in rep["properties"]}
    return rep, props, time.perf_counter() - t0


def clean(p, tol=None):
    ok = p["count"] > 0 and p["passed"] == p["count"]
    return ok and (tol is None or p["worst_residual"] < tol)


def test_criterion_01_boundary_inclusion(report):
    rep, props, dt = run("boundary_inclusion", unitaries=1000)
    k, k1 = props["unitary_image_in_K"], props["unitary_image_in_K1"]
    ok = clean(k, 1e-10) and clean(k1, 1e-10) and k["count"] == 1000 and dt < 10
    assert report(1, "boundary inclusion", ok,
                  f"{k['passed']}+{k1['passed']}/2000, worst "
                  f"{max(k['worst_residual'], k1['worst_residual']):.1e}, {dt:.1f}s")


def test_criterion_02_cross_agreement(report):
    rep, props, dt = run("cross_agreement", points=500)
    ok = rep["passed"] and all(p["count"] > 0 for p in props.values()) and dt < 120
    assert report(2, "membership cross-agreement", ok,
                  ", ".join(f"{n}: {p['passed']}/{p['count']}" for n, p in props.items())
                  + f", {dt:.1f}s")


def test_criterion_03_rotations(report):
    rep, props, dt = run("rotations", points=100, omegas=16)
    ok = rep["passed"] and all(p["count"] > 0 for p in props.values())
    assert report(3, "rotation invariance", ok,
                  ", ".join(f"{p['passed']}/{p['count']}" for p in props.values()))


def test_criterion_04_eta_transfer(report):
    rep, props, dt = run("eta_transfer", interior=50, outside=50, etas=64)
    ok = rep["passed"] and all(p["count"] == 50 for p in props.values())
    assert report(4, "eta transfer", ok,
                  ", ".join(f"{p['passed']}/{p['count']}" for p in props.values()))


def test_criterion_05_mu_consistency(report):
    rep, props, dt = run("mu_consistency", matrices=100)
    ok = (clean(props["mu_of_diagonal_is_max_modulus"], 1e-6)
          and clean(props["mu_of_identity_is_one"], 1e-6)
          and clean(props["mu_is_homogeneous"], 1e-5))
    assert report(5, "mu consistency", ok,
                  ", ".join(f"{p['passed']}/{p['count']} worst {p['worst_residual']:.1e}"
                            for p in props.values()))


def test_criterion_06_fundamental(report):
    rep, props, dt = run("fundamental", triples=200, max_dim=16)
    ok = (clean(props["fundamental_equations_solved"], 1e-8)
          and clean(props["numerical_radius_of_pencil_at_most_one"], 1e-8)
          and clean(props["scalar_solution_matches_closed_form"], 1e-12))
    assert report(6, "fundamental equations", ok,
                  ", ".join(f"{p['passed']}/{p['count']} worst {p['worst_residual']:.1e}"
                            for p in props.values()))


def test_criterion_07_rho_certificates(report):
    rep, props, dt = run("contraction_necessary", points=200, boundary=50, omegas=64)
    probe = props["interior_scalar_tuple_passes_contraction_probe"]
    bd = props["tetrablock_boundary_triple_has_vanishing_rho"]
    ok = clean(probe) and probe["worst_residual"] <= 1e-10 and clean(bd, 1e-12)
    assert report(7, "rho certificates", ok,
                  f"{probe['passed']}/{probe['count']} probes, boundary worst "
                  f"{bd['worst_residual']:.1e}")


def test_criterion_08_unitary_builders(report):
    rep, props, dt = run("unitary_builders", unitaries=100)
    ok = all(clean(p, 1e-9) and p["count"] == 100 for p in props.values())
    assert report(8, "unitary builders", ok,
                  ", ".join(f"{p['passed']}/{p['count']} worst {p['worst_residual']:.1e}"
                            for p in props.values()))


def test_criterion_09_pure_isometry_models(report):
    rep, props, dt = run("isometry_models", models=50, n=32)
    ok = all(clean(p, 1e-10) and p["count"] == 50 for p in props.values())
    assert report(9, "pure isometry models", ok,
                  ", ".join(f"{p['passed']}/{p['count']} worst {p['worst_residual']:.1e}"
                            for p in props.values()))


def test_criterion_10_wold(report):
    rep, props, dt = run("wold", sums=50, n=32)
    ok = (clean(props["unitary_dimension_recovered"])
          and clean(props["restricted_parts_classify"])
          and clean(props["subspaces_reduce_the_tuple"], 1e-8) and dt < 300)
    assert report(10, "Wold decomposition", ok,
                  ", ".join(f"{p['passed']}/{p['count']}" for p in props.values())
                  + f", {dt:.1f}s")


def test_criterion_11_von_neumann(report):
    rep, props, dt = run("von_neumann", points=100, polys=50, planted=20)
    cl, pl = props["no_violation_at_interior_scalar_tuples"], props["planted_violator_flagged"]
    ok = clean(cl) and cl["worst_residual"] <= 1e-6 and clean(pl)
    assert report(11, "von Neumann falsifier", ok,
                  f"{cl['passed']}/{cl['count']} clean, worst excess {cl['worst_residual']:.1e}, "
                  f"{pl['passed']}/{pl['count']} planted flagged")
