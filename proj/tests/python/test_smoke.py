"""Smoke tests for the python bindings: a few pinned values per operation."""

import math
import os
import subprocess

import pytest

import mcalc


def unit_pair():
    e1 = mcalc.Manifold.euclidean(1)
    return e1, mcalc.ParticleMeasure(e1, [(1.0, [0.0]), (1.0, [1.0])])


def test_version_and_exports():
    assert mcalc.__version__ == "0.1.0"
    assert "counterexample" in mcalc.suite_names()


def test_manifold_geometry():
    s3 = mcalc.Manifold.sphere(3)
    assert s3.describe() == "sphere:3"
    assert s3.distance([1, 0, 0], [0, 1, 0]) == pytest.approx(math.pi / 2)
    quarter = s3.exp([1, 0, 0], [0, math.pi / 2, 0])
    assert quarter == pytest.approx([0, 1, 0], abs=1e-12)
    assert s3.log([1, 0, 0], [0, 1, 0]) == pytest.approx([0, math.pi / 2, 0], abs=1e-12)

    with pytest.raises(mcalc.InputError):
        mcalc.Manifold.sphere(1)
    with pytest.raises(mcalc.InputError):
        s3.distance([2, 0, 0], [0, 1, 0])  # not on the sphere


def test_measure_basics():
    _, eta = unit_pair()
    assert len(eta) == 2
    assert eta.total_mass == pytest.approx(2.0)
    weights = [w for w, _ in eta.atoms()]
    assert weights == [1.0, 1.0]


def test_extrinsic_quotient():
    e1, eta = unit_pair()
    f = mcalc.builtin_functional(e1, "first_moment_squared")
    assert f(eta) == pytest.approx(1.0)
    est = mcalc.extrinsic(f, eta, [2.0])
    assert est.converged
    assert est.value == pytest.approx(4.0, abs=1e-8)
    assert len(est.ladder) == 7

    grad = mcalc.grad_extrinsic(f, eta, [3.0])
    assert grad == pytest.approx([2.0], abs=1e-9)


def test_intrinsic_via_python_callable():
    e1 = mcalc.Manifold.euclidean(1)
    dirac = mcalc.ParticleMeasure(e1, [(1.0, [1.0])])
    f = mcalc.builtin_functional(e1, "first_moment_squared")
    est = mcalc.intrinsic(f, dirac, lambda x: x)  # flow of v(x)=x scales the atom
    assert est.converged
    assert est.value == pytest.approx(2.0, abs=1e-5)

    with pytest.raises(mcalc.InputError):
        mcalc.intrinsic(f, dirac, lambda x: x, compact_support=False)


def test_l_directional_and_field():
    e1, eta = unit_pair()
    f = mcalc.builtin_functional(e1, "first_moment_squared")
    est = mcalc.l_directional(f, eta, [[1.0], [1.0]])
    # shifting both atoms at unit speed: d/ds (1 + 2s)^2 = 4
    assert est.value == pytest.approx(4.0, abs=1e-8)
    lf = mcalc.l_field(f, eta, [0.5])
    assert lf == pytest.approx([2.0], abs=1e-5)


def test_wasserstein_pinned():
    e1 = mcalc.Manifold.euclidean(1)
    a = mcalc.ParticleMeasure(e1, [(1.0, [0.0])])
    b = mcalc.ParticleMeasure(e1, [(1.0, [1.0])])
    assert mcalc.wasserstein(a, b, p=1.0) == pytest.approx(2.0, abs=1e-12)
    assert mcalc.wasserstein(a, a, p=2.0) == 0.0


def test_bump_profile():
    assert mcalc.bump_h(1.0) == 1.0
    assert mcalc.bump_h(0.375) == pytest.approx(0.5)
    assert mcalc.bump_h(3.0) == 0.0
    assert mcalc.bump_h_prime(1.0) == 0.0


def test_counterexample_suite():
    reports = mcalc.run_suites(["counterexample"], seed=42)
    assert len(reports) == 10
    assert all(r.passed for r in reports)
    assert all("identically zero: yes" in r.diagnostic for r in reports)


def test_cli_roundtrip_if_available():
    cli = os.environ.get("MCALC_CLI")
    if not cli:
        pytest.skip("MCALC_CLI not set")
    proc = subprocess.run(
        [cli, "verify", "--suite", "geometry", "--seed", "42", "--format", "csv"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("identity,instance,lhs,rhs,residual,tolerance,pass")
