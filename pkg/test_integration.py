"""
Integration tests for nilgeo.

Tests end-to-end functionality: algebra document parsing, validation, the
connection, curvature, parallel fields, Randers metrics and the CLI reports.
"""

import json
import time

import numpy as np
import pytest

from cli import Command, algebra_document, parse_algebra, run
from nilgeo.algebra_core import change_basis, validate
from nilgeo.berwald import make_berwald_randers, parallel_field_basis
from nilgeo.curvature import curvature_scan, riemann_tensor, scalar_curvature, sectional_curvature
from nilgeo.families import curvature_table, family_center1, family_center3, verify_paper
from nilgeo.levi_civita import christoffel, metric_residual, torsion_residual
from nilgeo.randers import Flag, flag_curvature, flag_scan


def test_full_integration():
    """
    Test the complete pipeline on the 3-dimensional-center family.
    """
    print("Testing full integration...")

    document = json.dumps(algebra_document(family_center3(2.0)))
    alg = parse_algebra(document)
    assert validate(alg).overall
    print("✓ Document parsed and validated")

    ct = christoffel(alg)
    assert torsion_residual(alg, ct) <= 1e-12
    assert metric_residual(alg, ct) <= 1e-12
    print("✓ Levi-Civita connection solved")

    assert np.max(np.abs(riemann_tensor(alg, ct).r - curvature_table(3, 2.0))) <= 1e-12
    assert scalar_curvature(alg, ct) == pytest.approx(-2.0)
    print("✓ Curvature matches tables")

    basis = parallel_field_basis(alg, ct)
    assert basis.dimension == 2
    x = 0.3 * basis.vectors[0] + 0.4 * basis.vectors[1]
    rm = make_berwald_randers(alg, ct, x)
    assert rm.norm_x == pytest.approx(0.5)
    print("✓ Berwald Randers metric built")

    scan = flag_scan(rm, 1000, 0)
    assert scan.negative > 0 and scan.positive > 0 and scan.near_zero > 0
    assert scan.sign_mismatches == 0
    print("✓ Flag curvature census complete")


def test_invariance_under_change_of_basis():
    """
    Test that every geometric quantity survives re-expressing the algebra in a
    non-orthonormal basis.
    """
    print("Testing change of basis...")
    rng = np.random.default_rng(61)
    original = family_center3(1.5)
    p = rng.standard_normal((5, 5)) + 3 * np.eye(5)
    p_inv = np.linalg.inv(p)
    moved = change_basis(original, p)
    assert validate(moved).overall

    ct0 = christoffel(original)
    ct1 = christoffel(moved)
    assert scalar_curvature(moved, ct1) == pytest.approx(scalar_curvature(original, ct0), abs=1e-9)
    assert parallel_field_basis(moved, ct1).dimension == 2

    for _ in range(20):
        a, b = rng.uniform(-1, 1, (2, 5))
        assert sectional_curvature(moved, ct1, p_inv @ a, p_inv @ b) == pytest.approx(
            sectional_curvature(original, ct0, a, b), rel=1e-8, abs=1e-10)

    x = np.array([0.0, 0.0, 0.0, 0.3, -0.5])
    rm0 = make_berwald_randers(original, ct0, x)
    rm1 = make_berwald_randers(moved, ct1, p_inv @ x)
    assert rm1.norm_x == pytest.approx(rm0.norm_x, rel=1e-10)
    for _ in range(20):
        y, u = rng.uniform(-1, 1, (2, 5))
        assert flag_curvature(rm1, Flag(p_inv @ y, p_inv @ u)) == pytest.approx(
            flag_curvature(rm0, Flag(y, u)), rel=1e-8, abs=1e-10)
    print("✓ Change of basis handled correctly")


def test_error_scenarios():
    """
    Test that the command layer keeps running after bad input.
    """
    print("Testing error scenarios...")
    bad = run(Command(name='parallel', document='{"dimension": 5, "brackets": "none"}'))
    assert bad.status == 1

    good = run(Command(name='parallel', document=json.dumps(algebra_document(family_center3(1.0)))))
    assert good.status == 0
    assert 'kernel dimension 2' in good.output

    none = run(Command(name='parallel', document=json.dumps(algebra_document(family_center1(1.0, 1.0)))))
    assert none.status == 2
    print("✓ Error scenarios handled")


def test_performance_basics():
    """
    Basic performance checks for the heavier operations.
    """
    print("Testing basic performance...")

    alg = family_center1(1.0, 1.0)
    ct = christoffel(alg)
    start_time = time.time()
    curvature_scan(alg, ct, 10000, 0)
    scan_time = time.time() - start_time
    assert scan_time < 60.0
    print(f"✓ 10000-plane scan in {scan_time:.3f}s")

    start_time = time.time()
    report = verify_paper(pairs=100, scan_samples=1000)
    verify_time = time.time() - start_time
    assert report.overall
    assert verify_time < 120.0
    print(f"✓ Reduced verification in {verify_time:.3f}s")


if __name__ == "__main__":
    print("Running comprehensive integration tests...")
    print("=" * 60)
    test_full_integration()
    test_invariance_under_change_of_basis()
    test_error_scenarios()
    test_performance_basics()
    print("=" * 60)
    print("✓ All integration tests completed successfully!")
