"""
Tests for curvature: tensor, sectional, Ricci, scalar and the plane scan.
"""

from itertools import combinations

import numpy as np
import pytest

from nilgeo.algebra_core import MetricLieAlgebra, abelian, basis_vector, change_basis, inner
from nilgeo.curvature import (Plane, curvature_scan, ricci, ricci_tensor, riemann, riemann_tensor,
                              scalar_curvature, sectional, sectional_curvature)
from nilgeo.errors import DegeneratePlane, ScanError
from nilgeo.families import (FamilyId, PARAMETER_GRID, curvature_table, family, family_center1, family_center2,
                             family_center3)
from nilgeo.levi_civita import christoffel


def e(index):
    return basis_vector(5, index)


def setup(alg):
    return alg, christoffel(alg)


def test_riemann_examples():
    lam, mu = 2.0, 3.0
    alg, ct = setup(family_center1(lam, mu))
    assert np.allclose(riemann(alg, ct, e(1), e(2), e(1)), 3 * lam ** 2 / 4 * e(2), atol=1e-14)
    assert np.allclose(riemann(alg, ct, e(1), e(2), e(3)), lam * mu / 2 * e(4), atol=1e-14)

    alg3, ct3 = setup(family_center3(lam))
    assert np.allclose(riemann(alg3, ct3, e(1), e(3), e(3)), lam ** 2 / 4 * e(1), atol=1e-14)
    for w in range(1, 6):
        assert not np.any(riemann(alg3, ct3, e(4), e(5), e(w)))

    rng = np.random.default_rng(0)
    u, w = rng.uniform(-1, 1, (2, 5))
    assert np.max(np.abs(riemann(alg, ct, u, u, w))) <= 1e-14


def test_riemann_tensor_matches_tables():
    """
    Property: the full curvature tensor equals the published tables entrywise.
    """
    for fid in FamilyId:
        for lam, mu in PARAMETER_GRID:
            alg, ct = setup(family(fid, lam, mu))
            r = riemann_tensor(alg, ct).r
            assert np.max(np.abs(r - curvature_table(fid, lam, mu))) <= 1e-12 * max(1.0, lam * lam, mu * mu, lam * mu)


def test_riemann_tensor_matches_riemann():
    rng = np.random.default_rng(4)
    alg, ct = setup(family_center2(1.3, 0.6))
    r = riemann_tensor(alg, ct).r
    for _ in range(20):
        u, v, w = rng.uniform(-1, 1, (3, 5))
        expected = np.einsum('i,j,k,ijkl->l', u, v, w, r)
        assert np.allclose(riemann(alg, ct, u, v, w), expected, atol=1e-12)


def test_curvature_symmetries():
    """
    Property: antisymmetry in the first pair, skew-adjointness, first Bianchi
    and pair symmetry hold on random tuples for every family.
    """
    rng = np.random.default_rng(8)
    for fid in FamilyId:
        for lam, mu in PARAMETER_GRID[:3]:
            alg, ct = setup(family(fid, lam, mu))
            scale = max(1.0, lam * lam, mu * mu)
            for _ in range(34):
                u, v, w, z = rng.uniform(-1, 1, (4, 5))
                R = lambda a, b, c: riemann(alg, ct, a, b, c)
                assert np.max(np.abs(R(u, v, w) + R(v, u, w))) <= 1e-10 * scale
                assert abs(inner(alg, R(u, v, w), z) + inner(alg, R(u, v, z), w)) <= 1e-10 * scale
                assert np.max(np.abs(R(u, v, w) + R(v, w, u) + R(w, u, v))) <= 1e-10 * scale
                assert abs(inner(alg, R(u, v, w), z) - inner(alg, R(w, z, u), v)) <= 1e-10 * scale


def test_sectional_examples():
    lam, mu = 2.0, 1.0
    alg1, ct1 = setup(family_center1(lam, mu))
    assert sectional_curvature(alg1, ct1, e(1), e(2)) == pytest.approx(-3 * lam ** 2 / 4, abs=1e-14)
    alg2, ct2 = setup(family_center2(lam, mu))
    assert sectional_curvature(alg2, ct2, e(1), e(4)) == pytest.approx(lam ** 2 / 4, abs=1e-14)
    alg3, ct3 = setup(family_center3(lam))
    assert sectional_curvature(alg3, ct3, e(1), e(4)) == pytest.approx(0.0, abs=1e-14)


def test_degenerate_plane():
    alg, ct = setup(family_center1(1, 1))
    a = np.array([1.0, 2.0, 0.0, 0.0, 1.0])
    with pytest.raises(DegeneratePlane):
        sectional(alg, ct, Plane(a, 2 * a))
    with pytest.raises(DegeneratePlane):
        sectional_curvature(alg, ct, np.zeros(5), e(1))


def test_sectional_rebasis_invariance():
    """
    Property: K(span{a, b}) = K(span{alpha a + beta b, gamma a + delta b}).
    """
    rng = np.random.default_rng(12)
    for fid in FamilyId:
        alg, ct = setup(family(fid, 2.0, 1.0))
        for _ in range(100):
            a, b = rng.uniform(-1, 1, (2, 5))
            coeffs = rng.uniform(-2, 2, 4)
            if abs(coeffs[0] * coeffs[3] - coeffs[1] * coeffs[2]) < 0.1:
                continue
            k = sectional_curvature(alg, ct, a, b)
            a2 = coeffs[0] * a + coeffs[1] * b
            b2 = coeffs[2] * a + coeffs[3] * b
            assert sectional_curvature(alg, ct, a2, b2) == pytest.approx(k, rel=1e-8, abs=1e-10)


def test_ricci_examples():
    lam, mu = 3.0, 2.0
    alg, ct = setup(family_center1(lam, mu))
    assert ricci(alg, ct, e(5), e(5)) == pytest.approx((lam ** 2 + mu ** 2) / 2, abs=1e-12)
    ric = ricci_tensor(alg, ct)
    assert np.allclose(ric, ric.T, atol=1e-12)

    abel, ct0 = setup(abelian(3))
    assert not np.any(ricci_tensor(abel, ct0))

    alg3, ct3 = setup(family_center3(lam))
    assert ricci(alg3, ct3, e(4), e(4)) == pytest.approx(0.0, abs=1e-14)


def test_scalar_examples():
    for lam, mu in PARAMETER_GRID:
        alg1, ct1 = setup(family_center1(lam, mu))
        assert scalar_curvature(alg1, ct1) == pytest.approx(-(lam ** 2 + mu ** 2) / 2, abs=1e-10)
        alg2, ct2 = setup(family_center2(lam, mu))
        assert scalar_curvature(alg2, ct2) == pytest.approx(-(lam ** 2 + mu ** 2) / 2, abs=1e-10)
        alg3, ct3 = setup(family_center3(lam))
        assert scalar_curvature(alg3, ct3) == pytest.approx(-lam ** 2 / 2, abs=1e-10)


def test_scalar_is_sum_of_sectional():
    for fid in FamilyId:
        alg, ct = setup(family(fid, 1.7, 0.4))
        total = sum(sectional_curvature(alg, ct, e(i), e(j)) for i, j in combinations(range(1, 6), 2))
        assert scalar_curvature(alg, ct) == pytest.approx(2 * total, abs=1e-12)


def test_scalar_basis_independent():
    """
    Property: changing basis (orthogonal or not) leaves the scalar curvature unchanged.
    """
    rng = np.random.default_rng(21)
    for fid in FamilyId:
        alg, ct = setup(family(fid, 2.0, 1.0))
        s = scalar_curvature(alg, ct)
        q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
        p = rng.standard_normal((5, 5)) + 3 * np.eye(5)
        for transform in (q, p):
            moved = change_basis(alg, transform)
            assert scalar_curvature(moved, christoffel(moved)) == pytest.approx(s, abs=1e-9)


def test_curvature_scan_examples():
    alg1, ct1 = setup(family_center1(1, 1))
    scan = curvature_scan(alg1, ct1, 10000, 0)
    assert scan.min_K < 0 < scan.max_K
    assert scan.evaluated == 10000 + 10
    assert sectional(alg1, ct1, scan.argmin) == scan.min_K

    flat, ct0 = setup(abelian(5))
    scan = curvature_scan(flat, ct0, 100, 3)
    assert scan.min_K == 0.0 and scan.max_K == 0.0

    alg3, ct3 = setup(family_center3(1))
    scan = curvature_scan(alg3, ct3, 10000, 0)
    assert scan.min_K <= -0.75 + 1e-6


def test_curvature_scan_deterministic():
    """
    Property: the scan result depends only on (samples, seed), not on the worker count.
    """
    alg, ct = setup(family_center2(1.5, 1.0))
    serial = curvature_scan(alg, ct, 400, 42, workers_count=1)
    parallel = curvature_scan(alg, ct, 400, 42, workers_count=4)
    assert serial.min_K == parallel.min_K
    assert serial.max_K == parallel.max_K
    assert np.array_equal(serial.argmin.a, parallel.argmin.a)
    assert np.array_equal(serial.argmax.b, parallel.argmax.b)


def test_curvature_scan_arguments():
    alg, ct = setup(family_center3(1))
    with pytest.raises(ScanError):
        curvature_scan(alg, ct, 0, 1)
    with pytest.raises(ScanError):
        curvature_scan(alg, ct, 10, -1)
    line, ct_line = setup(MetricLieAlgebra(1, np.zeros((1, 1, 1))))
    with pytest.raises(ScanError):
        curvature_scan(line, ct_line, 10, 0)
