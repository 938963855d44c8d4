"""
Property-based tests for the geometric invariants.

These draw families, parameters and vectors with hypothesis and check the
identities that must hold for every input: torsion-freeness, metric
compatibility, curvature symmetries, plane re-basis invariance, positive
definiteness of g_y and flag reparameterization invariance.
"""

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from nilgeo.algebra_core import inner
from nilgeo.berwald import make_berwald_randers
from nilgeo.curvature import is_nondegenerate, riemann, sectional_curvature
from nilgeo.families import FamilyId, family, family_center3
from nilgeo.levi_civita import christoffel, nabla
from nilgeo.randers import Flag, flag_curvature, fundamental_tensor

components = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)
vectors = st.lists(components, min_size=5, max_size=5).map(np.array)
parameters = st.floats(min_value=0.1, max_value=5.0)
families = st.sampled_from(list(FamilyId))


def _norm(v):
    return float(np.linalg.norm(v))


class TestConnectionProperties:
    """
    The Levi-Civita connection is torsion-free and metric.
    """

    @given(fid=families, lam=parameters, mu=parameters, u=vectors, v=vectors, w=vectors)
    @settings(max_examples=100, deadline=None)
    def test_torsion_free_and_metric(self, fid, lam, mu, u, v, w):
        """
        Property: nabla_u v - nabla_v u = [u, v] and <nabla_u v, w> = -<v, nabla_u w>.
        """
        alg = family(fid, lam, mu)
        ct = christoffel(alg)
        scale = max(1.0, lam, mu)
        torsion = nabla(alg, ct, u, v) - nabla(alg, ct, v, u) - np.einsum('i,j,ijk->k', u, v, alg.structure)
        assert _norm(torsion) <= 1e-10 * scale
        compat = inner(alg, nabla(alg, ct, u, v), w) + inner(alg, v, nabla(alg, ct, u, w))
        assert abs(compat) <= 1e-10 * scale


class TestCurvatureProperties:
    """
    Curvature symmetries and plane invariance.
    """

    @given(fid=families, lam=parameters, mu=parameters, u=vectors, v=vectors, w=vectors, z=vectors)
    @settings(max_examples=100, deadline=None)
    def test_curvature_symmetries(self, fid, lam, mu, u, v, w, z):
        alg = family(fid, lam, mu)
        ct = christoffel(alg)
        tol = 1e-9 * max(1.0, lam, mu) ** 2

        def R(a, b, c):
            return riemann(alg, ct, a, b, c)

        assert _norm(R(u, v, w) + R(v, u, w)) <= tol
        assert abs(inner(alg, R(u, v, w), z) + inner(alg, R(u, v, z), w)) <= tol
        assert _norm(R(u, v, w) + R(v, w, u) + R(w, u, v)) <= tol
        assert abs(inner(alg, R(u, v, w), z) - inner(alg, R(w, z, u), v)) <= tol

    @given(fid=families, lam=parameters, mu=parameters, a=vectors, b=vectors,
           coeffs=st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=4, max_size=4))
    @settings(max_examples=100, deadline=None)
    def test_plane_rebasis_invariance(self, fid, lam, mu, a, b, coeffs):
        """
        Property: K(span{a, b}) depends only on the plane.
        """
        alg = family(fid, lam, mu)
        assume(_norm(a) > 0.1 and _norm(b) > 0.1)
        area = (a @ a) * (b @ b) - (a @ b) ** 2
        assume(area > 1e-3 * (a @ a) * (b @ b))
        det = coeffs[0] * coeffs[3] - coeffs[1] * coeffs[2]
        assume(abs(det) > 0.1)
        ct = christoffel(alg)
        k = sectional_curvature(alg, ct, a, b)
        a2 = coeffs[0] * a + coeffs[1] * b
        b2 = coeffs[2] * a + coeffs[3] * b
        assume(is_nondegenerate(alg, a2, b2))
        moved = sectional_curvature(alg, ct, a2, b2)
        assert moved == pytest.approx(k, rel=1e-8, abs=1e-8 * max(1.0, lam, mu) ** 2)


class TestRandersProperties:
    """
    Fundamental tensor and flag curvature of Berwald Randers metrics.
    """

    @given(lam=parameters, radius=st.floats(min_value=0.01, max_value=0.99),
           angle=st.floats(min_value=0.0, max_value=6.28), y=vectors, u=vectors)
    @settings(max_examples=100, deadline=None)
    def test_fundamental_tensor_positive(self, lam, radius, angle, y, u):
        """
        Property: g_y(u, u) > 0 for y != 0 and u != 0.
        """
        assume(_norm(y) > 1e-3 and _norm(u) > 1e-3)
        alg = family_center3(lam)
        x = np.array([0.0, 0.0, 0.0, radius * np.cos(angle), radius * np.sin(angle)])
        rm = make_berwald_randers(alg, christoffel(alg), x)
        assert fundamental_tensor(rm, y, u, u) > 0.0

    @given(lam=parameters, q1=st.floats(min_value=-0.6, max_value=0.6), q2=st.floats(min_value=-0.6, max_value=0.6),
           y=vectors, u=vectors, c=st.floats(min_value=0.1, max_value=10.0),
           alpha=st.floats(min_value=0.2, max_value=3.0), beta=st.floats(min_value=-3.0, max_value=3.0))
    @settings(max_examples=100, deadline=None)
    def test_flag_reparameterization(self, lam, q1, q2, y, u, c, alpha, beta):
        """
        Property: K(y, u) = K(c y, alpha u + beta y) for c > 0, alpha > 0.
        """
        assume(q1 * q1 + q2 * q2 > 1e-4)
        assume(_norm(y) > 0.1 and _norm(u) > 0.1)
        assume((y @ y) * (u @ u) - (y @ u) ** 2 > 1e-3 * (y @ y) * (u @ u))
        alg = family_center3(lam)
        rm = make_berwald_randers(alg, christoffel(alg), [0.0, 0.0, 0.0, q1, q2])
        k = flag_curvature(rm, Flag(y, u))
        moved = flag_curvature(rm, Flag(c * y, alpha * u + beta * y))
        assert moved == pytest.approx(k, rel=1e-7, abs=1e-9 * max(1.0, lam) ** 2)
