"""
Tests for parallel left-invariant fields and Berwald Randers construction.
"""

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from nilgeo.algebra_core import abelian, basis_vector, change_basis
from nilgeo.berwald import is_parallel, make_berwald_randers, parallel_field_basis
from nilgeo.errors import NormTooLarge, NotParallel, ZeroVector
from nilgeo.families import PARAMETER_GRID, family_center1, family_center2, family_center3
from nilgeo.levi_civita import christoffel, connection_matrix, nabla
from nilgeo.linalg import numerical_rank, subspace_residual


def e(index):
    return basis_vector(5, index)


def test_parallel_dimensions():
    for lam, mu in PARAMETER_GRID:
        for alg, expected in ((family_center1(lam, mu), 0), (family_center2(lam, mu), 0), (family_center3(lam), 2)):
            basis = parallel_field_basis(alg, christoffel(alg))
            assert basis.dimension == expected
            assert basis.exists == (expected > 0)


def test_center3_parallel_span():
    alg = family_center3(2.0)
    ct = christoffel(alg)
    basis = parallel_field_basis(alg, ct)
    matrix = basis.as_matrix(5)
    assert matrix.shape == (5, 2)
    target = np.column_stack([e(4), e(5)])
    assert subspace_residual(basis.vectors, target, np.eye(5)) <= 1e-10
    assert subspace_residual([e(4), e(5)], matrix, np.eye(5)) <= 1e-10
    assert np.allclose(matrix.T @ matrix, np.eye(2), atol=1e-12)


def test_empty_basis():
    alg = family_center1(1, 1)
    basis = parallel_field_basis(alg, christoffel(alg))
    assert basis.vectors == ()
    assert basis.as_matrix(5).shape == (5, 0)
    assert not basis.exists


def test_abelian_everything_parallel():
    alg = abelian(4)
    assert parallel_field_basis(alg, christoffel(alg)).dimension == 4


def test_is_parallel_examples():
    alg3 = family_center3(1.0)
    ct3 = christoffel(alg3)
    assert is_parallel(alg3, ct3, 0.3 * e(4) + 0.4 * e(5))
    assert is_parallel(alg3, ct3, np.zeros(5))
    assert not is_parallel(alg3, ct3, e(3))

    alg1 = family_center1(1.0, 1.0)
    assert not is_parallel(alg1, christoffel(alg1), e(5))


def test_basis_vectors_are_parallel():
    """
    Property: every returned basis vector Q has nabla_{e_i} Q ~ 0 for all i.
    """
    alg = change_basis(family_center3(1.5), np.diag([1.0, 2.0, 1.0, 0.5, 3.0]))
    ct = christoffel(alg)
    basis = parallel_field_basis(alg, ct)
    assert basis.dimension == 2
    for q in basis.vectors:
        for i in range(1, 6):
            assert np.linalg.norm(nabla(alg, ct, e(i), q)) <= 1e-10
    assert np.allclose(basis.as_matrix(5).T @ alg.gram @ basis.as_matrix(5), np.eye(2), atol=1e-10)


def test_rank_nullity():
    for lam, mu in PARAMETER_GRID:
        for alg in (family_center1(lam, mu), family_center2(lam, mu), family_center3(lam)):
            ct = christoffel(alg)
            rank = numerical_rank(connection_matrix(alg, ct))
            assert rank + parallel_field_basis(alg, ct).dimension == 5


@pytest.mark.parametrize('lam, mu', PARAMETER_GRID)
@pytest.mark.parametrize('build, parallel_indices', [
    (family_center1, ()),
    (family_center2, ()),
    (lambda lam, mu: family_center3(lam), (4, 5)),
])
def test_is_parallel_matches_basis(build, parallel_indices, lam, mu):
    """
    Property: is_parallel holds on the span of the parallel basis and fails on
    every coordinate direction outside it.
    """
    alg = build(lam, mu)
    ct = christoffel(alg)
    basis = parallel_field_basis(alg, ct)
    assert basis.dimension == len(parallel_indices)
    for i in range(1, 6):
        assert is_parallel(alg, ct, e(i)) == (i in parallel_indices), i

    rng = np.random.default_rng(11)
    for _ in range(20):
        combination = sum((c * q for c, q in zip(rng.uniform(-2.0, 2.0, basis.dimension), basis.vectors)),
                          np.zeros(5))
        assert is_parallel(alg, ct, combination)


def test_make_berwald_randers_examples():
    alg3 = family_center3(1.0)
    ct3 = christoffel(alg3)
    rm = make_berwald_randers(alg3, ct3, 0.3 * e(4) + 0.4 * e(5))
    assert rm.norm_x == pytest.approx(0.5)
    assert not rm.x.flags.writeable

    with pytest.raises(NormTooLarge):
        make_berwald_randers(alg3, ct3, 0.8 * e(4) + 0.8 * e(5))
    with pytest.raises(ZeroVector):
        make_berwald_randers(alg3, ct3, np.zeros(5))
    with pytest.raises(NotParallel):
        make_berwald_randers(alg3, ct3, 0.5 * e(1))

    alg1 = family_center1(1.0, 1.0)
    with pytest.raises(NotParallel):
        make_berwald_randers(alg1, christoffel(alg1), 0.5 * e(5))


class TestBerwaldAdmissibility:
    """
    Property-based checks of the admissibility rules on the 3-dimensional-center family.
    """

    @given(
        lam=st.floats(min_value=0.1, max_value=10.0),
        radius=st.floats(min_value=0.01, max_value=0.99),
        angle=st.floats(min_value=0.0, max_value=6.28),
    )
    @settings(max_examples=100, deadline=None)
    def test_admissible_fields_build(self, lam, radius, angle):
        """
        Property: x in span{e4, e5} with 0 < |x| < 1 always yields a metric.
        """
        alg = family_center3(lam)
        x = radius * (np.cos(angle) * e(4) + np.sin(angle) * e(5))
        rm = make_berwald_randers(alg, christoffel(alg), x)
        assert rm.norm_x == pytest.approx(radius, rel=1e-12)

    @given(
        lam=st.floats(min_value=0.1, max_value=10.0),
        leak=st.floats(min_value=1e-3, max_value=0.5),
        index=st.integers(min_value=1, max_value=3),
    )
    @settings(max_examples=50, deadline=None)
    def test_fields_leaving_span_rejected(self, lam, leak, index):
        """
        Property: any component along e1, e2 or e3 makes the field non-parallel.
        """
        alg = family_center3(lam)
        x = 0.3 * e(4) + leak * e(index)
        with pytest.raises(NotParallel):
            make_berwald_randers(alg, christoffel(alg), x)

    @given(radius=st.floats(min_value=1.0, max_value=5.0))
    @settings(max_examples=50, deadline=None)
    def test_long_fields_rejected(self, radius):
        assume(radius * radius >= 1.0)
        alg = family_center3(1.0)
        with pytest.raises(NormTooLarge):
            make_berwald_randers(alg, christoffel(alg), radius * e(5))
