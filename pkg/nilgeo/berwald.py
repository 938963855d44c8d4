"""
Parallel left-invariant vector fields and Berwald-type Randers metrics.

A Randers metric F = alpha + beta built from a left-invariant metric and a
left-invariant field x is of Berwald type iff x is parallel for the
Levi-Civita connection. Left-invariant parallel fields form the kernel of
the linear map Q -> (nabla_{e_1} Q, ..., nabla_{e_n} Q).
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from nilgeo.algebra_core import MetricLieAlgebra, Vector
from nilgeo.levi_civita import ChristoffelTensor, connection_matrix, is_parallel_field
from nilgeo.linalg import kernel_basis
from nilgeo.randers import RandersMetric

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParallelBasis:
    """Gram-orthonormal basis of the parallel left-invariant fields."""

    vectors: Tuple[Vector, ...]

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    @property
    def exists(self) -> bool:
        """Whether Berwald Randers metrics exist (a nonzero parallel field does)."""
        return self.dimension > 0

    def as_matrix(self, dim: int) -> np.ndarray:
        if not self.vectors:
            return np.zeros((dim, 0))
        return np.column_stack(self.vectors)


def parallel_field_basis(alg: MetricLieAlgebra, ct: ChristoffelTensor) -> ParallelBasis:
    """
    Basis of {Q : nabla_{e_i} Q = 0 for all i}.

    Args:
        alg: Validated algebra
        ct: Its Christoffel tensor

    Returns:
        ParallelBasis, possibly empty
    """
    basis = kernel_basis(connection_matrix(alg, ct), alg.gram)
    vectors = tuple(basis[:, idx].copy() for idx in range(basis.shape[1]))
    logger.info(f"Parallel field space has dimension {len(vectors)}")
    return ParallelBasis(vectors)


def is_parallel(alg: MetricLieAlgebra, ct: ChristoffelTensor, x: Sequence[float]) -> bool:
    """
    Whether nabla_U x = 0 for every U.

    Checked on basis directions with tolerance PARALLEL_TOL * (1 + |gamma|) * |x|,
    so x = 0 is parallel.
    """
    return is_parallel_field(alg, ct, x)


def make_berwald_randers(alg: MetricLieAlgebra, ct: ChristoffelTensor, x: Sequence[float]) -> RandersMetric:
    """
    Build the Randers metric F(y) = |y| + <x, y> of Berwald type.

    Args:
        alg: Validated algebra
        ct: Its Christoffel tensor
        x: Deformation field

    Returns:
        RandersMetric

    Raises:
        ZeroVector: If x = 0
        NotParallel: If x is not parallel
        NormTooLarge: If <x, x> >= 1
    """
    rm = RandersMetric(alg, ct, np.asarray(x, dtype=float))
    logger.debug(f"Built Berwald Randers metric with |x| = {rm.norm_x:.6g}")
    return rm
