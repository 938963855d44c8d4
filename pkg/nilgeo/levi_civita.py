"""
Levi-Civita connection of a left-invariant metric

Left-invariant vector fields are identified with their values at the
identity, so the connection is a bilinear map on the Lie algebra. The Koszul
formula then reduces to

    2 <nabla_U V, W> = <[U, V], W> - <[V, W], U> + <[W, U], V>

because the inner products of left-invariant fields are constant.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from nilgeo import config
from nilgeo.algebra_core import MetricLieAlgebra, Vector, as_vector, bracket
from nilgeo.errors import DimensionMismatch, GramNotSPD

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ChristoffelTensor:
    """gamma[i, j, k] is the e_k coefficient of nabla_{e_i} e_j."""

    gamma: np.ndarray

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=float)
        if gamma.ndim != 3 or len(set(gamma.shape)) != 1:
            raise DimensionMismatch(f"Christoffel tensor must be n x n x n, got {gamma.shape}")
        gamma.flags.writeable = False
        object.__setattr__(self, 'gamma', gamma)

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.gamma))


def koszul_rhs(alg: MetricLieAlgebra) -> np.ndarray:
    """
    Right-hand side of the Koszul formula on basis triples.

    Returns:
        rhs[i, j, k] = <nabla_{e_i} e_j, e_k>
    """
    lowered = np.einsum('ijm,mk->ijk', alg.structure, alg.gram)
    return 0.5 * (lowered
                  - np.einsum('jki->ijk', lowered)
                  + np.einsum('kij->ijk', lowered))


def christoffel(alg: MetricLieAlgebra) -> ChristoffelTensor:
    """
    Solve the Koszul formula for the connection coefficients.

    With identity gram the lowered coefficients are the answer; otherwise
    one Cholesky factorization of G is reused for all n^2 solves.

    Args:
        alg: Validated algebra

    Returns:
        ChristoffelTensor of the Levi-Civita connection

    Raises:
        GramNotSPD: If the gram matrix cannot be factored
    """
    n = alg.dim
    rhs = koszul_rhs(alg)
    if alg.is_identity_gram:
        gamma = rhs
    else:
        try:
            factor = scipy.linalg.cho_factor(alg.gram)
        except np.linalg.LinAlgError as e:
            raise GramNotSPD(f"Gram matrix is not positive definite: {e}")
        gamma = scipy.linalg.cho_solve(factor, rhs.reshape(n * n, n).T).T.reshape(n, n, n)
    logger.debug(f"Computed Christoffel tensor for dimension {n}")
    return ChristoffelTensor(gamma)


def _check(alg: MetricLieAlgebra, ct: ChristoffelTensor) -> None:
    if ct.dim != alg.dim:
        raise DimensionMismatch(f"Christoffel tensor of dimension {ct.dim} used with algebra of dimension {alg.dim}")


def nabla(alg: MetricLieAlgebra, ct: ChristoffelTensor, u: Sequence[float], v: Sequence[float]) -> Vector:
    """Covariant derivative nabla_u v of left-invariant fields (bilinear)."""
    _check(alg, ct)
    u = as_vector(alg, u, 'u')
    v = as_vector(alg, v, 'v')
    return np.einsum('i,j,ijk->k', u, v, ct.gamma)


def torsion_residual(alg: MetricLieAlgebra, ct: ChristoffelTensor) -> float:
    """max |gamma[i][j] - gamma[j][i] - c[i][j]| over all entries."""
    _check(alg, ct)
    torsion = ct.gamma - np.transpose(ct.gamma, (1, 0, 2)) - alg.structure
    return float(np.max(np.abs(torsion)))


def metric_residual(alg: MetricLieAlgebra, ct: ChristoffelTensor) -> float:
    """max |<nabla_{e_i} e_j, e_k> + <e_j, nabla_{e_i} e_k>| over all entries."""
    _check(alg, ct)
    lowered = np.einsum('ijm,mk->ijk', ct.gamma, alg.gram)
    return float(np.max(np.abs(lowered + np.transpose(lowered, (0, 2, 1)))))


def parallel_defect(alg: MetricLieAlgebra, ct: ChristoffelTensor, x: Sequence[float]) -> float:
    """
    Largest gram norm of nabla_{e_i} x over the basis directions.

    By linearity in the lower slot this is zero iff nabla_U x = 0 for all U.
    """
    _check(alg, ct)
    x = as_vector(alg, x, 'x')
    derivatives = np.einsum('j,ijk->ik', x, ct.gamma)
    norms_sq = np.einsum('ik,kl,il->i', derivatives, alg.gram, derivatives)
    return float(np.sqrt(max(float(np.max(norms_sq)), 0.0)))


def is_parallel_field(alg: MetricLieAlgebra, ct: ChristoffelTensor, x: Sequence[float]) -> bool:
    """parallel_defect(x) <= PARALLEL_TOL * (1 + |gamma|) * |x|; true for x = 0."""
    x = as_vector(alg, x, 'x')
    x_norm = float(np.sqrt(max(x @ alg.gram @ x, 0.0)))
    return parallel_defect(alg, ct, x) <= config.PARALLEL_TOL * (1.0 + ct.norm) * x_norm


def connection_matrix(alg: MetricLieAlgebra, ct: ChristoffelTensor) -> np.ndarray:
    """
    Matrix of Q -> (nabla_{e_1} Q, ..., nabla_{e_n} Q) as an n^2 x n array.

    Row (i, k) holds the e_k coefficient of nabla_{e_i} Q.
    """
    _check(alg, ct)
    n = alg.dim
    return np.transpose(ct.gamma, (0, 2, 1)).reshape(n * n, n)


def bracket_defect(alg: MetricLieAlgebra, ct: ChristoffelTensor, u: Sequence[float], v: Sequence[float]) -> Vector:
    """nabla_u v - nabla_v u - [u, v]; zero for a torsion-free connection."""
    return nabla(alg, ct, u, v) - nabla(alg, ct, v, u) - bracket(alg, u, v)
