"""
Small dense linear-algebra kernels shared by the geometry modules.

Subspaces are returned as n x k arrays whose columns are gram-orthonormal and
in a canonical order: the basis is first reduced so that it has an identity
block on column-pivoted coordinates, sorted by pivot index, then
orthonormalized with modified Gram-Schmidt. Coordinate subspaces therefore
come back as the coordinate vectors themselves.
"""

import logging
from typing import Iterable

import numpy as np
import scipy.linalg

from nilgeo import config

logger = logging.getLogger(__name__)


def numerical_rank(matrix: np.ndarray, tol: float = config.RANK_TOL) -> int:
    """
    Rank of a matrix with singular values cut at tol relative to the largest.

    Args:
        matrix: Any 2-d array
        tol: Relative cutoff

    Returns:
        Number of singular values strictly above tol * s_max
    """
    if matrix.size == 0:
        return 0
    s = scipy.linalg.svdvals(matrix)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def gram_schmidt(columns: np.ndarray, gram: np.ndarray, tol: float = config.RANK_TOL) -> np.ndarray:
    """
    Modified Gram-Schmidt with respect to the inner product x^T G y.

    Args:
        columns: n x k array of vectors to orthonormalize, in order
        gram: n x n symmetric positive definite matrix
        tol: Columns whose residual norm drops below tol times their
            original norm are treated as dependent and skipped

    Returns:
        n x m array (m <= k) of gram-orthonormal columns
    """
    n = gram.shape[0]
    kept = []
    for idx in range(columns.shape[1]):
        v = np.array(columns[:, idx], dtype=float)
        original = np.sqrt(max(v @ gram @ v, 0.0))
        if original == 0.0:
            continue
        for q in kept:
            v = v - (q @ gram @ v) * q
        norm = np.sqrt(max(v @ gram @ v, 0.0))
        if norm <= tol * original:
            logger.debug(f"Dropping dependent column {idx} (residual {norm:.3e})")
            continue
        kept.append(v / norm)
    if not kept:
        return np.zeros((n, 0))
    return np.column_stack(kept)


def _canonical(basis: np.ndarray, gram: np.ndarray, tol: float) -> np.ndarray:
    k = basis.shape[1]
    if k == 0:
        return basis
    _, _, piv = scipy.linalg.qr(basis.T, pivoting=True, mode='economic')
    pivots = np.sort(piv[:k])
    reduced = basis @ np.linalg.solve(basis[pivots, :], np.eye(k))
    return gram_schmidt(reduced, gram, tol)


def kernel_basis(matrix: np.ndarray, gram: np.ndarray, tol: float = config.RANK_TOL) -> np.ndarray:
    """
    Canonical gram-orthonormal basis of the kernel of a linear map.

    Args:
        matrix: m x n array representing the map on R^n
        gram: n x n inner product for the orthonormalization
        tol: Relative singular value cutoff

    Returns:
        n x k array of basis columns (k may be 0)
    """
    n = matrix.shape[1]
    if matrix.shape[0] == 0:
        raw = np.eye(n)
    else:
        raw = scipy.linalg.null_space(matrix, rcond=tol)
    return _canonical(raw, gram, tol)


def span_basis(columns: np.ndarray, gram: np.ndarray, tol: float = config.RANK_TOL) -> np.ndarray:
    """
    Canonical gram-orthonormal basis of the column span of an array.

    Args:
        columns: n x m array
        gram: n x n inner product
        tol: Relative singular value cutoff

    Returns:
        n x k array of basis columns (k may be 0)
    """
    n = columns.shape[0]
    if columns.size == 0 or not np.any(columns):
        return np.zeros((n, 0))
    raw = scipy.linalg.orth(columns, rcond=tol)
    return _canonical(raw, gram, tol)


def subspace_residual(vectors: Iterable[np.ndarray], basis: np.ndarray, gram: np.ndarray) -> float:
    """
    Largest gram-norm distance from a vector to the span of an orthonormal basis.

    Args:
        vectors: Vectors to project
        basis: n x k gram-orthonormal columns
        gram: n x n inner product

    Returns:
        max |v - P v| over the given vectors (0.0 when there are none)
    """
    worst = 0.0
    for v in vectors:
        v = np.asarray(v, dtype=float)
        if basis.shape[1]:
            coeffs = basis.T @ gram @ v
            v = v - basis @ coeffs
        worst = max(worst, float(np.sqrt(max(v @ gram @ v, 0.0))))
    return worst
