"""
Metric Lie algebras

This module defines the MetricLieAlgebra value type (structure constants plus
an inner product), validates the Lie algebra axioms, and provides the bracket
and inner-product primitives together with center and derived-subalgebra
computations.

Indices are 1-based at every user-facing boundary (documents, reports,
basis_vector) and 0-based in the stored arrays.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from nilgeo import config
from nilgeo.errors import DimensionMismatch
from nilgeo.linalg import kernel_basis, numerical_rank, span_basis, subspace_residual

logger = logging.getLogger(__name__)

Vector = np.ndarray


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    """
    A Lie algebra with an inner product, given in a basis {e_1, ..., e_n}.

    structure[i, j, k] is the coefficient of e_k in [e_i, e_j] and gram[i, j]
    is <e_i, e_j>. The constructor stores what it is given; the axioms are
    checked by validate(), and from_brackets() antisymmetrizes for you.
    """

    dim: int
    structure: np.ndarray
    gram: Optional[np.ndarray] = None

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or isinstance(self.dim, bool) or self.dim < 1:
            raise DimensionMismatch(f"Dimension must be a positive integer, got {self.dim!r}")
        n = int(self.dim)
        structure = np.asarray(self.structure, dtype=float)
        if structure.shape != (n, n, n):
            raise DimensionMismatch(f"Structure tensor has shape {structure.shape}, expected {(n, n, n)}")
        gram = np.eye(n) if self.gram is None else np.asarray(self.gram, dtype=float)
        if gram.shape != (n, n):
            raise DimensionMismatch(f"Gram matrix has shape {gram.shape}, expected {(n, n)}")
        object.__setattr__(self, 'dim', n)
        object.__setattr__(self, 'structure', _frozen(structure))
        object.__setattr__(self, 'gram', _frozen(gram))

    @classmethod
    def from_brackets(cls, dim: int, entries: Dict[Tuple[int, int, int], float],
                      gram: Optional[np.ndarray] = None) -> 'MetricLieAlgebra':
        """
        Build an algebra from i < j bracket entries, antisymmetrizing.

        Args:
            dim: Dimension n
            entries: Mapping (i, j, k) -> c with 1-based indices and i < j,
                meaning [e_i, e_j] has coefficient c on e_k
            gram: Optional inner product matrix (identity when omitted)

        Returns:
            MetricLieAlgebra with c[j][i][k] = -c[i][j][k]
        """
        structure = np.zeros((dim, dim, dim))
        for (i, j, k), value in entries.items():
            structure[i - 1, j - 1, k - 1] = value
            structure[j - 1, i - 1, k - 1] = -value
        return cls(dim, structure, gram)

    @property
    def is_identity_gram(self) -> bool:
        return bool(np.array_equal(self.gram, np.eye(self.dim)))


@dataclass(frozen=True)
class CheckResult:
    """One named pass/fail check with its residual."""

    name: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class ValidationReport:
    """Per-check results; overall is the conjunction of all checks."""

    checks: Tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def overall(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def get(self, name: str) -> Optional[CheckResult]:
        for check in self.checks:
            if check.name == name:
                return check
        return None

    def to_dict(self) -> Dict[str, object]:
        return {
            'overall': self.overall,
            'checks': [
                {'name': c.name, 'passed': c.passed, 'residual': c.residual}
                for c in self.checks
            ],
        }


def basis_vector(dim: int, index: int) -> Vector:
    """
    Coordinate vector e_index.

    Args:
        dim: Dimension n
        index: 1-based index in 1..n

    Returns:
        Length-n array with a single 1
    """
    if not 1 <= index <= dim:
        raise DimensionMismatch(f"Basis index {index} outside 1..{dim}")
    v = np.zeros(dim)
    v[index - 1] = 1.0
    return v


def as_vector(alg: MetricLieAlgebra, x: Sequence[float], name: str = 'vector') -> Vector:
    """Coerce to a float array and check it against the algebra dimension."""
    v = np.asarray(x, dtype=float)
    if v.shape != (alg.dim,):
        raise DimensionMismatch(f"{name} has shape {v.shape}, expected ({alg.dim},)")
    return v


def bracket(alg: MetricLieAlgebra, x: Sequence[float], y: Sequence[float]) -> Vector:
    """Lie bracket [x, y], the bilinear extension of the structure constants."""
    x = as_vector(alg, x, 'x')
    y = as_vector(alg, y, 'y')
    return np.einsum('i,j,ijk->k', x, y, alg.structure)


def inner(alg: MetricLieAlgebra, x: Sequence[float], y: Sequence[float]) -> float:
    """Inner product x^T G y."""
    x = as_vector(alg, x, 'x')
    y = as_vector(alg, y, 'y')
    return float(x @ alg.gram @ y)


def norm(alg: MetricLieAlgebra, x: Sequence[float]) -> float:
    """Gram norm sqrt(<x, x>)."""
    return float(np.sqrt(max(inner(alg, x, x), 0.0)))


def jacobi_tensor(structure: np.ndarray) -> np.ndarray:
    """
    Jacobiator on basis triples.

    Returns:
        J[i, j, l, m], the e_m coefficient of
        [[e_i, e_j], e_l] + [[e_j, e_l], e_i] + [[e_l, e_i], e_j]
    """
    nested = np.einsum('ijk,klm->ijlm', structure, structure)
    return nested + np.einsum('jlim->ijlm', nested) + np.einsum('lijm->ijlm', nested)


def validate(alg: MetricLieAlgebra) -> ValidationReport:
    """
    Check antisymmetry, the Jacobi identity and that the gram matrix is SPD.

    Failures are reported, never raised.

    Args:
        alg: Algebra to check

    Returns:
        ValidationReport with one entry per axiom
    """
    c = alg.structure
    scale = float(np.max(np.abs(c))) if c.size else 0.0

    antisym = float(np.max(np.abs(c + np.transpose(c, (1, 0, 2)))))
    jacobi = float(np.max(np.abs(jacobi_tensor(c))))

    g = alg.gram
    g_scale = float(np.linalg.norm(g, 2))
    asym = float(np.max(np.abs(g - g.T)))
    min_eig = float(np.min(np.linalg.eigvalsh((g + g.T) / 2.0)))

    checks = (
        CheckResult('antisymmetry', antisym <= config.ANTISYMMETRY_TOL * scale, antisym),
        CheckResult('jacobi', jacobi <= config.JACOBI_TOL * scale ** 2, jacobi),
        CheckResult('gram_symmetric', asym <= config.SPD_TOL * g_scale, asym),
        CheckResult('gram_positive_definite', g_scale > 0.0 and min_eig > config.SPD_TOL * g_scale, min_eig),
    )
    report = ValidationReport(checks)
    if report.overall:
        logger.debug(f"Algebra of dimension {alg.dim} validated")
    else:
        logger.info(f"Algebra validation failed: {[chk.name for chk in report.failed()]}")
    return report


def _as_list(columns: np.ndarray) -> List[Vector]:
    return [columns[:, idx].copy() for idx in range(columns.shape[1])]


def adjoint_stack(alg: MetricLieAlgebra) -> np.ndarray:
    """
    Matrix of z -> ([z, e_1], ..., [z, e_n]) as an n^2 x n array.

    Row (i, k) holds the e_k coefficient of [z, e_i].
    """
    n = alg.dim
    return np.transpose(alg.structure, (1, 2, 0)).reshape(n * n, n)


def center(alg: MetricLieAlgebra) -> List[Vector]:
    """
    Gram-orthonormal basis of the center {z : [z, e_i] = 0 for all i}.

    Args:
        alg: Validated algebra

    Returns:
        Canonically ordered list of basis vectors
    """
    basis = kernel_basis(adjoint_stack(alg), alg.gram)
    logger.debug(f"Center dimension {basis.shape[1]}")
    return _as_list(basis)


def adjoint_rank(alg: MetricLieAlgebra) -> int:
    """Rank of the stacked adjoint map; rank + dim center = n."""
    return numerical_rank(adjoint_stack(alg))


def derived(alg: MetricLieAlgebra) -> List[Vector]:
    """
    Gram-orthonormal basis of the derived algebra span{[e_i, e_j] : i < j}.

    Args:
        alg: Validated algebra

    Returns:
        Canonically ordered list of basis vectors (empty for abelian algebras)
    """
    n = alg.dim
    pairs = [alg.structure[i, j] for i in range(n) for j in range(i + 1, n)]
    if not pairs:
        return []
    basis = span_basis(np.column_stack(pairs), alg.gram)
    return _as_list(basis)


def is_two_step_nilpotent(alg: MetricLieAlgebra) -> bool:
    """
    True iff the derived algebra is nonzero and central.

    Args:
        alg: Validated algebra

    Returns:
        Whether all double brackets vanish while some bracket does not
    """
    derived_basis = derived(alg)
    if not derived_basis:
        return False
    center_vectors = center(alg)
    center_basis = np.column_stack(center_vectors) if center_vectors else np.zeros((alg.dim, 0))
    residual = subspace_residual(derived_basis, center_basis, alg.gram)
    logger.debug(f"Derived-in-center residual {residual:.3e}")
    return residual <= config.CONTAINMENT_TOL


def orthonormal_frame(alg: MetricLieAlgebra) -> np.ndarray:
    """
    Gram-orthonormal frame {f_k} as the columns of an n x n array.

    The identity gram returns the identity, so the coordinate basis is used
    as-is for the usual orthonormal fixtures.
    """
    if alg.is_identity_gram:
        return np.eye(alg.dim)
    lower = np.linalg.cholesky(alg.gram)
    return np.linalg.inv(lower).T


def change_basis(alg: MetricLieAlgebra, transform: np.ndarray) -> MetricLieAlgebra:
    """
    Express the algebra in the basis f_a = sum_i transform[i, a] e_i.

    Args:
        alg: Source algebra
        transform: Invertible n x n matrix whose columns are the new basis

    Returns:
        Algebra with transformed structure constants and gram matrix
    """
    p = np.asarray(transform, dtype=float)
    if p.shape != (alg.dim, alg.dim):
        raise DimensionMismatch(f"Transform has shape {p.shape}, expected {(alg.dim, alg.dim)}")
    p_inv = np.linalg.inv(p)
    structure = np.einsum('ia,jb,ijk,ck->abc', p, p, alg.structure, p_inv)
    gram = p.T @ alg.gram @ p
    return MetricLieAlgebra(alg.dim, structure, gram)


def abelian(dim: int) -> MetricLieAlgebra:
    """Abelian algebra of the given dimension with identity gram."""
    return MetricLieAlgebra(dim, np.zeros((dim, dim, dim)))
