"""
Curvature of left-invariant metrics

Sign conventions:
    R(U, V)W = nabla_U nabla_V W - nabla_V nabla_U W - nabla_[U,V] W
    K(span{a, b}) = <R(b, a)a, b> / (<a,a><b,b> - <a,b>^2)
    Ric(u, v) = sum_k <R(f_k, u)v, f_k> over a gram-orthonormal frame
    S = trace of Ric, i.e. the sum of K(f_i, f_j) over ordered pairs i != j
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from nilgeo import config, workers
from nilgeo.algebra_core import MetricLieAlgebra, Vector, as_vector, basis_vector, bracket, inner, orthonormal_frame
from nilgeo.errors import DegeneratePlane, ScanError
from nilgeo.levi_civita import ChristoffelTensor, nabla

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """r[i, j, k, l] is the e_l coefficient of R(e_i, e_j) e_k."""

    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        r.flags.writeable = False
        object.__setattr__(self, 'r', r)


@dataclass(frozen=True, eq=False)
class Plane:
    """The 2-plane spanned by a and b (not necessarily orthonormal)."""

    a: np.ndarray
    b: np.ndarray


@dataclass(frozen=True)
class CurvatureScan:
    """Extremes of sectional curvature over sampled planes, with witnesses."""

    min_K: float
    max_K: float
    argmin: Plane
    argmax: Plane
    evaluated: int


def riemann(alg: MetricLieAlgebra, ct: ChristoffelTensor, u: Sequence[float], v: Sequence[float],
            w: Sequence[float]) -> Vector:
    """R(u, v)w, trilinear in its arguments."""
    u = as_vector(alg, u, 'u')
    v = as_vector(alg, v, 'v')
    w = as_vector(alg, w, 'w')
    return (nabla(alg, ct, u, nabla(alg, ct, v, w))
            - nabla(alg, ct, v, nabla(alg, ct, u, w))
            - nabla(alg, ct, bracket(alg, u, v), w))


def riemann_tensor(alg: MetricLieAlgebra, ct: ChristoffelTensor) -> CurvatureTensor:
    """
    Full curvature tensor on basis vectors.

    Args:
        alg: Validated algebra
        ct: Its Christoffel tensor

    Returns:
        CurvatureTensor with r[i, j, k, l] = <R(e_i, e_j) e_k>^l
    """
    g = ct.gamma
    r = (np.einsum('jkm,iml->ijkl', g, g)
         - np.einsum('ikm,jml->ijkl', g, g)
         - np.einsum('ijm,mkl->ijkl', alg.structure, g))
    return CurvatureTensor(r)


def plane_area(alg: MetricLieAlgebra, a: Vector, b: Vector) -> Tuple[float, float]:
    """
    Gram determinant of a pair and the nondegeneracy threshold for it.

    Returns:
        (<a,a><b,b> - <a,b>^2, DEGENERACY_TOL * <a,a><b,b>)
    """
    aa = inner(alg, a, a)
    bb = inner(alg, b, b)
    ab = inner(alg, a, b)
    return aa * bb - ab * ab, config.DEGENERACY_TOL * aa * bb


def is_nondegenerate(alg: MetricLieAlgebra, a: Vector, b: Vector) -> bool:
    area, threshold = plane_area(alg, a, b)
    return area > threshold


def sectional(alg: MetricLieAlgebra, ct: ChristoffelTensor, p: Plane) -> float:
    """
    Sectional curvature of a plane.

    Args:
        alg: Validated algebra
        ct: Its Christoffel tensor
        p: Plane given by any basis

    Returns:
        <R(b, a)a, b> / (<a,a><b,b> - <a,b>^2)

    Raises:
        DegeneratePlane: If a and b are numerically dependent
    """
    a = as_vector(alg, p.a, 'a')
    b = as_vector(alg, p.b, 'b')
    area, threshold = plane_area(alg, a, b)
    if not area > threshold:
        raise DegeneratePlane(f"Plane is degenerate (gram determinant {area:.3e})")
    return inner(alg, riemann(alg, ct, b, a, a), b) / area


def sectional_curvature(alg: MetricLieAlgebra, ct: ChristoffelTensor, a: Sequence[float], b: Sequence[float]) -> float:
    """sectional() for span{a, b}."""
    return sectional(alg, ct, Plane(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


def ricci(alg: MetricLieAlgebra, ct: ChristoffelTensor, u: Sequence[float], v: Sequence[float]) -> float:
    """Ric(u, v) = sum_k <R(f_k, u)v, f_k>; symmetric in u and v."""
    u = as_vector(alg, u, 'u')
    v = as_vector(alg, v, 'v')
    frame = orthonormal_frame(alg)
    total = 0.0
    for k in range(alg.dim):
        f = frame[:, k]
        total += inner(alg, riemann(alg, ct, f, u, v), f)
    return total


def ricci_tensor(alg: MetricLieAlgebra, ct: ChristoffelTensor) -> np.ndarray:
    """Ricci form on basis vectors, ric[i, j] = Ric(e_i, e_j)."""
    n = alg.dim
    ric = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            ric[i, j] = ricci(alg, ct, basis_vector(n, i + 1), basis_vector(n, j + 1))
    return ric


def scalar_curvature(alg: MetricLieAlgebra, ct: ChristoffelTensor) -> float:
    """
    Scalar curvature, the trace of Ricci over a gram-orthonormal frame.

    Args:
        alg: Validated algebra
        ct: Its Christoffel tensor

    Returns:
        S (constant on the group by left invariance)
    """
    frame = orthonormal_frame(alg)
    s = sum(ricci(alg, ct, frame[:, i], frame[:, i]) for i in range(alg.dim))
    logger.debug(f"Scalar curvature {s}")
    return float(s)


def sample_generator(seed: int, index: int) -> np.random.Generator:
    """
    Random generator for one sample.

    PCG64 seeded by SeedSequence(seed, spawn_key=(index,)), so every sample's
    stream depends only on (seed, index).
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def random_plane(alg: MetricLieAlgebra, rng: np.random.Generator, max_tries: int = 1000) -> Plane:
    """
    Uniform [-1, 1] components, rejecting near-degenerate pairs.

    Args:
        alg: Algebra supplying dimension and gram
        rng: Generator for this sample
        max_tries: Rejection budget

    Returns:
        Nondegenerate Plane
    """
    for _ in range(max_tries):
        a = rng.uniform(-1.0, 1.0, alg.dim)
        b = rng.uniform(-1.0, 1.0, alg.dim)
        if is_nondegenerate(alg, a, b):
            return Plane(a, b)
    raise ScanError(f"No nondegenerate plane after {max_tries} draws")


def coordinate_planes(dim: int) -> List[Plane]:
    """span{e_i, e_j} for all i < j."""
    return [Plane(basis_vector(dim, i), basis_vector(dim, j))
            for i, j in combinations(range(1, dim + 1), 2)]


def _better(candidate: Tuple[float, int], best: Optional[Tuple[float, int]], lower: bool) -> bool:
    if best is None:
        return True
    if candidate[0] != best[0]:
        return candidate[0] < best[0] if lower else candidate[0] > best[0]
    return candidate[1] < best[1]


def _extremes(results: Sequence[Tuple[float, int, Plane]]):
    lo = hi = None
    lo_plane = hi_plane = None
    for value, index, plane in results:
        if _better((value, index), lo, True):
            lo, lo_plane = (value, index), plane
        if _better((value, index), hi, False):
            hi, hi_plane = (value, index), plane
    return lo, lo_plane, hi, hi_plane


def check_scan_arguments(samples: int, seed: int) -> None:
    if isinstance(samples, bool) or not isinstance(samples, (int, np.integer)) or samples < 1:
        raise ScanError(f"samples must be a positive integer, got {samples!r}")
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ScanError(f"seed must be a non-negative integer, got {seed!r}")


def curvature_scan(alg: MetricLieAlgebra, ct: ChristoffelTensor, samples: int, seed: int,
                   workers_count: Optional[int] = None) -> CurvatureScan:
    """
    Extremes of sectional curvature over coordinate and random planes.

    Every coordinate plane span{e_i, e_j} is evaluated first, then `samples`
    random planes; sample i draws from sample_generator(seed, i). Ties go to
    the earliest candidate, so the result is the same for any worker count.

    Args:
        alg: Validated algebra of dimension >= 2
        ct: Its Christoffel tensor
        samples: Number of random planes (>= 1)
        seed: Non-negative seed
        workers_count: Threads (defaults to NILGEO_WORKERS)

    Returns:
        CurvatureScan with min/max and witness planes
    """
    check_scan_arguments(samples, seed)
    if alg.dim < 2:
        raise ScanError("Sectional curvature needs dimension >= 2")

    fixed = coordinate_planes(alg.dim)
    offset = len(fixed)
    results = [(sectional(alg, ct, plane), idx, plane) for idx, plane in enumerate(fixed)]

    def evaluate(indices: range):
        chunk = []
        for i in indices:
            plane = random_plane(alg, sample_generator(seed, i))
            chunk.append((sectional(alg, ct, plane), offset + i, plane))
        return chunk

    for chunk in workers.run_chunked(evaluate, samples, workers_count):
        results.extend(chunk)

    lo, lo_plane, hi, hi_plane = _extremes(results)
    logger.info(f"Curvature scan over {len(results)} planes: min {lo[0]:.6g}, max {hi[0]:.6g}")
    return CurvatureScan(min_K=lo[0], max_K=hi[0], argmin=lo_plane, argmax=hi_plane, evaluated=len(results))
