"""
Left-invariant Randers metrics of Berwald type

F(Y) = sqrt(<Y, Y>) + <X, Y> with X parallel and 0 < |X| < 1. For such
metrics the Chern connection is the Levi-Civita connection of the
underlying inner product, so flag curvature is computed from the Riemannian
curvature tensor and the fundamental tensor g_Y.

Closed form of the fundamental tensor, with alpha = |Y| and F = F(Y):

    g_Y(U, V) = (F / alpha) * (<U, V> - <Y, U><Y, V> / alpha^2)
                + (<Y, U> / alpha + <X, U>) * (<Y, V> / alpha + <X, V>)
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from nilgeo import config, workers
from nilgeo.algebra_core import MetricLieAlgebra, Vector, as_vector, inner, norm
from nilgeo.curvature import check_scan_arguments, plane_area, riemann, sample_generator, sectional_curvature
from nilgeo.errors import DegenerateFlag, NormTooLarge, NotParallel, ScanError, StepTooSmall, ZeroPole, ZeroVector
from nilgeo.levi_civita import ChristoffelTensor, is_parallel_field, parallel_defect

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RandersMetric:
    """
    A metric Lie algebra with an admissible parallel deformation field x.

    Build it with berwald.make_berwald_randers; the constructor re-checks
    admissibility so an instance always satisfies 0 < |x| < 1 and x parallel.
    """

    algebra: MetricLieAlgebra
    ct: ChristoffelTensor
    x: np.ndarray
    norm_x: float = field(init=False)

    def __post_init__(self):
        x = np.array(as_vector(self.algebra, self.x, 'x'), dtype=float)
        x.flags.writeable = False
        object.__setattr__(self, 'x', x)
        norm_sq = float(x @ self.algebra.gram @ x)
        if norm_sq <= 0.0:
            raise ZeroVector("Deformation field is zero; this is the Riemannian metric itself")
        if not is_parallel_field(self.algebra, self.ct, x):
            defect = parallel_defect(self.algebra, self.ct, x)
            raise NotParallel(f"Deformation field is not parallel (max |nabla_e_i x| = {defect:.3e}); "
                              f"no Berwald Randers metric")
        if not norm_sq < 1.0:
            raise NormTooLarge(f"Deformation field has <x, x> = {norm_sq:.12g}, must be < 1")
        object.__setattr__(self, 'norm_x', float(np.sqrt(norm_sq)))


@dataclass(frozen=True, eq=False)
class Flag:
    """Pole y and transverse edge u spanning the flag's 2-plane."""

    y: np.ndarray
    u: np.ndarray


@dataclass(frozen=True)
class FlagReport:
    """Flag curvature next to the Riemannian sectional curvature of its plane."""

    K: float
    K_riemann: float
    denominator: float


@dataclass(frozen=True)
class FlagScan:
    """Sign census of flag curvature over sampled flags."""

    min_K: float
    max_K: float
    negative: int
    near_zero: int
    positive: int
    sign_mismatches: int
    evaluated: int


def f_value(rm: RandersMetric, y: Sequence[float]) -> float:
    """F(y) = |y| + <x, y>; zero only at y = 0."""
    y = as_vector(rm.algebra, y, 'y')
    return norm(rm.algebra, y) + inner(rm.algebra, rm.x, y)


def _pole(rm: RandersMetric, y: Sequence[float]) -> Vector:
    y = as_vector(rm.algebra, y, 'y')
    if not inner(rm.algebra, y, y) > 0.0:
        raise ZeroPole("Fundamental tensor is undefined at y = 0")
    return y


def fundamental_tensor(rm: RandersMetric, y: Sequence[float], u: Sequence[float], v: Sequence[float]) -> float:
    """
    Closed-form g_y(u, v).

    Args:
        rm: Berwald Randers metric
        y: Nonzero pole
        u: First argument
        v: Second argument

    Returns:
        Value of the fundamental tensor; symmetric bilinear in (u, v)

    Raises:
        ZeroPole: If y = 0
    """
    alg = rm.algebra
    y = _pole(rm, y)
    u = as_vector(alg, u, 'u')
    v = as_vector(alg, v, 'v')
    yy = inner(alg, y, y)
    alpha = np.sqrt(yy)
    f = alpha + inner(alg, rm.x, y)
    yu = inner(alg, y, u)
    yv = inner(alg, y, v)
    angular = inner(alg, u, v) - yu * yv / yy
    return float((f / alpha) * angular
                 + (yu / alpha + inner(alg, rm.x, u)) * (yv / alpha + inner(alg, rm.x, v)))


def fundamental_matrix(rm: RandersMetric, y: Sequence[float]) -> np.ndarray:
    """Matrix of g_y in the coordinate basis."""
    alg = rm.algebra
    y = _pole(rm, y)
    gy = alg.gram @ y
    yy = float(y @ gy)
    alpha = np.sqrt(yy)
    f = alpha + float(rm.x @ gy)
    ell = gy / alpha + alg.gram @ rm.x
    return (f / alpha) * (alg.gram - np.outer(gy, gy) / yy) + np.outer(ell, ell)


def default_step(rm: RandersMetric, y: Sequence[float]) -> float:
    return config.FD_STEP_FACTOR * (1.0 + norm(rm.algebra, y))


def fundamental_tensor_fd(rm: RandersMetric, y: Sequence[float], u: Sequence[float], v: Sequence[float],
                          h: Optional[float] = None) -> float:
    """
    Central-difference g_y(u, v) = 1/2 d^2/ds dt F^2(y + s u + t v) at 0.

    Args:
        rm: Berwald Randers metric
        y: Nonzero pole
        u: First direction
        v: Second direction
        h: Step (defaults to FD_STEP_FACTOR * (1 + |y|))

    Returns:
        Finite-difference approximation of the fundamental tensor

    Raises:
        ZeroPole: If y = 0
        StepTooSmall: If h < FD_STEP_FLOOR * (1 + |y|)
    """
    alg = rm.algebra
    y = _pole(rm, y)
    u = as_vector(alg, u, 'u')
    v = as_vector(alg, v, 'v')
    if h is None:
        h = default_step(rm, y)
    floor = config.FD_STEP_FLOOR * (1.0 + norm(alg, y))
    if not h >= floor:
        raise StepTooSmall(f"Step {h!r} below floor {floor:.3e}")

    def f_sq(w: Vector) -> float:
        return f_value(rm, w) ** 2

    return 0.5 * (f_sq(y + h * u + h * v) - f_sq(y + h * u - h * v)
                  - f_sq(y - h * u + h * v) + f_sq(y - h * u - h * v)) / (4.0 * h * h)


def _flag_vectors(rm: RandersMetric, flag: Flag):
    y = as_vector(rm.algebra, flag.y, 'y')
    u = as_vector(rm.algebra, flag.u, 'u')
    area, threshold = plane_area(rm.algebra, y, u)
    if not area > threshold:
        raise DegenerateFlag(f"Flag is degenerate (gram determinant {area:.3e})")
    return y, u


def flag_curvature(rm: RandersMetric, flag: Flag) -> float:
    """
    Flag curvature K(span{u, y}, y).

    g_y(R(u, y)y, u) / (g_y(y, y) g_y(u, u) - g_y(y, u)^2), with R the
    Riemannian curvature tensor (equal to the Chern curvature for Berwald
    metrics). No normalization is applied to the flag.

    Args:
        rm: Berwald Randers metric
        flag: Pole and transverse edge

    Returns:
        Flag curvature

    Raises:
        DegenerateFlag: If y and u do not span a plane
    """
    y, u = _flag_vectors(rm, flag)
    r = riemann(rm.algebra, rm.ct, u, y, y)
    numerator = fundamental_tensor(rm, y, r, u)
    g_yy = fundamental_tensor(rm, y, y, y)
    g_uu = fundamental_tensor(rm, y, u, u)
    g_yu = fundamental_tensor(rm, y, y, u)
    return numerator / (g_yy * g_uu - g_yu * g_yu)


def flag_report(rm: RandersMetric, flag: Flag) -> FlagReport:
    """
    Flag curvature, the sectional curvature of the flag's plane, and
    (1 + <x, y/|y|>)^2, the factor relating them for orthonormal flags.
    """
    y, u = _flag_vectors(rm, flag)
    k = flag_curvature(rm, flag)
    k_riemann = sectional_curvature(rm.algebra, rm.ct, y, u)
    denominator = (1.0 + inner(rm.algebra, rm.x, y) / norm(rm.algebra, y)) ** 2
    return FlagReport(K=k, K_riemann=k_riemann, denominator=denominator)


def random_flag(alg: MetricLieAlgebra, rng: np.random.Generator, sparse: bool = True, max_tries: int = 1000) -> Flag:
    """
    Random flag with uniform [-1, 1] components.

    With sparse=True every component is kept with probability 1/2, so flags
    lying in coordinate subspaces are drawn with positive probability.
    """
    for _ in range(max_tries):
        y = rng.uniform(-1.0, 1.0, alg.dim)
        u = rng.uniform(-1.0, 1.0, alg.dim)
        if sparse:
            y = y * (rng.random(alg.dim) < 0.5)
            u = u * (rng.random(alg.dim) < 0.5)
        area, threshold = plane_area(alg, y, u)
        if area > threshold:
            return Flag(y, u)
    raise ScanError(f"No nondegenerate flag after {max_tries} draws")


def _sign(value: float) -> int:
    if abs(value) < config.NEAR_ZERO_TOL:
        return 0
    return 1 if value > 0 else -1


def flag_scan(rm: RandersMetric, samples: int, seed: int, workers_count: Optional[int] = None) -> FlagScan:
    """
    Sign census of flag curvature over sparse random flags.

    Sample i draws from curvature.sample_generator(seed, i). Every sample is
    also compared with the sectional curvature of its plane; differing
    signs are counted as mismatches.

    Args:
        rm: Berwald Randers metric
        samples: Number of flags (>= 1)
        seed: Non-negative seed
        workers_count: Threads (defaults to NILGEO_WORKERS)

    Returns:
        FlagScan with extremes and sign counts
    """
    check_scan_arguments(samples, seed)
    if rm.algebra.dim < 2:
        raise ScanError("Flag curvature needs dimension >= 2")

    def evaluate(indices: range):
        chunk = []
        for i in indices:
            flag = random_flag(rm.algebra, sample_generator(seed, i))
            k = flag_curvature(rm, flag)
            k_riemann = sectional_curvature(rm.algebra, rm.ct, flag.y, flag.u)
            chunk.append((k, k_riemann))
        return chunk

    values = [pair for chunk in workers.run_chunked(evaluate, samples, workers_count) for pair in chunk]
    signs = [_sign(k) for k, _ in values]
    mismatches = sum(1 for (k, k_r), s in zip(values, signs) if s != _sign(k_r))
    flags = [k for k, _ in values]
    scan = FlagScan(
        min_K=min(flags),
        max_K=max(flags),
        negative=signs.count(-1),
        near_zero=signs.count(0),
        positive=signs.count(1),
        sign_mismatches=mismatches,
        evaluated=len(values),
    )
    logger.info(f"Flag scan over {scan.evaluated} flags: {scan.negative} negative, "
                f"{scan.near_zero} near zero, {scan.positive} positive, {scan.sign_mismatches} sign mismatches")
    return scan
