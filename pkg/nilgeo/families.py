"""
The three 5-dimensional two-step nilpotent families and their closed forms

Each family is given in an orthonormal basis {e_1, ..., e_5}:

    center1:  [e1, e2] = lambda e5,  [e3, e4] = mu e5     center span{e5}
    center2:  [e1, e2] = lambda e4,  [e1, e3] = mu e5     center span{e4, e5}
    center3:  [e1, e2] = lambda e3                        center span{e3, e4, e5}

Alongside the constructors this module carries the published connection and
curvature tables, the closed-form sectional, scalar and flag curvatures, and
verify_paper(), which checks all of them against the generic pipeline.
"""

import logging
import math
from enum import IntEnum
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from nilgeo import config, workers
from nilgeo.algebra_core import (CheckResult, MetricLieAlgebra, ValidationReport, basis_vector, center,
                                 is_two_step_nilpotent, validate)
from nilgeo.berwald import make_berwald_randers, parallel_field_basis
from nilgeo.curvature import curvature_scan, riemann, riemann_tensor, sample_generator, scalar_curvature, sectional_curvature
from nilgeo.errors import BadFamily, DimensionMismatch, InadmissibleDeformation, NonPositiveParameter, NotOrthonormal
from nilgeo.levi_civita import christoffel, metric_residual, torsion_residual
from nilgeo.linalg import subspace_residual
from nilgeo.randers import (Flag, flag_curvature, flag_scan, f_value, fundamental_tensor, fundamental_tensor_fd)

logger = logging.getLogger(__name__)

DIMENSION = 5

PARAMETER_GRID = ((1.0, 1.0), (2.0, 1.0), (3.0, 2.0), (0.5, 0.25), (math.pi, 1.0))


class FamilyId(IntEnum):
    CENTER1 = 1
    CENTER2 = 2
    CENTER3 = 3

    @classmethod
    def parse(cls, value) -> 'FamilyId':
        """Accept a FamilyId or its center dimension; BadFamily otherwise."""
        try:
            return cls(int(value))
        except (TypeError, ValueError):
            raise BadFamily(f"Unknown family {value!r}; center dimension must be 1, 2 or 3")

    @property
    def label(self) -> str:
        return f"center{int(self)}"


def _check_parameter(name: str, value: float) -> float:
    value = float(value)
    if not (np.isfinite(value) and value > 0.0):
        raise NonPositiveParameter(f"{name} must be a positive real, got {value!r}")
    return value


def family_center1(lam: float, mu: float) -> MetricLieAlgebra:
    """[e1, e2] = lambda e5, [e3, e4] = mu e5."""
    lam = _check_parameter('lambda', lam)
    mu = _check_parameter('mu', mu)
    return MetricLieAlgebra.from_brackets(DIMENSION, {(1, 2, 5): lam, (3, 4, 5): mu})


def family_center2(lam: float, mu: float) -> MetricLieAlgebra:
    """[e1, e2] = lambda e4, [e1, e3] = mu e5."""
    lam = _check_parameter('lambda', lam)
    mu = _check_parameter('mu', mu)
    return MetricLieAlgebra.from_brackets(DIMENSION, {(1, 2, 4): lam, (1, 3, 5): mu})


def family_center3(lam: float) -> MetricLieAlgebra:
    """[e1, e2] = lambda e3."""
    lam = _check_parameter('lambda', lam)
    return MetricLieAlgebra.from_brackets(DIMENSION, {(1, 2, 3): lam})


Builder = Callable[[float, float], MetricLieAlgebra]

BUILDERS: Dict[FamilyId, Builder] = {
    FamilyId.CENTER1: family_center1,
    FamilyId.CENTER2: family_center2,
    FamilyId.CENTER3: lambda lam, mu: family_center3(lam),
}


def family(family_id, lam: float, mu: Optional[float] = None) -> MetricLieAlgebra:
    """
    Build a family member by center dimension.

    Args:
        family_id: FamilyId or 1, 2, 3
        lam: lambda > 0
        mu: mu > 0 (ignored for the 3-dimensional center)

    Returns:
        MetricLieAlgebra with identity gram
    """
    fid = FamilyId.parse(family_id)
    if fid == FamilyId.CENTER3:
        return family_center3(lam)
    if mu is None:
        raise NonPositiveParameter(f"mu is required for family {fid.label}")
    return BUILDERS[fid](lam, mu)


# Published connection tables: (i, j) -> (k, coefficient) meaning
# nabla_{e_i} e_j = coefficient * e_k; entries not listed are zero.
_CONNECTION = {
    FamilyId.CENTER1: {
        (1, 2): (5, lambda l, m: l / 2), (1, 5): (2, lambda l, m: -l / 2),
        (2, 1): (5, lambda l, m: -l / 2), (2, 5): (1, lambda l, m: l / 2),
        (3, 4): (5, lambda l, m: m / 2), (3, 5): (4, lambda l, m: -m / 2),
        (4, 3): (5, lambda l, m: -m / 2), (4, 5): (3, lambda l, m: m / 2),
        (5, 1): (2, lambda l, m: -l / 2), (5, 2): (1, lambda l, m: l / 2),
        (5, 3): (4, lambda l, m: -m / 2), (5, 4): (3, lambda l, m: m / 2),
    },
    FamilyId.CENTER2: {
        (1, 2): (4, lambda l, m: l / 2), (1, 3): (5, lambda l, m: m / 2),
        (1, 4): (2, lambda l, m: -l / 2), (1, 5): (3, lambda l, m: -m / 2),
        (2, 1): (4, lambda l, m: -l / 2), (2, 4): (1, lambda l, m: l / 2),
        (3, 1): (5, lambda l, m: -m / 2), (3, 5): (1, lambda l, m: m / 2),
        (4, 1): (2, lambda l, m: -l / 2), (4, 2): (1, lambda l, m: l / 2),
        (5, 1): (3, lambda l, m: -m / 2), (5, 3): (1, lambda l, m: m / 2),
    },
    FamilyId.CENTER3: {
        (1, 2): (3, lambda l, m: l / 2), (1, 3): (2, lambda l, m: -l / 2),
        (2, 1): (3, lambda l, m: -l / 2), (2, 3): (1, lambda l, m: l / 2),
        (3, 1): (2, lambda l, m: -l / 2), (3, 2): (1, lambda l, m: l / 2),
    },
}

# Published curvature tables for i < j: (i, j, k) -> (l, coefficient) meaning
# R(e_i, e_j) e_k = coefficient * e_l. Rows with i > j follow by antisymmetry.
_CURVATURE = {
    FamilyId.CENTER1: {
        (1, 2, 1): (2, lambda l, m: 3 * l * l / 4), (1, 2, 2): (1, lambda l, m: -3 * l * l / 4),
        (1, 2, 3): (4, lambda l, m: l * m / 2), (1, 2, 4): (3, lambda l, m: -l * m / 2),
        (1, 3, 2): (4, lambda l, m: l * m / 4), (1, 3, 4): (2, lambda l, m: -l * m / 4),
        (1, 4, 2): (3, lambda l, m: -l * m / 4), (1, 4, 3): (2, lambda l, m: l * m / 4),
        (1, 5, 1): (5, lambda l, m: -l * l / 4), (1, 5, 5): (1, lambda l, m: l * l / 4),
        (2, 3, 1): (4, lambda l, m: -l * m / 4), (2, 3, 4): (1, lambda l, m: l * m / 4),
        (2, 4, 1): (3, lambda l, m: l * m / 4), (2, 4, 3): (1, lambda l, m: -l * m / 4),
        (2, 5, 2): (5, lambda l, m: -l * l / 4), (2, 5, 5): (2, lambda l, m: l * l / 4),
        (3, 4, 1): (2, lambda l, m: l * m / 2), (3, 4, 2): (1, lambda l, m: -l * m / 2),
        (3, 4, 3): (4, lambda l, m: 3 * m * m / 4), (3, 4, 4): (3, lambda l, m: -3 * m * m / 4),
        (3, 5, 3): (5, lambda l, m: -m * m / 4), (3, 5, 5): (3, lambda l, m: m * m / 4),
        (4, 5, 4): (5, lambda l, m: -m * m / 4), (4, 5, 5): (4, lambda l, m: m * m / 4),
    },
    FamilyId.CENTER2: {
        (1, 2, 1): (2, lambda l, m: 3 * l * l / 4), (1, 2, 2): (1, lambda l, m: -3 * l * l / 4),
        (1, 3, 1): (3, lambda l, m: 3 * m * m / 4), (1, 3, 3): (1, lambda l, m: -3 * m * m / 4),
        (1, 4, 1): (4, lambda l, m: -l * l / 4), (1, 4, 4): (1, lambda l, m: l * l / 4),
        (1, 5, 1): (5, lambda l, m: -m * m / 4), (1, 5, 5): (1, lambda l, m: m * m / 4),
        (2, 3, 4): (5, lambda l, m: l * m / 4), (2, 3, 5): (4, lambda l, m: -l * m / 4),
        (2, 4, 2): (4, lambda l, m: -l * l / 4), (2, 4, 4): (2, lambda l, m: l * l / 4),
        (2, 5, 3): (4, lambda l, m: -l * m / 4), (2, 5, 4): (3, lambda l, m: l * m / 4),
        (3, 4, 2): (5, lambda l, m: -l * m / 4), (3, 4, 5): (2, lambda l, m: l * m / 4),
        (3, 5, 3): (5, lambda l, m: -m * m / 4), (3, 5, 5): (3, lambda l, m: m * m / 4),
        (4, 5, 2): (3, lambda l, m: l * m / 4), (4, 5, 3): (2, lambda l, m: -l * m / 4),
    },
    FamilyId.CENTER3: {
        (1, 2, 1): (2, lambda l, m: 3 * l * l / 4), (1, 2, 2): (1, lambda l, m: -3 * l * l / 4),
        (1, 3, 1): (3, lambda l, m: -l * l / 4), (1, 3, 3): (1, lambda l, m: l * l / 4),
        (2, 3, 2): (3, lambda l, m: -l * l / 4), (2, 3, 3): (2, lambda l, m: l * l / 4),
    },
}

EXPECTED_PARALLEL_DIMENSION = {FamilyId.CENTER1: 0, FamilyId.CENTER2: 0, FamilyId.CENTER3: 2}


def connection_table(family_id, lam: float, mu: float = 0.0) -> np.ndarray:
    """Published Christoffel coefficients as an n x n x n array, gamma[i, j, k]."""
    fid = FamilyId.parse(family_id)
    gamma = np.zeros((DIMENSION,) * 3)
    for (i, j), (k, coefficient) in _CONNECTION[fid].items():
        gamma[i - 1, j - 1, k - 1] = coefficient(lam, mu)
    return gamma


def curvature_table(family_id, lam: float, mu: float = 0.0) -> np.ndarray:
    """Published curvature tensor as an n^4 array, r[i, j, k, l]."""
    fid = FamilyId.parse(family_id)
    r = np.zeros((DIMENSION,) * 4)
    for (i, j, k), (l, coefficient) in _CURVATURE[fid].items():
        value = coefficient(lam, mu)
        r[i - 1, j - 1, k - 1, l - 1] = value
        r[j - 1, i - 1, k - 1, l - 1] = -value
    return r


def scalar_closed_form(family_id, lam: float, mu: float = 0.0) -> float:
    fid = FamilyId.parse(family_id)
    if fid == FamilyId.CENTER3:
        return -lam * lam / 2
    return -(lam * lam + mu * mu) / 2


def _check_orthonormal(a: np.ndarray, b: np.ndarray) -> None:
    residual = max(abs(a @ a - 1.0), abs(b @ b - 1.0), abs(a @ b))
    if residual > config.ORTHONORMAL_TOL:
        raise NotOrthonormal(f"Pair is not orthonormal (residual {residual:.3e})")


def _pair(a: Sequence[float], b: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (DIMENSION,) or b.shape != (DIMENSION,):
        raise DimensionMismatch(f"Closed forms take vectors of length {DIMENSION}, got {a.shape} and {b.shape}")
    _check_orthonormal(a, b)
    return a, b


def sectional_closed_form(family_id, lam: float, mu: float, a: Sequence[float], b: Sequence[float]) -> float:
    """
    Published closed-form sectional curvature K^R(A, B), transcribed as printed.

    A = a e1 + b e2 + c e3 + d e4 + f e5 and likewise B with tilded
    components; {A, B} must be orthonormal. mu is ignored for center3.

    Raises:
        DimensionMismatch: If a or b is not a 5-vector
        NotOrthonormal: If the pair is not orthonormal to ORTHONORMAL_TOL
        BadFamily: If the family id is unknown
    """
    fid = FamilyId.parse(family_id)
    va, vb = _pair(a, b)
    a1, b1, c1, d1, f1 = va
    a2, b2, c2, d2, f2 = vb
    if fid == FamilyId.CENTER1:
        return (-0.75 * (lam ** 2 * (a1 * b2 - b1 * a2) ** 2 + mu ** 2 * (c1 * d2 - d1 * c2) ** 2)
                + lam ** 2 / 4 * ((f1 * a2 - a1 * f2) ** 2 + (f1 * b2 - b1 * f2) ** 2)
                + mu ** 2 / 4 * ((f1 * c2 - c1 * f2) ** 2 + (f1 * d2 - d1 * f2) ** 2)
                + 1.5 * lam * mu * (a1 * b2 - b1 * a2) * (d1 * c2 - c1 * d2))
    if fid == FamilyId.CENTER2:
        return (-0.75 * (lam ** 2 * (b1 * a2 - a1 * b2) ** 2 + mu ** 2 * (c1 * a2 - a1 * c2) ** 2)
                + lam ** 2 / 4 * ((d1 * a2 - a1 * d2) ** 2 + (d1 * b2 - b1 * d2) ** 2)
                + mu ** 2 / 4 * ((f1 * a2 - a1 * f2) ** 2 + (f1 * c2 - c1 * f2) ** 2)
                + lam * mu / 2 * ((f1 * b2 - b1 * f2) * (d1 * c2 - c1 * d2)
                                  + (c1 * b2 - b1 * c2) * (d1 * f2 - f1 * d2)))
    return lam ** 2 / 4 * ((c1 * a2 - a1 * c2) ** 2 + (c1 * b2 - b1 * c2) ** 2 - 3 * (b1 * a2 - a1 * b2) ** 2)


def _check_deformation(q1: float, q2: float) -> None:
    norm_sq = q1 * q1 + q2 * q2
    if not 0.0 < norm_sq < 1.0:
        raise InadmissibleDeformation(f"Need 0 < q1^2 + q2^2 < 1, got {norm_sq:.12g}")


def flag_closed_form_center3(lam: float, q1: float, q2: float, a: Sequence[float], b: Sequence[float]) -> float:
    """
    Closed-form flag curvature K(P, A) = K^R(A, B) / (1 + q1 d + q2 f)^2.

    The Randers metric is built from Q = q1 e4 + q2 e5 on center3(lambda);
    {A, B} orthonormal, A the pole.
    """
    _check_deformation(q1, q2)
    va, vb = _pair(a, b)
    denominator = (1.0 + q1 * va[3] + q2 * va[4]) ** 2
    return sectional_closed_form(FamilyId.CENTER3, lam, 0.0, va, vb) / denominator


def random_orthonormal_pair(rng: np.random.Generator, dim: int = DIMENSION) -> Tuple[np.ndarray, np.ndarray]:
    """Orthonormal pair from the QR factorization of a Gaussian n x 2 matrix."""
    q, _ = np.linalg.qr(rng.standard_normal((dim, 2)))
    return q[:, 0].copy(), q[:, 1].copy()


def random_deformation(rng: np.random.Generator) -> Tuple[float, float]:
    """Admissible (q1, q2) with norm in [0.05, 0.95]."""
    radius = rng.uniform(0.05, 0.95)
    angle = rng.uniform(0.0, 2 * math.pi)
    return radius * math.cos(angle), radius * math.sin(angle)


def _parameter_scale(lam: float, mu: float) -> float:
    return max(1.0, lam * lam, mu * mu, lam * mu)


Check = Callable[[], CheckResult]


class _Suite:
    """Builds the named checks of verify_paper for one set of options."""

    def __init__(self, tolerance: Optional[float], builders: Mapping[FamilyId, Builder], pairs: int,
                 scan_samples: int, seed: int, workers_count: Optional[int]):
        self.tolerance = tolerance
        self.builders = builders
        self.pairs = pairs
        self.scan_samples = scan_samples
        self.seed = seed
        self.workers_count = workers_count

    def tol(self, default: float) -> float:
        return default if self.tolerance is None else self.tolerance

    def rng(self, stream: int) -> np.random.Generator:
        return sample_generator(self.seed, stream)

    def build(self, fid: FamilyId, lam: float, mu: float):
        alg = self.builders[fid](lam, mu)
        return alg, christoffel(alg)

    def checks(self) -> List[Tuple[str, Check]]:
        found = []
        for fid in FamilyId:
            prefix = fid.label
            found += [
                (f"{prefix}.axioms", lambda fid=fid: self.axioms(fid)),
                (f"{prefix}.connection", lambda fid=fid: self.connection(fid)),
                (f"{prefix}.connection_identities", lambda fid=fid: self.connection_identities(fid)),
                (f"{prefix}.curvature", lambda fid=fid: self.curvature(fid)),
                (f"{prefix}.scalar", lambda fid=fid: self.scalar(fid)),
                (f"{prefix}.parallel_dimension", lambda fid=fid: self.parallel_dimension(fid)),
                (f"{prefix}.sectional_closed_form", lambda fid=fid: self.sectional_closed_form(fid)),
                (f"{prefix}.sectional_signs", lambda fid=fid: self.sectional_signs(fid)),
            ]
        found += [
            ('center3.parallel_span', self.parallel_span),
            ('center3.flag_closed_form', self.flag_closed_form),
            ('center3.fundamental_tensor_identities', self.fundamental_tensor_identities),
            ('center3.fundamental_tensor_oracle', self.fundamental_tensor_oracle),
            ('center3.fundamental_tensor_positive', self.fundamental_tensor_positive),
            ('center3.flag_signs', self.flag_signs),
        ]
        return found

    def axioms(self, fid: FamilyId) -> CheckResult:
        worst = 0.0
        passed = True
        for lam, mu in PARAMETER_GRID:
            alg = self.builders[fid](lam, mu)
            report = validate(alg)
            passed = passed and report.overall and is_two_step_nilpotent(alg) and len(center(alg)) == int(fid)
            worst = max([worst] + [c.residual for c in report.checks if c.name != 'gram_positive_definite'])
        return CheckResult(f"{fid.label}.axioms", passed, worst)

    def connection(self, fid: FamilyId) -> CheckResult:
        worst = 0.0
        for lam, mu in PARAMETER_GRID:
            _, ct = self.build(fid, lam, mu)
            residual = np.max(np.abs(ct.gamma - connection_table(fid, lam, mu))) / _parameter_scale(lam, mu)
            worst = max(worst, float(residual))
        return CheckResult(f"{fid.label}.connection", worst <= self.tol(1e-12), worst)

    def connection_identities(self, fid: FamilyId) -> CheckResult:
        worst = 0.0
        for lam, mu in PARAMETER_GRID:
            alg, ct = self.build(fid, lam, mu)
            worst = max(worst, torsion_residual(alg, ct), metric_residual(alg, ct))
        return CheckResult(f"{fid.label}.connection_identities", worst <= self.tol(1e-10), worst)

    def curvature(self, fid: FamilyId) -> CheckResult:
        worst = 0.0
        for lam, mu in PARAMETER_GRID:
            alg, ct = self.build(fid, lam, mu)
            r = riemann_tensor(alg, ct).r
            residual = np.max(np.abs(r - curvature_table(fid, lam, mu))) / _parameter_scale(lam, mu)
            worst = max(worst, float(residual))
        return CheckResult(f"{fid.label}.curvature", worst <= self.tol(1e-12), worst)

    def scalar(self, fid: FamilyId) -> CheckResult:
        worst = 0.0
        for lam, mu in PARAMETER_GRID:
            alg, ct = self.build(fid, lam, mu)
            worst = max(worst, abs(scalar_curvature(alg, ct) - scalar_closed_form(fid, lam, mu)))
        return CheckResult(f"{fid.label}.scalar", worst <= self.tol(1e-10), worst)

    def parallel_dimension(self, fid: FamilyId) -> CheckResult:
        worst = 0
        for lam, mu in PARAMETER_GRID:
            alg, ct = self.build(fid, lam, mu)
            worst = max(worst, abs(parallel_field_basis(alg, ct).dimension - EXPECTED_PARALLEL_DIMENSION[fid]))
        return CheckResult(f"{fid.label}.parallel_dimension", worst == 0, float(worst))

    def parallel_span(self) -> CheckResult:
        expected = np.column_stack([basis_vector(DIMENSION, 4), basis_vector(DIMENSION, 5)])
        worst = 0.0
        for lam, mu in PARAMETER_GRID:
            alg, ct = self.build(FamilyId.CENTER3, lam, mu)
            basis = parallel_field_basis(alg, ct)
            found = basis.as_matrix(DIMENSION)
            worst = max(worst,
                        subspace_residual(basis.vectors, expected, alg.gram),
                        subspace_residual(expected.T, found, alg.gram))
        return CheckResult('center3.parallel_span', worst <= self.tol(1e-10), worst)

    def sectional_closed_form(self, fid: FamilyId) -> CheckResult:
        rng = self.rng(100 + int(fid))
        built = [(lam, mu) + self.build(fid, lam, mu) for lam, mu in PARAMETER_GRID]
        worst = 0.0
        for idx in range(self.pairs):
            lam, mu, alg, ct = built[idx % len(built)]
            a, b = random_orthonormal_pair(rng)
            generic = sectional_curvature(alg, ct, a, b)
            worst = max(worst, abs(generic - sectional_closed_form(fid, lam, mu, a, b)))
        return CheckResult(f"{fid.label}.sectional_closed_form", worst <= self.tol(1e-9), worst)

    def sectional_signs(self, fid: FamilyId) -> CheckResult:
        alg, ct = self.build(fid, 1.0, 1.0)
        scan = curvature_scan(alg, ct, self.scan_samples, self.seed, self.workers_count)
        return CheckResult(f"{fid.label}.sectional_signs", scan.min_K < 0.0 < scan.max_K,
                           min(-scan.min_K, scan.max_K))

    def _randers(self, lam: float, q1: float, q2: float):
        alg, ct = self.build(FamilyId.CENTER3, lam, lam)
        return make_berwald_randers(alg, ct, [0.0, 0.0, 0.0, q1, q2])

    def flag_closed_form(self) -> CheckResult:
        rng = self.rng(200)
        worst = 0.0
        mismatches = 0
        deformations = [random_deformation(rng) for _ in range(10)]
        for q_idx, (q1, q2) in enumerate(deformations):
            lam = PARAMETER_GRID[q_idx % len(PARAMETER_GRID)][0]
            rm = self._randers(lam, q1, q2)
            for _ in range(self.pairs):
                a, b = random_orthonormal_pair(rng)
                generic = flag_curvature(rm, Flag(a, b))
                closed = flag_closed_form_center3(lam, q1, q2, a, b)
                worst = max(worst, abs(generic - closed) / max(1.0, abs(closed)))
                if np.sign(generic) != np.sign(sectional_curvature(rm.algebra, rm.ct, a, b)):
                    mismatches += 1
        passed = worst <= self.tol(1e-8) and mismatches == 0
        return CheckResult('center3.flag_closed_form', passed, worst)

    def fundamental_tensor_identities(self) -> CheckResult:
        rng = self.rng(300)
        worst = 0.0
        for idx in range(self.pairs):
            lam = PARAMETER_GRID[idx % len(PARAMETER_GRID)][0]
            q1, q2 = random_deformation(rng)
            rm = self._randers(lam, q1, q2)
            a, b = random_orthonormal_pair(rng)
            qa = q1 * a[3] + q2 * a[4]
            qb = q1 * b[3] + q2 * b[4]
            k_r = sectional_closed_form(FamilyId.CENTER3, lam, 0.0, a, b)
            w = riemann(rm.algebra, rm.ct, b, a, a)
            residuals = (
                fundamental_tensor(rm, a, w, b) - k_r * (1 + qa),
                fundamental_tensor(rm, a, a, a) - (1 + qa) ** 2,
                fundamental_tensor(rm, a, b, b) - (1 + qb ** 2 + qa),
                fundamental_tensor(rm, a, a, b) - qb * (1 + qa),
            )
            worst = max(worst, max(abs(r) for r in residuals))
        return CheckResult('center3.fundamental_tensor_identities', worst <= self.tol(1e-10), worst)

    def fundamental_tensor_oracle(self) -> CheckResult:
        rng = self.rng(400)
        worst = 0.0
        for idx in range(self.pairs):
            lam = PARAMETER_GRID[idx % len(PARAMETER_GRID)][0]
            rm = self._randers(lam, *random_deformation(rng))
            y = rng.uniform(-1.0, 1.0, DIMENSION)
            while np.linalg.norm(y) < 0.5:
                y = rng.uniform(-1.0, 1.0, DIMENSION)
            u = rng.uniform(-1.0, 1.0, DIMENSION)
            v = rng.uniform(-1.0, 1.0, DIMENSION)
            u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
            worst = max(worst, abs(fundamental_tensor(rm, y, u, v) - fundamental_tensor_fd(rm, y, u, v)))
        return CheckResult('center3.fundamental_tensor_oracle', worst <= self.tol(1e-6), worst)

    def fundamental_tensor_positive(self) -> CheckResult:
        rng = self.rng(500)
        worst = 0.0
        passed = True
        for idx in range(self.pairs):
            lam = PARAMETER_GRID[idx % len(PARAMETER_GRID)][0]
            rm = self._randers(lam, *random_deformation(rng))
            y = rng.uniform(-1.0, 1.0, DIMENSION)
            u = rng.uniform(-1.0, 1.0, DIMENSION)
            if not np.any(y) or not np.any(u):
                continue
            scale = rng.uniform(0.1, 10.0)
            passed = passed and fundamental_tensor(rm, y, u, u) > 0.0
            euler = abs(fundamental_tensor(rm, y, y, y) - f_value(rm, y) ** 2) / f_value(rm, y) ** 2
            base = fundamental_tensor(rm, y, u, u)
            homogeneity = abs(fundamental_tensor(rm, scale * y, u, u) - base) / abs(base)
            worst = max(worst, euler, homogeneity)
        return CheckResult('center3.fundamental_tensor_positive', passed and worst <= self.tol(1e-9), worst)

    def flag_signs(self) -> CheckResult:
        rm = self._randers(1.0, 0.3, 0.4)
        scan = flag_scan(rm, self.scan_samples, self.seed, self.workers_count)
        passed = (scan.negative > 0 and scan.near_zero > 0 and scan.positive > 0
                  and scan.sign_mismatches == 0)
        return CheckResult('center3.flag_signs', passed, float(scan.sign_mismatches))


def verify_paper(tolerance: Optional[float] = None, builders: Optional[Mapping] = None, pairs: int = 1000,
                 scan_samples: int = 10000, seed: int = 0, workers_count: Optional[int] = None) -> ValidationReport:
    """
    Run every published table, formula and sign claim against the generic engine.

    Failures are reported, never raised: a check that raises is recorded as
    failed with an infinite residual.

    Args:
        tolerance: Replaces every check's default tolerance when given
        builders: Overrides for the family constructors, keyed by FamilyId
            (each called as builder(lam, mu))
        pairs: Random orthonormal pairs per closed-form cross-check
        scan_samples: Samples for the sign scans
        seed: Seed for all randomized checks
        workers_count: Threads (defaults to NILGEO_WORKERS)

    Returns:
        ValidationReport with checks sorted by name
    """
    merged = dict(BUILDERS)
    for key, builder in (builders or {}).items():
        merged[FamilyId.parse(key)] = builder
    suite = _Suite(tolerance, merged, pairs, scan_samples, seed, workers_count)

    def run_check(item: Tuple[str, Check]) -> CheckResult:
        name, check = item
        try:
            return check()
        except Exception as e:
            logger.warning(f"Check {name} raised {type(e).__name__}: {e}")
            return CheckResult(name, False, math.inf)

    items = suite.checks()
    count = workers_count if workers_count is not None else config.get_worker_count()
    if count <= 1:
        results = [run_check(item) for item in items]
    else:
        with workers.managed_pool(count) as pool:
            results = pool.map_ordered(run_check, items)

    report = ValidationReport(tuple(sorted(results, key=lambda c: c.name)))
    logger.info(f"Verification: {len(report.checks) - len(report.failed())}/{len(report.checks)} checks passed")
    for failed in report.failed():
        logger.warning(f"Check {failed.name} failed (residual {failed.residual:.3e})")
    return report
