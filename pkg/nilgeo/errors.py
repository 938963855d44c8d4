"""
Exception hierarchy for nilgeo.

Every error the library raises derives from NilgeoError so callers (the CLI
in particular) can catch one type at the boundary.
"""


class NilgeoError(Exception):
    """Base exception for all nilgeo errors"""
    pass


class DimensionMismatch(NilgeoError):
    """Vector or tensor shape does not match the algebra dimension"""
    pass


class GramNotSPD(NilgeoError):
    """Gram matrix is not symmetric positive definite"""
    pass


class DegeneratePlane(NilgeoError):
    """Plane vectors are (numerically) linearly dependent"""
    pass


class NotParallel(NilgeoError):
    """Deformation field is not parallel; no Berwald Randers metric exists for it"""
    pass


class NormTooLarge(NilgeoError):
    """Deformation field has <X, X> >= 1"""
    pass


class ZeroVector(NilgeoError):
    """Deformation field is zero; use the Riemannian metric instead"""
    pass


class ZeroPole(NilgeoError):
    """Fundamental tensor requested at the zero vector"""
    pass


class StepTooSmall(NilgeoError):
    """Finite-difference step below the roundoff floor"""
    pass


class DegenerateFlag(NilgeoError):
    """Flag pole and transverse edge do not span a 2-plane"""
    pass


class NonPositiveParameter(NilgeoError):
    """Family parameter must be strictly positive"""
    pass


class NotOrthonormal(NilgeoError):
    """Vector pair is not gram-orthonormal"""
    pass


class BadFamily(NilgeoError):
    """Unknown family identifier"""
    pass


class InadmissibleDeformation(NilgeoError):
    """Deformation parameters outside 0 < q1^2 + q2^2 < 1"""
    pass


class ScanError(NilgeoError):
    """Invalid scan arguments"""
    pass


class MalformedDocument(NilgeoError):
    """Algebra document is not valid JSON of the expected shape"""
    pass


class DuplicateBracket(NilgeoError):
    """Algebra document lists the same (i, j, k) entry twice"""
    pass


class IndexOutOfRange(NilgeoError):
    """Bracket index outside 1..n"""
    pass


class ValidationFailed(NilgeoError):
    """Algebra failed validation; the report is attached"""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
