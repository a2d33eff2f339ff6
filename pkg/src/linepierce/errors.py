"""Exception hierarchy shared across the package."""


class LinePierceError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(LinePierceError):
    """A precondition on the arguments was violated."""


class DegenerateJoin(LinePierceError):
    """join() was called with two equal points."""


class DegenerateMeet(LinePierceError):
    """meet() was called with two equal lines."""


class GeneralPositionViolation(LinePierceError):
    """Three points of a set required to be in general position are collinear."""

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"collinear triple at indices {witness}")


class InfinitePointInP(LinePierceError):
    """Outside-segment mode requires every base point to be finite."""


class PiercingViolation(LinePierceError):
    """An operation required the piercing hypothesis, but verification failed."""

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or f"piercing hypothesis fails on pairs {report.violations}")


class StructureViolation(LinePierceError):
    """The configuration does not carry the relevance structure of a valid instance."""


class TheoremContradiction(LinePierceError):
    """A proven consequence of the hypothesis failed.

    On hypothesis-satisfying input this signals an implementation bug, never
    expected behaviour; tests trigger it only through mutated certificates.
    """


class ConvexPositionViolation(TheoremContradiction):
    """Base points are not in convex position although the hypothesis holds."""


class InconsistentLabeling(LinePierceError):
    """No residue labeling of the piercing points satisfies the collinearity rule."""


class DegenerateInstance(LinePierceError):
    """A three-by-three line grid has coincident lines or intersection points."""


class CollinearityMismatch(LinePierceError):
    """A stated collinear triple of a claim instance is not collinear."""


class NoCommonCubic(LinePierceError):
    """The point set does not lie on any cubic curve."""


class PropagationFailure(LinePierceError):
    """Cubic certification by claim propagation could not cover every point."""


class UnsupportedN(LinePierceError):
    """Requested size has no exact rational construction."""


class FixtureGateFailure(LinePierceError):
    """A fixture file failed its mandatory verification gate."""


class ExhaustedRetries(LinePierceError):
    """Random generation gave up after too many rejected samples."""


class SingularMatrix(LinePierceError):
    """A transform matrix must be invertible."""


class CollinearInput(LinePierceError):
    """The operation is undefined for an all-collinear point set."""
