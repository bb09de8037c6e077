"""Shared exception types for the cyldyn engine."""


class CyldynError(Exception):
    """Base class for all engine errors."""

    #: short machine-readable tag used by the CLI / service error envelopes
    tag = "error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context

    def to_json(self):
        return {"error": self.tag, "message": str(self), **self.context}


class InvalidDegree(CyldynError):
    """Root finding was asked for a polynomial of degree < 1."""

    tag = "invalid-degree"


class InvalidSpec(CyldynError):
    """A map specification violates its structural constraints."""

    tag = "invalid-spec"


class ParamSingularity(CyldynError):
    """The family parameter sits on an excluded singular value."""

    tag = "param-singularity"


class ExpOverflow(CyldynError):
    """A cylinder coordinate is too far up/down the cylinder to exponentiate."""

    tag = "exp-overflow"


class AtEssentialSingularity(CyldynError):
    """Evaluation was requested at (or too near) an essential singularity."""

    tag = "at-essential-singularity"


class NotPeriodic(CyldynError):
    """A point claimed periodic fails the periodicity residual."""

    tag = "not-periodic"


class NonIntegerSigma(CyldynError):
    """The translation offset of a lifted orbit is not an integer."""

    tag = "non-integer-sigma"


class ZeroSigma(CyldynError):
    """sigma = 0 was passed where a nonzero translation type is required."""

    tag = "zero-sigma"


class NotSinglePole(CyldynError):
    """Normalization requires exactly one simple pole in the punctured plane."""

    tag = "not-single-pole"


class NotCirclePreserving(CyldynError):
    """Rotation numbers only exist for maps preserving the unit circle."""

    tag = "not-circle-preserving"


class NonMonotoneBracket(CyldynError):
    """The tuning bracket does not straddle the target rotation number."""

    tag = "non-monotone-bracket"


class DegenerateRay(CyldynError):
    """The requested internal ray degenerates (no finite landing point)."""

    tag = "degenerate-ray"


class NoConvergence(CyldynError):
    """An iterative search exhausted its budget without converging."""

    tag = "no-convergence"
