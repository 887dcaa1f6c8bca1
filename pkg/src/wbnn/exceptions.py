"""Exception types raised by wbnn.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can catch that.
"""


class ParameterError(ValueError):
    """A scalar parameter is outside its admissible range."""


class ShapeError(ValueError):
    """Array length or grid size is incompatible with the operation."""


class BoundaryError(ValueError):
    """Signal support reaches into the zero-padding margin of the grid."""


class StructureError(ValueError):
    """A coefficient tree is missing levels or has wrongly sized levels."""


class DomainError(ValueError):
    """Evaluation point lies outside the function's domain."""


class EmbeddingError(ParameterError):
    """Requested Besov embedding goes in the wrong direction."""


class RegionError(ParameterError):
    """Besov indices fall outside the Hilbert-target admissibility region."""


class SamplerError(RuntimeError):
    """A density could not be sampled (e.g. zero or non-finite mass)."""
