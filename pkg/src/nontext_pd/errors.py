"""Exception types shared across the detection engine."""


class NontextPdError(Exception):
    """Base class for all engine errors."""


class SchemaError(NontextPdError):
    """Document JSON does not match the normalized schema."""


class DanglingCitation(SchemaError):
    """A citation marker's ref_key has no matching reference entry."""


class DuplicateRefKey(SchemaError):
    """Two reference entries in one document share a ref_key."""


class OffsetOutOfRange(SchemaError):
    """A citation char_offset lies outside the document text."""


class MeasureError(NontextPdError):
    """Invalid input to a similarity/distance measure."""


class EmptyDenominator(MeasureError):
    """A measure's denominator would be zero for this input."""


class LengthMismatch(MeasureError):
    """Sequences must have equal length for this measure."""


class DimensionMismatch(MeasureError):
    """Vectors must have equal dimension."""


class ZeroVector(MeasureError):
    """Cosine similarity is undefined for zero vectors."""


class RelUndefined(NontextPdError):
    """Relative coupling strength undefined (empty bibliography)."""


class UnitUnavailable(NontextPdError):
    """Citation markers lack position indices for the requested text unit."""


class BothEmpty(NontextPdError):
    """Both feature descriptors are empty; distance undefined."""


class BelowIdentifierFloor(NontextPdError):
    """Document pair shares fewer identifiers than the configured floor."""


class DocumentTooShort(NontextPdError):
    """Document text too short to partition."""


class NoBarsFound(NontextPdError):
    """Bar extraction found no bar-shaped structures in the image."""


class BarCountMismatch(NontextPdError):
    """Ratio hashes with different component counts cannot be compared."""


class TooFewDistances(NontextPdError):
    """Suspiciousness scoring needs at least two finite distances."""


class DuplicateDocId(NontextPdError):
    """A document with this doc_id is already indexed."""


class UnknownMethod(NontextPdError):
    """Requested detection method id is not registered."""
