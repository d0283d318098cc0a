"""Exception hierarchy.

Class names double as the stable error tokens printed by the CLI, so they
carry no ``Error`` suffix.
"""


class NbxplainError(Exception):
    """Base class for all package-specific errors."""


class EmptyDataset(NbxplainError):
    """Training requested on a dataset with no rows."""


class SingleClassDataset(NbxplainError):
    """Training requested on a dataset where only one class occurs."""


class NonPositiveAlpha(NbxplainError):
    """Smoothing constant must be strictly positive to keep logs finite."""


class DomainMismatch(NbxplainError):
    """Instance or fix-pattern does not conform to the feature domains."""


class DataFormatError(NbxplainError):
    """Malformed CSV dataset or JSON model file."""


class ScaleOverflow(NbxplainError):
    """Quantized weights exceed the supported counting-table size."""


class NotPredictedPositive(NbxplainError):
    """Explanation requested for an instance with non-positive slack."""


class SeedNotWeakPAXp(NbxplainError):
    """Trimming seed fails the precision threshold it is supposed to satisfy."""


class SpaceTooLarge(NbxplainError):
    """Brute-force enumeration would exceed the hard oracle cap."""


class AuditFailure(NbxplainError):
    """A produced explanation failed its from-scratch re-verification."""
