"""Exception types raised by the synthesis pipeline.

Plain ``ValueError`` is used for malformed inputs and violated preconditions
(wrong shapes, non-unitary matrices, invalid flag combinations). The types
below cover the failure modes that only show up at run time.
"""

from __future__ import annotations


class SynthesisError(RuntimeError):
    """A decomposition step failed to reproduce its input within tolerance.

    Carries the offending residual when one is available, so callers can log
    how far off the reconstruction was.
    """

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class FactorizationError(SynthesisError):
    """A matrix factorization backend did not converge or missed its contract."""


class LoweringError(ValueError):
    """The circuit contains gates the requested output format cannot express."""


class ResourceError(ValueError):
    """A requested size exceeds a configured cap."""
