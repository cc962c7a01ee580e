"""Exception types for quadlog."""


class QuadlogError(Exception):
    """Base class for all quadlog errors."""


class SingularMatrix(QuadlogError):
    """A pivot fell below the drop tolerance during LU factorization."""


class NoConvergence(QuadlogError):
    """An iteration exceeded its cap without meeting its tolerance.

    ``oscillating`` is True when the iterates suggest a dominant complex
    pair (relevant for power iteration on nonsymmetric matrices).
    """

    def __init__(self, message, oscillating=False):
        super().__init__(message)
        self.oscillating = oscillating


class NotSymmetric(QuadlogError):
    """A symmetric-only operation received a nonsymmetric matrix."""


class NotSPD(QuadlogError):
    """A positive-definite-only operation received an indefinite matrix."""


class DegenerateSpectrum(QuadlogError):
    """The spectral-radius lower bound on ||log A|| would be zero."""


class AIsIdentity(QuadlogError):
    """Interval selection requires A != I."""


class PreconditionViolated(QuadlogError):
    """A tail-bound argument lies outside its admissible range."""


class NoRoot(QuadlogError):
    """The scalar root-finder bracket failed (inconsistent parameters)."""


class Overflow(QuadlogError):
    """An intermediate quantity exceeded the representable range."""


class ParseError(QuadlogError):
    """Malformed input text. ``line`` is the 1-based offending line, if known."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DimensionMismatch(QuadlogError):
    """Declared and actual dimensions disagree, or a matrix is not square."""
