"""Exception types shared across the package.

The CLI maps these onto stable exit codes: configuration/input problems
exit with 2, runtime/numeric failures with 3.
"""


class ProsodyWeaveError(Exception):
    """Base class for all package errors."""


class ConfigurationError(ProsodyWeaveError):
    """Invalid or inconsistent configuration (bad field value, unknown key)."""


class InputError(ProsodyWeaveError):
    """Invalid runtime input (out-of-range id, shape mismatch, bad scale)."""


class PitchRangeError(InputError):
    """Pitch maps outside the renderable mel-bin range."""


class AlignmentError(ProsodyWeaveError):
    """Phoneme/frame alignment is degenerate (empty phoneme span)."""


class ExtractionError(ProsodyWeaveError):
    """Prosody extraction failed (no usable pitch peak in the signal)."""


class NumericError(ProsodyWeaveError):
    """Non-finite values in a numeric computation (diverged training, bad input)."""


class CompatibilityError(ProsodyWeaveError):
    """Checkpoint does not match the expected model configuration."""


class IntegrityError(ProsodyWeaveError):
    """Stored artifact is corrupt (bad magic, checksum mismatch)."""
