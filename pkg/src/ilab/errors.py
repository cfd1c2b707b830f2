"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or unsupported input (CLI exit code 2)."""


class SizeLimitError(InputError):
    """An enumeration would exceed a configured ceiling."""


class NoSeparationError(InputError):
    """No polynomial vanishes on X while staying nonzero on every avoided flat."""


class VerificationError(AssertionError):
    """An exact check failed (CLI exit code 1)."""
