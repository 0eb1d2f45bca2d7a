class ParameterError(ValueError):
    """Invalid network, scheme or demand parameters."""


class EnumerationCapError(RuntimeError):
    """An exhaustive enumeration would exceed the configured cap."""


class CodecError(ValueError):
    """Bad input to the MDS encoder or decoder."""
