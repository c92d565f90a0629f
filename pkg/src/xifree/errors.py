"""Shared exception types."""


class XiFreeError(Exception):
    """Base class for package specific failures."""


class ConsistencyError(XiFreeError):
    """Two independent computation routes disagreed."""


class PinError(ConsistencyError):
    """A computed series failed an independent oracle spot check."""


class ResourceLimitError(XiFreeError):
    """Requested computation exceeds the supported size limits."""


class XRingError(XiFreeError):
    """Invalid operation in the Laurent ring."""
