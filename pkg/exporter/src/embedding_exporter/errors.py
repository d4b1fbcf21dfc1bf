"""Exception hierarchy. Every CLI failure maps to exit status 1."""


class ExporterError(Exception):
    """Base class for all errors raised by this package."""


class ModelLoadError(ExporterError):
    """Model identifier unknown, checkpoint unreadable, or weights unusable."""


class IncompatibleVectorization(ExporterError):
    """Requested vectorization does not apply to the model family."""


class InsufficientSamples(ExporterError):
    """A requested class holds fewer samples than samples_per_class."""


class DatasetError(ExporterError):
    """Dataset directory missing, unreadable, or malformed."""
