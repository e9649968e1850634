"""Video-to-landmark extractor for the swimmetrics interchange format."""

__version__ = "0.1.0"

from .backends import BlobBackend, MediaPipeBackend, make_backend
from .extract import ExtractionConfig, ExtractionError, ExtractionSummary, extract

__all__ = [
    "__version__",
    "BlobBackend",
    "ExtractionConfig",
    "ExtractionError",
    "ExtractionSummary",
    "MediaPipeBackend",
    "extract",
    "make_backend",
]
