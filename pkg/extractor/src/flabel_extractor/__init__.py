"""Offline label-embedding extraction feeding the transferability scorer.

Reads a text-label file (one label per line: category names, captions,
answers, serialized coordinates; the scorer never needs to know which), runs
one or more text encoders over it, and writes per-encoder NPY files whose
rows are l2-normalized embeddings, plus a sidecar JSON recording exactly
which encoders produced them.
"""

from .encoders import DEFAULT_ENCODERS, resolve_encoder
from .errors import EmptyLabelLine, EncoderLoadFailure, ExtractorError
from .extract import extract, read_labels

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ENCODERS",
    "EmptyLabelLine",
    "EncoderLoadFailure",
    "ExtractorError",
    "extract",
    "read_labels",
    "resolve_encoder",
]
