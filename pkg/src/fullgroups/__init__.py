"""Exact computation in topological full groups over Cantor sequence spaces."""

from .cylinder import ClopenSet, SequenceSpace, refine
from .errors import (
    FullGroupsError,
    InvalidWord,
    SpaceMismatch,
    StateBoundExceeded,
    ValidationError,
)

__all__ = [
    "ClopenSet",
    "SequenceSpace",
    "refine",
    "FullGroupsError",
    "InvalidWord",
    "SpaceMismatch",
    "StateBoundExceeded",
    "ValidationError",
]
