"""Pairs of index-3 Hadamard subfactors: tower matrices, bi-unitaries and invariants."""

from .exceptions import NotDistinctError, NotProductFormError, VerificationError
from .hadamard import PhasePair, build_uv, fourier, is_distinct
from .invariants import InvariantReport, full_report

__all__ = [
    "InvariantReport",
    "NotDistinctError",
    "NotProductFormError",
    "PhasePair",
    "VerificationError",
    "build_uv",
    "fourier",
    "full_report",
    "is_distinct",
]

__version__ = "0.1.0"
