"""Exception hierarchy shared across the package.

Every error raised on purpose derives from :class:`FairfuseError`, carries a
stable ``code`` (the class name) and an optional ``detail`` mapping with
machine-readable context (offending row, column, id, ...). The HTTP layer maps
these onto 4xx responses without losing the field-level detail.
"""

from __future__ import annotations

from typing import Any


class FairfuseError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail = dict(detail)

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidDataset(FairfuseError):
    """Candidate set violates a structural invariant (size, ids, groups)."""


class CandidateSetMismatch(FairfuseError):
    """Two rankings (or a ranking and a dataset) cover different candidates."""


class NoMixedPairs(FairfuseError):
    """A group spans all of the candidate set or none of it."""


class SingleGroup(FairfuseError):
    """Parity metrics need at least two groups."""


class EmptyRankingSet(FairfuseError):
    """An aggregation was requested over zero base rankings."""


class TooLarge(FairfuseError):
    """Exhaustive enumeration refused: candidate count above the cap."""


class UnknownCandidate(FairfuseError):
    """A candidate id is not part of the ranking or dataset."""


class PositionOutOfRange(FairfuseError):
    """A rank position outside 1..n was requested."""


class ThresholdOutOfRange(FairfuseError):
    """Fairness threshold outside [0, 1]."""


class MissingColumn(FairfuseError):
    """A required CSV column is absent."""


class UnknownColumn(FairfuseError):
    """A named score column does not exist."""


class DuplicateId(FairfuseError):
    """The same candidate id appears twice."""


class EmptyFile(FairfuseError):
    """A CSV file contains no header or no data rows."""


class MalformedRow(FairfuseError):
    """A CSV row cannot be parsed against the declared header."""


class NonFiniteScore(FairfuseError):
    """A score cell is not a finite number."""


class InvalidRequest(FairfuseError):
    """An API request body is structurally invalid."""


class SessionNotFound(FairfuseError):
    """No session with the given id exists."""


class RankingNotFound(FairfuseError):
    """No ranking with the given id exists in the session."""


class BaseRankingImmutable(FairfuseError):
    """Base rankings are stakeholder evidence and cannot be changed."""


class CannotDeletePinned(FairfuseError):
    """A pinned ranking must be unpinned before deletion."""
