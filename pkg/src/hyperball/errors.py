"""Exception types shared across the engine."""


class HyperballError(Exception):
    """Base class for all engine errors."""


class DegenerateCandidate(HyperballError):
    """Orthonormalization residual collapsed below tolerance; caller must resample."""


class ColinearSelection(HyperballError):
    """Selected dimensions all project onto one line; cannot span a 2D view."""


class NoAffectedDims(HyperballError):
    """No dimension direction falls within the chase gesture's angular reach."""


class MissingLabels(HyperballError):
    """A class-based view metric was requested without class labels."""


class DegenerateData(HyperballError):
    """Every optimizer candidate collapsed; the data does not span a 2D view."""


class EmptyCluster(HyperballError):
    """A cluster lost all members and could not be re-seeded."""


class PathTooShort(HyperballError):
    """A keyframe path needs at least two views."""


class ParseError(HyperballError):
    """CSV ingestion failed; carries the offending row/column."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class TooFewDims(HyperballError):
    """Fewer than three numeric attributes after ingestion."""


class DatasetError(HyperballError):
    """Dataset violates a structural requirement (e.g. too few rows)."""


class ProtocolError(HyperballError):
    """Malformed or unknown wire-protocol request."""

    def __init__(self, message, code="bad_request"):
        super().__init__(message)
        self.code = code
