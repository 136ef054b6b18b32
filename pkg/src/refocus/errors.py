"""Exception types shared across the package.

Everything user-facing derives from RefocusError so the CLI can map
domain failures to a single exit code.
"""


class RefocusError(Exception):
    """Base class for all domain errors."""


class StateError(RefocusError):
    """An operation was called in a state that forbids it."""


class UnsupportedFormat(RefocusError):
    """An input file is not in the format this system handles."""


class DegenerateLandmarks(RefocusError):
    """Landmark configuration admits no pose solution."""


class DegenerateCalibration(RefocusError):
    """Calibration sweep shows no head movement on some axis."""


class MalformedLog(RefocusError):
    """A session log violates the event-ordering or pairing rules."""


class InsufficientData(RefocusError):
    """Too few observations for the requested statistic."""


class SpanMismatch(RefocusError):
    """Two interval tracks do not cover the same time span."""


class DecodeError(RefocusError):
    """A wire frame or log line could not be decoded.

    Carries the byte/char offset where decoding failed and a reason.
    """

    def __init__(self, reason: str, offset: int = 0):
        super().__init__(f"decode error at offset {offset}: {reason}")
        self.reason = reason
        self.offset = offset
