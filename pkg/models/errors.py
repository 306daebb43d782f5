"""
Exception hierarchy for the graphic analysis engine.

Every failure the engine can raise derives from GraphicError, which is a
ValueError so callers that only care about bad input can catch that.
"""

from __future__ import annotations


class GraphicError(ValueError):
    """Base class for all engine failures."""


class SchemaError(GraphicError):
    """The graphic document does not follow the file schema."""


class ChainError(GraphicError):
    """A component does not close up into a chain of segments."""


class IdenticallyZero(GraphicError):
    """A polynomial vanishes on the whole query interval."""


class DegenerateFlat(GraphicError):
    """A segment is a straight line (curvature numerator identically zero)."""


class UndecidableAtTolerance(GraphicError):
    """A cusp side test fell below tol_side."""


class TangentialDegeneracy(GraphicError):
    """A tangency root has multiplicity two or more."""


class EventAngle(GraphicError):
    """A census was requested at a non-Morse angle."""


class NegativeGenus(GraphicError):
    """The census gives n1 - n0 + 1 < 0."""


class GenericityFailure(GraphicError):
    """The graphic violates the finiteness hypotheses of the sweep."""


class ClassificationMismatch(GraphicError):
    """Census differencing contradicts the event kind table."""


class ParityViolation(GraphicError):
    """c and p + q have different parity."""


class PeakExceedsBound(GraphicError):
    """The trajectory peak is above (p + q + c) / 2."""


class GapViolation(GraphicError):
    """c is smaller than |p - q|."""


class InvalidSequence(GraphicError):
    """A stabilization sequence destabilizes below genus zero."""


class NonGenericLevel(GraphicError):
    """A slice line passes through a tangency, cusp or crossing."""


class ParityError(GraphicError):
    """n + 3m is odd, so the slice Reeb graph cannot exist."""


class GenericityWarning(UserWarning):
    """Two events share an angle within tol_event."""
