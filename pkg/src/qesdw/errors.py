"""Exception hierarchy."""


class QesError(Exception):
    """Base class for all errors raised by qesdw."""


class DomainError(QesError, ValueError):
    """A model parameter lies outside the region where the construction exists."""


class DegenerateParameterError(QesError, ValueError):
    """A recurrence weight vanished before the truncation index was reached."""


class AccuracyWarning(UserWarning):
    """A series or iteration stopped before reaching its accuracy target."""
