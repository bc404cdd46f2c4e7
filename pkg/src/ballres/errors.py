"""Exception types raised on precondition violations."""


class DomainError(ValueError):
    """An argument lies outside the supported domain of an operation."""


class SingularityError(DomainError):
    """Evaluation requested at a singular point (e.g. a Hankel function at 0)."""


class ResonanceError(SingularityError):
    """A real contrast sits (numerically) on a resonance of the sphere."""
