"""Exception hierarchy shared by all modules."""


class RotsurfError(Exception):
    """Base class for every error raised by this package."""


class SpecError(RotsurfError, ValueError):
    """A curve or surface specification failed to parse or validate.

    ``path`` is a JSON-path-like pointer to the offending field, e.g.
    ``$.curve.params.delta1``.
    """

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


class DomainError(RotsurfError, ValueError):
    """A parameter value lies outside the declared domain."""


class AdmissibilityError(RotsurfError, ValueError):
    """A geometric admissibility condition fails (positivity, degenerate normal)."""


class StepError(RotsurfError, ValueError):
    """A finite-difference stencil would leave the domain."""


class InsufficientSamples(RotsurfError, ValueError):
    """Too few non-harmonic samples to solve for ``f`` and ``C``."""


class InvalidParams(RotsurfError, ValueError):
    """Theorem-harness parameters do not describe the family the theorem concerns."""


class RankDeficientWarning(UserWarning):
    """The (f, C) least-squares system is rank deficient; C is the minimal-norm solution."""
