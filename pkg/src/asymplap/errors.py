"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the supported domain."""


class AsymptoteError(DomainError):
    """A Fucik curve was queried at or below its vertical asymptote."""

    def __init__(self, mu: float, bound: float):
        super().__init__(f"mu={mu!r} must exceed the curve asymptote {bound!r}")
        self.mu = mu
        self.bound = bound


class InvalidCurveError(DomainError):
    """A (P, N) pair violates |P - N| <= 1 or positivity."""


class NotOnSpectrumError(DomainError):
    """No interspersed cover exists for the requested (mu, nu, start sign).

    ``candidates`` holds the nearest ``((P, N), residual)`` pairs that were
    tried, closest first.
    """

    def __init__(self, message: str, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class AccuracyError(RuntimeError):
    """An integration drifted beyond its accuracy guard."""


class SearchError(RuntimeError):
    """A bracketing search failed to locate a root."""
