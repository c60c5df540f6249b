"""Exception types shared across the package."""


class UsageError(ValueError):
    """Raised when a caller passes arguments outside an operation's domain."""


class CapacityError(RuntimeError):
    """Raised when a request exceeds a documented size guard.

    The message names the limit that was hit (for example "dk <= 24").
    """


class BracketError(UsageError):
    """Raised when the majority-vote bracket precondition p + K <= 1/2 fails.

    Carries the computed crossover mass ``K`` so callers can report how far
    the request was from the supported region.
    """

    def __init__(self, message: str, K: float):
        super().__init__(message)
        self.K = K
