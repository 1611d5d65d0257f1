"""Exception hierarchy shared by all modules."""


class InvspecError(Exception):
    """Base class for errors raised by invspec."""


class ProfileError(InvspecError, ValueError):
    """A profile failed validation or violates an operation's precondition."""


class NonConcaveError(ProfileError):
    """A Kahler potential is not strictly concave where it was evaluated."""


class ConvergenceError(InvspecError, RuntimeError):
    """A numerical procedure did not reach its tolerance within budget."""


class QuadratureError(ConvergenceError):
    """An integral of a profile could not be computed to a finite value."""
