"""Exception types shared across the library."""


class DomainError(ValueError):
    """A parameter or evaluation point lies outside the valid domain."""


class FrameError(ValueError):
    """A Frenet frame or frame-derived quantity is undefined or degenerate."""


class QuadratureError(ArithmeticError):
    """An integrand produced non-finite values."""
