"""Semantic exceptions shared across the package."""


class OngraphError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(OngraphError, ValueError):
    """An argument violates a documented precondition."""


class NonConvergenceError(OngraphError, ArithmeticError):
    """An iterative evaluation hit its hard cap before converging."""


class ResourceCapError(OngraphError, RuntimeError):
    """An experiment exceeded its resource cap; carries partial progress."""

    def __init__(self, message: str, completed: int = 0):
        super().__init__(message)
        self.completed = completed
