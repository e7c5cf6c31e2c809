"""Exception hierarchy shared by the numerical modules and the CLI."""


class QcfError(Exception):
    """Base class for all errors raised by :mod:`qcf`."""


class DomainError(QcfError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class InvalidBoundsError(DomainError):
    """Evaluation points fall materially outside the configured support."""


class ConvergenceError(QcfError, ArithmeticError):
    """A numerical procedure could not reach the requested tolerance."""


class BracketError(ConvergenceError):
    """A root could not be bracketed before the search range was exhausted."""
