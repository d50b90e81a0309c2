"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map it without a
lookup table: 2 for bad input, 3 for a mathematical inconsistency.
"""

from __future__ import annotations


class DsmultError(Exception):
    exit_code = 1


class ValidationError(DsmultError, ValueError):
    """Input data violates a documented precondition."""

    exit_code = 2


class InconsistencyError(DsmultError, ArithmeticError):
    """An exact identity that must hold did not."""

    exit_code = 3


# exact
class NotRational(InconsistencyError):
    pass


class NotRepresentable(InconsistencyError):
    pass


# roots
class InvalidRootSystem(ValidationError):
    pass


class NoSuchElement(ValidationError):
    pass


# params
class ChamberMismatch(ValidationError):
    pass


class NotInDstar(ValidationError):
    pass


# lattice
class SchemaError(ValidationError):
    pass


class OrderInconsistent(ValidationError):
    pass


class DegenerateClass(ValidationError):
    pass


# hpformula
class DivisorVanishes(InconsistencyError):
    pass


class SingularElement(ValidationError):
    pass


# genfun
class DegreeOverflow(InconsistencyError):
    pass


class Mismatch(InconsistencyError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


# solver
class SamplingSetError(ValidationError):
    pass


class Singular(InconsistencyError):
    pass


class HeldOutMismatch(InconsistencyError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class GridRequired(ValidationError):
    pass


# cuspforms
class UnqualifiedF(ValidationError):
    pass
