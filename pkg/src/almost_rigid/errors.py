"""Exception hierarchy.

The CLI maps these onto exit codes: ``ParseError`` -> 2, ``SpecError`` -> 3,
``MathError`` -> 4.
"""


class AlmostRigidError(Exception):
    """Base class for every error raised by this package."""


class ParseError(AlmostRigidError, ValueError):
    """Malformed polynomial text or spec file."""


class SpecError(AlmostRigidError, ValueError):
    """Invalid variety/automorphism description or incompatible operands."""


class MathError(AlmostRigidError, ArithmeticError):
    """A well-formed request that is mathematically impossible."""


class DivisionByZero(MathError, ZeroDivisionError):
    pass
