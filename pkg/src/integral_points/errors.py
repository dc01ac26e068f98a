"""Exception hierarchy.

Three families map onto the CLI exit codes: bad input (2), a genuine
arithmetic obstruction (3) and a broken internal invariant (4).
"""


class IntegralPointsError(Exception):
    exit_code = 4


class InputError(IntegralPointsError, ValueError):
    exit_code = 2


class ArithmeticObstruction(IntegralPointsError):
    """A mathematically meaningful failure: the requested object does not
    exist over the current ring, or needs a larger S."""

    exit_code = 3


class InvariantViolation(IntegralPointsError, AssertionError):
    exit_code = 4


# -- input errors -----------------------------------------------------------

class ParseError(InputError):
    pass


class AllZero(InputError):
    pass


class DimMismatch(InputError):
    pass


class NonPrimitiveForm(InputError):
    pass


class OversizeInput(InputError):
    pass


class PerfectSquare(InputError):
    pass


class InvalidD(InputError):
    pass


class DegenerateForm(InputError):
    pass


class IdenticalPoints(InputError):
    pass


class DuplicatePoints(InputError):
    pass


class ExclusionOnTriangle(InputError):
    pass


class InvalidScenario(InputError):
    pass


class InvalidModel(InputError):
    pass


class NotClassified(InputError):
    pass


# -- arithmetic obstructions ------------------------------------------------

class NeedLargerS(ArithmeticObstruction):
    """Raised when progress requires inverting primes outside S."""

    def __init__(self, primes, message="", operation=""):
        self.primes = tuple(sorted(set(int(p) for p in primes)))
        self.operation = operation
        super().__init__(message or f"S must be enlarged by {list(self.primes)}")


class CurveReduces(ArithmeticObstruction):
    def __init__(self, primes=(), message=""):
        self.primes = tuple(sorted(set(primes)))
        super().__init__(message or f"curve reduces into D modulo {list(self.primes)}")


class EmptyCaseD(ArithmeticObstruction):
    pass


class EmptyUnitGroup(ArithmeticObstruction):
    pass


class NotEnoughUnits(ArithmeticObstruction):
    pass


class UnsupportedDegree(ArithmeticObstruction):
    pass


class SiegelDegenerate(ArithmeticObstruction):
    """The curve meets D in three or more geometric points."""


class NoRationalRulingPoint(ArithmeticObstruction):
    pass


class NoRationalPointOnConic(ArithmeticObstruction):
    pass


class TangencyDegenerate(ArithmeticObstruction):
    pass


class OnExceptionalLocus(ArithmeticObstruction):
    pass


class OnQuadricLocus(ArithmeticObstruction):
    pass


class FiberNotFinite(ArithmeticObstruction):
    pass


# -- invariant violations ---------------------------------------------------

class DivisionFails(InvariantViolation):
    pass
