"""
Exception hierarchy for the etale cohomology toolkit.

Two families:
    UsageError        - the input itself is malformed (CLI exit code 2)
    MathematicalError - a precondition failed or a bounded search ran out (CLI exit code 1)
"""


class UsageError(Exception):
    """Base class for malformed user input"""


class MathematicalError(Exception):
    """Base class for mathematical precondition failures"""


# --- input -----------------------------------------------------------------

class PolynomialSyntaxError(UsageError):
    """Polynomial text does not follow the integer-coefficient grammar"""


class ReduciblePolynomial(UsageError):
    """Defining polynomial is reducible over the rationals"""


class NonMonic(UsageError):
    """Defining polynomial is not monic"""


class InvalidExtensionSpec(UsageError):
    """Extension spec JSON is missing fields or has the wrong shape"""


class InvalidIdealSpec(UsageError):
    """Ideal or (a, ideal) pair JSON is malformed"""


# --- nf_core / ideal_arith -------------------------------------------------

class DivisionByZero(MathematicalError):
    """Inverse of the zero element requested"""


class ZeroIdeal(MathematicalError):
    """Operation undefined on the zero ideal"""


class ZeroElement(MathematicalError):
    """Principal divisor of zero requested"""


class NotAnNthPower(MathematicalError):
    """Element or ideal is not an n-th power"""


# --- class_unit ------------------------------------------------------------

class BoundsExceeded(MathematicalError):
    """Field or factor base is too large for the configured desk-scale bounds"""


class SearchExhausted(MathematicalError):
    """A bounded search ended without a result; raise the configured bound"""


class RankTooLarge(MathematicalError):
    """Unit rank beyond the configured scope"""


# --- rel_ext ---------------------------------------------------------------

class RootOfUnityMissing(MathematicalError):
    """Kummer theory needs a primitive n-th root of unity in the base field"""


class RamifiedExtension(MathematicalError):
    """Extension is ramified where an unramified one is required"""


class NotGaloisCyclic(MathematicalError):
    """Explicit extension is not Galois with cyclic group over the base"""


class NormNotOne(MathematicalError):
    """Hilbert 90 input does not have relative norm 1"""


class ResolventExhausted(MathematicalError):
    """Every resolvent seed tried produced zero"""


class NormNotTrivialIdeal(MathematicalError):
    """Ideal Hilbert 90 input does not have trivial relative norm"""


class ClassEquationUnsolvable(MathematicalError):
    """(1 - sigma) x = [M] has no solution in Cl L"""


class WitnessCheckFailed(MathematicalError):
    """A solver produced a witness whose defining identity does not hold"""


# --- cohomology / kim ------------------------------------------------------

class NotInZ1(MathematicalError):
    """Pair (a, A) does not satisfy -div(a) = n A"""


class DescentFailure(MathematicalError):
    """Ideal of L does not descend to K"""


class ScopeViolation(MathematicalError):
    """n even on a field with real places"""


class NotDivisibleByN(MathematicalError):
    """div(v) is not n times a divisor"""


class PipelineMismatch(MathematicalError):
    """Artin criterion and cup-product evaluation disagree"""
