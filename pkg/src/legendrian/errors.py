"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 input error, 3 mathematical precondition violation, 4 non-convergence,
5 internal invariant breach.
"""


class LegendrianError(Exception):
    exit_code = 5


class InputError(LegendrianError, ValueError):
    exit_code = 2


class PreconditionError(LegendrianError, ValueError):
    exit_code = 3


class ConvergenceError(LegendrianError, RuntimeError):
    exit_code = 4


class InvariantBreach(LegendrianError, RuntimeError):
    exit_code = 5


# series
class NonzeroResidue(PreconditionError):
    pass


class ZeroInPolarPart(PreconditionError, ZeroDivisionError):
    pass


# contact
class IndexOutOfRange(InputError, IndexError):
    pass


# periods
class CycleOutsideDomain(PreconditionError):
    pass


class DominationFailed(PreconditionError):
    pass


class ConstantPairedComponent(PreconditionError):
    pass


class SingularMatrix(PreconditionError):
    pass


class NonvanishingPeriod(PreconditionError):
    pass


# Riemann-Hilbert
class CenterNotLegendrian(PreconditionError):
    pass


class PoleNotCleared(PreconditionError):
    pass


class FamilyMismatch(PreconditionError):
    pass


class NotConverged(ConvergenceError):
    pass


# flat embeddings / geometry
class DegeneratePlane(PreconditionError):
    pass


class NormalDegenerate(PreconditionError):
    pass


class PushIneffective(ConvergenceError):
    pass


# flows and paths
class Diverged(ConvergenceError):
    pass


class BasisDegenerate(PreconditionError):
    pass


class DerivativeNotLegendrianAtEndpoint(PreconditionError):
    pass


class ToleranceUnreachable(ConvergenceError):
    pass


class TargetTooFar(PreconditionError):
    """Boundary target is not within the required distance of the curve."""
