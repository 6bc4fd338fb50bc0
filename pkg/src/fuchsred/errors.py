"""Exception hierarchy.

``OutsideDomain`` subclasses mark points where the section is undefined;
each carries a short ``condition_id`` and a ``condition`` description of the
violated condition so that callers (and the CLI) can report it.
"""

from fuchsred.scalars import DivisionByZero


class FuchsredError(Exception):
    pass


class SingularMatrix(FuchsredError, ArithmeticError):
    pass


class InconsistentSystem(FuchsredError, ArithmeticError):
    pass


class NotInTangentSpace(InconsistentSystem):
    pass


class CorrectionUnsolvable(InconsistentSystem):
    pass


class InvalidSpec(FuchsredError, ValueError):
    pass


class RestrictionViolation(InvalidSpec):
    """A spec asks for an eigenspace of dimension greater than one."""


class InvalidOrdering(FuchsredError, ValueError):
    pass


class MembershipViolation(FuchsredError):
    pass


class OutsideDomain(FuchsredError):
    condition_id = "domain"
    condition = "point outside the domain of the section"


class GaussObstruction(OutsideDomain):
    condition_id = "triangular-frames"
    condition = (
        "no common frame makes the upper anchor upper-triangular and the lower anchor "
        "lower-triangular (UL factorization hits a vanishing trailing minor)"
    )


class ZeroEigenvectorComponent(OutsideDomain):
    condition_id = "eigenvector-components"
    condition = (
        "the chosen eigenvector of the row-sum anchor has a zero component in the "
        "triangular frame"
    )


class EigenvalueMismatch(OutsideDomain, ValueError):
    condition_id = "eigenvalue"
    condition = "chosen eigenvalue is not an eigenvalue of the row-sum anchor"


class StepThroughBoundary(OutsideDomain):
    condition_id = "fd-probe"
    condition = "finite-difference probe left the domain"


class LiftedOffOrbit(FuchsredError):
    """Reconstructed tuple has an anchor off its orbit.

    ``tuple`` holds the reconstructed tuple and ``reports`` the failing
    membership reports keyed by tuple index.
    """

    def __init__(self, message, tuple=None, reports=None):
        super().__init__(message)
        self.tuple = tuple
        self.reports = reports or {}


__all__ = [
    "DivisionByZero",
    "FuchsredError",
    "SingularMatrix",
    "InconsistentSystem",
    "NotInTangentSpace",
    "CorrectionUnsolvable",
    "InvalidSpec",
    "RestrictionViolation",
    "InvalidOrdering",
    "MembershipViolation",
    "OutsideDomain",
    "GaussObstruction",
    "ZeroEigenvectorComponent",
    "EigenvalueMismatch",
    "StepThroughBoundary",
    "LiftedOffOrbit",
]
