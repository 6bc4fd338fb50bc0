"""Symplectic reduction of Fuchsian residue tuples to products of coadjoint orbits.

Exact arithmetic over the Gaussian rationals is the default; a floating
complex mode is available for exploration.
"""

from fuchsred.errors import (
    EigenvalueMismatch,
    GaussObstruction,
    LiftedOffOrbit,
    OutsideDomain,
    RestrictionViolation,
    StepThroughBoundary,
    ZeroEigenvectorComponent,
)
from fuchsred.linalg import Matrix
from fuchsred.orbits import OrbitSpec, check_membership, orbit_dimension
from fuchsred.reduction import (
    DiscreteData,
    FuchsTuple,
    ReducedPoint,
    canonical_section,
    lift,
    reduce,
    sample_tuple,
)
from fuchsred.scalars import EXACT, KERNEL, FloatField, GaussianRational, field_for_mode, gq
from fuchsred.symplectic import lie_poisson, pushforward_reduce, total_form, verify_pullback

__version__ = "0.1.0"

__all__ = [
    "EXACT",
    "KERNEL",
    "DiscreteData",
    "EigenvalueMismatch",
    "FloatField",
    "FuchsTuple",
    "GaussObstruction",
    "GaussianRational",
    "LiftedOffOrbit",
    "Matrix",
    "OrbitSpec",
    "OutsideDomain",
    "ReducedPoint",
    "RestrictionViolation",
    "StepThroughBoundary",
    "ZeroEigenvectorComponent",
    "canonical_section",
    "check_membership",
    "field_for_mode",
    "gq",
    "lie_poisson",
    "lift",
    "orbit_dimension",
    "pushforward_reduce",
    "reduce",
    "sample_tuple",
    "total_form",
    "verify_pullback",
]
