"""Holomorphic Legendrian curves in (C^{2n+1}, dz + sum_j x_j dy_j).

Submodules: ``series`` (sparse Laurent polynomials), ``contact`` (curves,
the contact form, Legendrization), ``periods``, ``rh`` (Riemann-Hilbert
deformation), ``flat`` (explicit flat embeddings), ``geometry`` (metric and
embedding diagnostics, boundary push), ``flows`` (contact Hamiltonians),
``paths`` (Legendrian approximation of paths), ``io`` and ``cli``.
"""
from .contact import (
    Annulus,
    ContactPoint,
    CurveJet,
    Disk,
    legendrian_residual,
    legendrize,
    pullback_eta,
)
from .errors import (
    ConvergenceError,
    InputError,
    InvariantBreach,
    LegendrianError,
    PreconditionError,
)
from .flat import FlatPlaneSpec, flat_embedding, taylor_truncate
from .flows import PolyFunction, contact_hamiltonian_field, flow, hamiltonian_of
from .geometry import PushParams, boundary_push, embedding_check, intrinsic_distance
from .paths import SampledPath, legendrian_path_approx
from .periods import period, solve_period_vanishing
from .rh import BoundaryFamily, rh_approximate
from .series import LaurentPoly

__version__ = "0.1.0"

__all__ = [
    "Annulus", "BoundaryFamily", "ContactPoint", "ConvergenceError", "CurveJet", "Disk",
    "FlatPlaneSpec", "InputError", "InvariantBreach", "LaurentPoly", "LegendrianError",
    "PolyFunction", "PreconditionError", "PushParams", "SampledPath", "boundary_push",
    "contact_hamiltonian_field", "embedding_check", "flat_embedding", "flow",
    "hamiltonian_of", "intrinsic_distance", "legendrian_path_approx", "legendrian_residual",
    "legendrize", "period", "pullback_eta", "rh_approximate", "solve_period_vanishing",
    "taylor_truncate",
]
