"""Dirichlet and Fucik spectra of the one-dimensional asymmetric p-Laplacian.

Closed forms live in :mod:`asymplap.spectra`, explicit solutions in
:mod:`asymplap.eigenfunctions`, the generalized sine in
:mod:`asymplap.ptrig` and independent numerical checks in
:mod:`asymplap.oracle`.
"""

from .eigenfunctions import (
    InterspersedCover,
    PiecewisePSolution,
    ReflectedFragment,
    SolutionPiece,
    build_cover,
    build_fucik_solution,
    build_kth,
    build_principal,
    reflect_extend,
)
from .errors import (
    AccuracyError,
    AsymptoteError,
    DomainError,
    InvalidCurveError,
    NotOnSpectrumError,
    SearchError,
)
from .ptrig import PTrigTable, build_table, compute_pi_p, get_table, lambda_k_symmetric, phi_p, sin_p, sin_p_prime
from .spectra import (
    Branch,
    DirichletEigenvalue,
    FucikCurveId,
    FucikPoint,
    Membership,
    MembershipKind,
    ProblemParams,
    breakpoint_t0,
    classical_branch_of,
    dirichlet_spectrum,
    fucik_membership,
    fucik_nu_on_curve,
    lambda_1_asym,
    lambda_k_asym,
    sample_fucik_curve,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "AsymptoteError",
    "Branch",
    "DirichletEigenvalue",
    "DomainError",
    "FucikCurveId",
    "FucikPoint",
    "InterspersedCover",
    "InvalidCurveError",
    "Membership",
    "MembershipKind",
    "NotOnSpectrumError",
    "PTrigTable",
    "PiecewisePSolution",
    "ProblemParams",
    "ReflectedFragment",
    "SearchError",
    "SolutionPiece",
    "breakpoint_t0",
    "build_cover",
    "build_fucik_solution",
    "build_kth",
    "build_principal",
    "build_table",
    "classical_branch_of",
    "compute_pi_p",
    "dirichlet_spectrum",
    "fucik_membership",
    "fucik_nu_on_curve",
    "get_table",
    "lambda_1_asym",
    "lambda_k_asym",
    "lambda_k_symmetric",
    "phi_p",
    "reflect_extend",
    "sample_fucik_curve",
    "sin_p",
    "sin_p_prime",
]
