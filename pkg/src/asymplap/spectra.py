"""Closed-form Dirichlet and Fucik spectra of the asymmetric p-Laplacian.

The operator is ``-(a^p [(u')^+]^(p-1) - b^p [(u')^-]^(p-1))'`` on ``(0, L)``
with Dirichlet conditions. Every quantity here is an explicit formula in
``pi_p``; the numerical cross-checks live in :mod:`asymplap.oracle`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AsymptoteError, DomainError, InvalidCurveError
from .ptrig import check_exponent, lambda_k_symmetric


@dataclass(frozen=True)
class ProblemParams:
    """Exponent ``p``, slope conductivities ``a`` (rising) and ``b`` (falling), length ``L``."""

    p: float = 2.0
    a: float = 1.0
    b: float = 1.0
    L: float = 1.0

    def __post_init__(self):
        check_exponent(self.p)
        for name in ("a", "b", "L"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        for name in ("p", "a", "b", "L"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def with_length(self, L: float) -> "ProblemParams":
        return ProblemParams(self.p, self.a, self.b, L)


@dataclass(frozen=True)
class DirichletEigenvalue:
    k: int
    value: float


@dataclass(frozen=True, order=True)
class FucikCurveId:
    """Curve with ``P`` positive and ``N`` negative humps, ``|P - N| <= 1``."""

    P: int
    N: int

    def __post_init__(self):
        if int(self.P) != self.P or int(self.N) != self.N or self.P < 1 or self.N < 1:
            raise InvalidCurveError(f"hump counts must be positive integers, got ({self.P}, {self.N})")
        if abs(self.P - self.N) > 1:
            raise InvalidCurveError(f"|P - N| must be 0 or 1, got ({self.P}, {self.N})")
        object.__setattr__(self, "P", int(self.P))
        object.__setattr__(self, "N", int(self.N))


@dataclass(frozen=True)
class FucikPoint:
    mu: float
    nu: float

    def __post_init__(self):
        if not (self.mu > 0.0 and self.nu > 0.0):
            raise DomainError(f"Fucik points need positive coordinates, got ({self.mu}, {self.nu})")


class Branch(enum.Enum):
    """Classical labels of the nontrivial Fucik curves."""

    EVEN = "e"
    ODD_1 = "o,1"
    ODD_2 = "o,2"


class MembershipKind(enum.Enum):
    TRIVIAL_LINE_MU = "trivial-line-mu"
    TRIVIAL_LINE_NU = "trivial-line-nu"
    ON_CURVE = "on-curve"
    NOT_IN_SPECTRUM = "not-in-spectrum"


@dataclass(frozen=True)
class Membership:
    kind: MembershipKind
    curve: FucikCurveId | None = None
    residual: float = math.nan


def lambda_1_asym(params: ProblemParams) -> float:
    """First Dirichlet eigenvalue ``((a+b)/2)^p (p-1) (pi_p/L)^p``."""
    return ((params.a + params.b) / 2.0) ** params.p * lambda_k_symmetric(params.p, params.L, 1)


def lambda_k_asym(params: ProblemParams, k: int) -> float:
    """k-th Dirichlet eigenvalue ``(k (a+b)/2)^p lambda_{1,p}(0, L)``."""
    if int(k) != k or k < 1:
        raise DomainError(f"eigenvalue index must be a positive integer, got {k!r}")
    return (k * (params.a + params.b) / 2.0) ** params.p * lambda_k_symmetric(params.p, params.L, 1)


def breakpoint_t0(params: ProblemParams) -> float:
    """Crest location ``a / (a + b)`` of the positive principal eigenfunction on (0, 1)."""
    return params.a / (params.a + params.b)


def dirichlet_spectrum(params: ProblemParams, k_max: int) -> list[DirichletEigenvalue]:
    if int(k_max) != k_max or k_max < 1:
        raise DomainError(f"k_max must be a positive integer, got {k_max!r}")
    lam1 = lambda_1_asym(params)
    return [DirichletEigenvalue(k, k**params.p * lam1) for k in range(1, int(k_max) + 1)]


def hump_length(params: ProblemParams, value: float) -> float:
    """Length ``(lambda_1^{a,b}(0,1) / value)^(1/p)`` of a one-signed hump solving at ``value``."""
    if not value > 0.0:
        raise DomainError(f"hump length needs a positive parameter, got {value!r}")
    lam_unit = lambda_1_asym(params.with_length(1.0))
    return (lam_unit / value) ** (1.0 / params.p)


def curve_asymptote(params: ProblemParams, curve: FucikCurveId) -> float:
    """Vertical asymptote ``P^p lambda_1^{a,b}`` of the (P, N) curve."""
    return curve.P**params.p * lambda_1_asym(params)


def curve_residual(params: ProblemParams, curve: FucikCurveId, mu: float, nu: float) -> float:
    """Signed relative defect of ``P mu^(-1/p) + N nu^(-1/p) = lambda_1^(-1/p)``."""
    p = params.p
    target = lambda_1_asym(params) ** (-1.0 / p)
    return (curve.P * mu ** (-1.0 / p) + curve.N * nu ** (-1.0 / p) - target) / target


def fucik_nu_on_curve(params: ProblemParams, curve: FucikCurveId, mu: float) -> float:
    """Solve the (P, N) curve equation for ``nu`` given ``mu``."""
    p = params.p
    lam = lambda_1_asym(params)
    bound = curve_asymptote(params, curve)
    if not mu > bound:
        raise AsymptoteError(mu, bound)
    remainder = lam ** (-1.0 / p) - curve.P * mu ** (-1.0 / p)
    if not remainder > 0.0:
        raise AsymptoteError(mu, bound)
    return (curve.N / remainder) ** p


def sample_fucik_curve(
    params: ProblemParams, curve: FucikCurveId, mu_lo: float, mu_hi: float, n: int
) -> list[FucikPoint]:
    """``n`` points of the (P, N) curve with ``mu`` geometrically spaced in ``[mu_lo, mu_hi]``."""
    if int(n) != n or n < 2:
        raise DomainError(f"need at least two samples, got {n!r}")
    if not mu_lo < mu_hi:
        raise DomainError(f"mu_lo={mu_lo!r} must be below mu_hi={mu_hi!r}")
    bound = curve_asymptote(params, curve)
    if not mu_lo > bound:
        raise AsymptoteError(mu_lo, bound)
    mus = np.geomspace(mu_lo, mu_hi, int(n))
    return [FucikPoint(float(m), fucik_nu_on_curve(params, curve, float(m))) for m in mus]


def fucik_membership(params: ProblemParams, mu: float, nu: float, rel_tol: float = 1e-9) -> Membership:
    """Classify ``(mu, nu)`` against the Fucik spectrum.

    The trivial lines ``mu = lambda_1`` and ``nu = lambda_1`` are checked
    first (in that order). Otherwise every admissible ``(P, N)`` with
    ``P <= ceil(lambda_1^(-1/p) mu^(1/p))`` is tested in the
    ``lambda^(-1/p)`` metric; among matches the smallest ``P + N`` wins,
    then the smallest ``P``.
    """
    if not rel_tol > 0.0:
        raise DomainError(f"rel_tol must be positive, got {rel_tol!r}")
    lam = lambda_1_asym(params)
    if abs(mu - lam) <= rel_tol * lam:
        return Membership(MembershipKind.TRIVIAL_LINE_MU, residual=(mu - lam) / lam)
    if abs(nu - lam) <= rel_tol * lam:
        return Membership(MembershipKind.TRIVIAL_LINE_NU, residual=(nu - lam) / lam)
    if not (mu > 0.0 and nu > 0.0):
        return Membership(MembershipKind.NOT_IN_SPECTRUM)

    p = params.p
    p_max = math.ceil(lam ** (-1.0 / p) * mu ** (1.0 / p))
    best = None
    for P in range(1, p_max + 1):
        for N in (P - 1, P, P + 1):
            if N < 1:
                continue
            curve = FucikCurveId(P, N)
            res = curve_residual(params, curve, mu, nu)
            if abs(res) <= rel_tol:
                key = (P + N, P)
                if best is None or key < best[0]:
                    best = (key, curve, res)
    if best is None:
        return Membership(MembershipKind.NOT_IN_SPECTRUM)
    return Membership(MembershipKind.ON_CURVE, best[1], best[2])


def classical_branch_of(curve: FucikCurveId) -> tuple[Branch, int]:
    """Map (P, N) to its classical family and index.

    (k, k) is the even family, (k, k+1) the first odd family and (k+1, k)
    the second odd family.
    """
    if not isinstance(curve, FucikCurveId):
        curve = FucikCurveId(*curve)
    if curve.P == curve.N:
        return Branch.EVEN, curve.P
    if curve.N == curve.P + 1:
        return Branch.ODD_1, curve.P
    return Branch.ODD_2, curve.N


def all_curves(max_humps: int) -> list[FucikCurveId]:
    """Every admissible (P, N) with ``P + N <= max_humps``, ordered by ``(P + N, P)``."""
    out = []
    for m in range(2, int(max_humps) + 1):
        for P in range(1, m):
            N = m - P
            if abs(P - N) <= 1:
                out.append(FucikCurveId(P, N))
    return out
