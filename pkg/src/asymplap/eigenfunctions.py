"""Explicit solutions of the Dirichlet and Fucik problems.

Every solution is a chain of one-signed humps. A hump is an affine pullback
of one of the two principal shapes on ``[0, 1]``::

    positive shape:  phi_p(tau / (2 t0))                        tau <  t0
                     phi_p((tau + 1 - 2 t0) / (2 (1 - t0)))     tau >= t0
    negative shape: -phi_p(tau / (2 (1 - t0)))                  tau <  1 - t0
                    -phi_p((tau + 2 t0 - 1) / (2 t0))           tau >= 1 - t0

with ``t0 = a / (a + b)``. The rising part of each shape has length
proportional to ``a`` and the falling part to ``b``, which is what makes the
slope continuous across hump joints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NotOnSpectrumError
from .ptrig import PTrigTable, get_table, phi_p_pair
from .spectra import ProblemParams, breakpoint_t0, hump_length

COVER_REL_TOL = 1e-9


def shape_pair(table: PTrigTable, t0: float, sign: int, tau):
    """Value and slope of the positive (``sign=+1``) or negative principal shape."""
    tau = np.clip(np.asarray(tau, dtype=float), 0.0, 1.0)
    if sign > 0:
        first = tau < t0
        w1, w2 = 2.0 * t0, 2.0 * (1.0 - t0)
        arg = np.where(first, tau / w1, (tau + 1.0 - 2.0 * t0) / w2)
    else:
        first = tau < 1.0 - t0
        w1, w2 = 2.0 * (1.0 - t0), 2.0 * t0
        arg = np.where(first, tau / w1, (tau + 2.0 * t0 - 1.0) / w2)
    v, dv = phi_p_pair(table, np.clip(arg, 0.0, 1.0))
    dv = dv / np.where(first, w1, w2)
    if sign < 0:
        v, dv = -v, -dv
    return v, dv


@dataclass(frozen=True)
class SolutionPiece:
    """One hump ``amplitude * shape_sign(map_scale * t + map_shift)`` on ``[t_l, t_r]``."""

    t_l: float
    t_r: float
    sign: int
    amplitude: float
    map_scale: float
    map_shift: float

    @classmethod
    def on(cls, t_l: float, t_r: float, sign: int, amplitude: float = 1.0) -> "SolutionPiece":
        if not t_l < t_r:
            raise DomainError(f"empty piece [{t_l}, {t_r}]")
        scale = 1.0 / (t_r - t_l)
        return cls(t_l, t_r, int(sign), amplitude, scale, -t_l * scale)

    def __post_init__(self):
        if not self.t_l < self.t_r:
            raise DomainError(f"empty piece [{self.t_l}, {self.t_r}]")
        if self.sign not in (1, -1):
            raise DomainError(f"piece sign must be +1 or -1, got {self.sign!r}")
        if not self.amplitude > 0.0:
            raise DomainError(f"piece amplitude must be positive, got {self.amplitude!r}")
        if abs(self.sigma(self.t_l)) > 1e-12 or abs(self.sigma(self.t_r) - 1.0) > 1e-12:
            raise DomainError("piece map must send [t_l, t_r] onto [0, 1]")

    @property
    def interval(self) -> tuple[float, float]:
        return (self.t_l, self.t_r)

    @property
    def length(self) -> float:
        return self.t_r - self.t_l

    def sigma(self, t):
        return self.map_scale * t + self.map_shift


@dataclass(frozen=True, eq=False)
class PiecewisePSolution:
    """A chain of humps tiling ``[0, L]``, scaled by ``global_scale``."""

    params: ProblemParams
    pieces: tuple[SolutionPiece, ...]
    global_scale: float = 1.0
    table: PTrigTable = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if self.table is None:
            object.__setattr__(self, "table", get_table(self.params.p))
        if not self.pieces:
            raise DomainError("a solution needs at least one piece")
        if not self.global_scale > 0.0:
            raise DomainError(f"global scale must be positive, got {self.global_scale!r}")
        L = self.params.L
        if self.pieces[0].t_l != 0.0 or abs(self.pieces[-1].t_r - L) > 1e-12 * L:
            raise DomainError("pieces must start at 0 and end at L")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if left.t_r != right.t_l:
                raise DomainError(f"pieces do not share the endpoint {left.t_r} / {right.t_l}")
            if left.sign == right.sign:
                raise DomainError(f"consecutive pieces at t={left.t_r} have the same sign")
        object.__setattr__(self, "_ends", np.array([pc.t_r for pc in self.pieces]))

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, self.params.L)

    @property
    def t0(self) -> float:
        return breakpoint_t0(self.params)

    def joints(self) -> list[float]:
        """Interior zeros shared by consecutive pieces."""
        return [pc.t_r for pc in self.pieces[:-1]]

    def extrema(self) -> list[float]:
        """Crest (positive piece) or trough (negative piece) abscissae."""
        t0 = self.t0
        return [pc.t_l + (t0 if pc.sign > 0 else 1.0 - t0) * pc.length for pc in self.pieces]

    def breakpoints(self) -> list[float]:
        """Joints and extrema, where the closed form switches branch."""
        pts = {0.0, self.params.L, *self.joints(), *self.extrema()}
        return sorted(pts)

    def _eval(self, t, side: str = "left"):
        t_arr = np.asarray(t, dtype=float)
        L = self.params.L
        if np.any(~((t_arr >= 0.0) & (t_arr <= L))):
            raise DomainError(f"evaluation point outside [0, {L}]")
        flat = np.atleast_1d(t_arr).ravel()
        which = np.searchsorted(self._ends, flat, side=side)
        which = np.clip(which, 0, len(self.pieces) - 1)
        value = np.empty_like(flat)
        slope = np.empty_like(flat)
        for i in np.unique(which):
            pc = self.pieces[i]
            m = which == i
            v, dv = shape_pair(self.table, self.t0, pc.sign, pc.sigma(flat[m]))
            amp = self.global_scale * pc.amplitude
            value[m] = amp * v
            slope[m] = amp * pc.map_scale * dv
        if t_arr.ndim == 0:
            return float(value[0]), float(slope[0])
        return value.reshape(t_arr.shape), slope.reshape(t_arr.shape)

    def evaluate_pair(self, t):
        return self._eval(t)

    def evaluate(self, t):
        return self._eval(t)[0]

    def evaluate_slope(self, t):
        return self._eval(t)[1]

    def joint_mismatch(self) -> tuple[float, float]:
        """Largest value gap and relative slope gap between the two sides of every joint."""
        joints = self.joints()
        if not joints:
            return 0.0, 0.0
        vl, sl = self._eval(np.array(joints), side="left")
        vr, sr = self._eval(np.array(joints), side="right")
        max_slope = float(np.max(np.abs(np.concatenate([sl, sr]))))
        return float(np.max(np.abs(vl - vr))), float(np.max(np.abs(sl - sr)) / max_slope)

    def validate(self) -> None:
        """Assert value and slope continuity at the joints."""
        dv, ds = self.joint_mismatch()
        if dv > 1e-10 or ds > 1e-8:
            raise AssertionError(f"joint continuity violated: value gap {dv:.3e}, slope gap {ds:.3e}")


def _checked(sol: PiecewisePSolution) -> PiecewisePSolution:
    if __debug__:
        sol.validate()
    return sol


def build_principal(params: ProblemParams, sign: int = 1) -> PiecewisePSolution:
    """Positive (``sign=+1``) or negative first eigenfunction, unit scale.

    The positive one peaks at ``L a / (a + b)``, the negative one bottoms
    out at ``L b / (a + b)``; both have unit ``L^p(0, 1)`` norm before the
    stretch to ``(0, L)``.
    """
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    return PiecewisePSolution(params, (SolutionPiece.on(0.0, params.L, sign),))


def build_kth(params: ProblemParams, k: int, variant: str = "unshifted") -> PiecewisePSolution:
    """k-th Dirichlet eigenfunction: k humps of width L/k, alternating in sign.

    ``variant="unshifted"`` starts with a positive hump, ``"shifted"`` (the
    periodic glue advanced by one hump) with a negative one.
    """
    if int(k) != k or k < 1:
        raise DomainError(f"eigenfunction index must be a positive integer, got {k!r}")
    if variant not in ("unshifted", "shifted"):
        raise DomainError(f"variant must be 'unshifted' or 'shifted', got {variant!r}")
    k = int(k)
    L = params.L
    first = 1 if variant == "unshifted" else -1
    ends = [j * L / k for j in range(k)] + [L]
    pieces = [SolutionPiece.on(ends[j], ends[j + 1], first * (-1) ** j) for j in range(k)]
    return _checked(PiecewisePSolution(params, pieces))


@dataclass(frozen=True)
class InterspersedCover:
    """Alternating tiling of ``[0, L]`` by positive (length ``l_mu``) and negative (``l_nu``) intervals."""

    intervals: tuple[tuple[tuple[float, float], int], ...]
    P: int
    N: int
    l_mu: float
    l_nu: float

    @property
    def start_sign(self) -> int:
        return self.intervals[0][1]

    def positive(self) -> list[tuple[float, float]]:
        return [iv for iv, s in self.intervals if s > 0]

    def negative(self) -> list[tuple[float, float]]:
        return [iv for iv, s in self.intervals if s < 0]

    def check(self, L: float) -> None:
        """Raise ``AssertionError`` unless the cover conditions hold."""
        pos, neg = self.positive(), self.negative()
        assert len(pos) == self.P and len(neg) == self.N
        assert abs(self.P - self.N) <= 1
        for group in (pos, neg):
            # same-sign closures pairwise disjoint and ordered
            for (a0, a1), (b0, b1) in zip(group, group[1:]):
                assert a1 < b0
        for i0, i1 in pos:
            for j0, j1 in neg:
                assert i1 <= j0 or j1 <= i0
        ivs = [iv for iv, _ in self.intervals]
        assert ivs[0][0] == 0.0 and abs(ivs[-1][1] - L) <= 1e-10
        for (a0, a1), (b0, b1) in zip(ivs, ivs[1:]):
            assert a1 == b0
        for i0, i1 in pos:
            assert abs((i1 - i0) - self.l_mu) <= 1e-10
        for j0, j1 in neg:
            assert abs((j1 - j0) - self.l_nu) <= 1e-10
        assert abs(self.P * self.l_mu + self.N * self.l_nu - L) <= 1e-10


def _cover_candidates(L: float, l_mu: float, l_nu: float, start_sign: int):
    p_max = math.ceil(L / l_mu) + 1
    out = []
    for P in range(1, p_max + 1):
        for N in (P - 1, P, P + 1):
            if N < 1:
                continue
            # the starting sign owns the extra interval
            if P == N + 1 and start_sign < 0:
                continue
            if N == P + 1 and start_sign > 0:
                continue
            res = abs(P * l_mu + N * l_nu - L) / L
            out.append((res, P + N, P, N))
    out.sort()
    return out


def build_cover(params: ProblemParams, mu: float, nu: float, start_sign: int = 1) -> InterspersedCover:
    """Interspersed cover for ``(mu, nu)`` beginning with an interval of sign ``start_sign``."""
    if start_sign not in (1, -1):
        raise DomainError(f"start_sign must be +1 or -1, got {start_sign!r}")
    if not (mu > 0.0 and nu > 0.0):
        raise DomainError(f"mu and nu must be positive, got ({mu}, {nu})")
    L = params.L
    l_mu = hump_length(params, mu)
    l_nu = hump_length(params, nu)
    cands = _cover_candidates(L, l_mu, l_nu, start_sign)
    matches = [c for c in cands if c[0] <= COVER_REL_TOL]
    if not matches:
        nearest = [((P, N), res) for res, _, P, N in cands[:2]]
        desc = ", ".join(f"(P,N)=({P},{N}) residual {res:.3e}" for (P, N), res in nearest)
        raise NotOnSpectrumError(
            f"(mu, nu)=({mu}, {nu}) with start sign {start_sign:+d} admits no interspersed cover; nearest: {desc}",
            nearest,
        )
    _, _, P, N = min(matches, key=lambda c: (c[1], c[2]))
    intervals = []
    t = 0.0
    sign = start_sign
    for i in range(P + N):
        width = l_mu if sign > 0 else l_nu
        right = L if i == P + N - 1 else t + width
        intervals.append(((t, right), sign))
        t = right
        sign = -sign
    return InterspersedCover(tuple(intervals), P, N, l_mu, l_nu)


def build_fucik_solution(
    params: ProblemParams, mu: float, nu: float, start_sign: int = 1, c: float = 1.0
) -> PiecewisePSolution:
    """Nontrivial solution ``c * Phi`` of the Fucik problem at ``(mu, nu)``.

    Positive humps carry amplitude ``l_mu``, negative ones ``l_nu``; with a
    single global constant this matches slopes at every joint.
    """
    cover = build_cover(params, mu, nu, start_sign)
    pieces = [
        SolutionPiece.on(lo, hi, sign, cover.l_mu if sign > 0 else cover.l_nu)
        for (lo, hi), sign in cover.intervals
    ]
    return _checked(PiecewisePSolution(params, pieces, global_scale=c))


@dataclass(frozen=True, eq=False)
class ReflectedFragment:
    """``w(t) = u(t)`` on ``[alpha, beta)`` and ``u(2 beta - t)`` on ``[beta, 2 beta - alpha]``."""

    source: PiecewisePSolution
    alpha: float
    beta: float

    @property
    def domain(self) -> tuple[float, float]:
        return (self.alpha, 2.0 * self.beta - self.alpha)

    def breakpoints(self) -> list[float]:
        lo, hi = self.domain
        inner = [t for t in self.source.breakpoints() if self.alpha < t < self.beta]
        mirrored = [2.0 * self.beta - t for t in inner]
        return sorted({lo, hi, self.beta, *inner, *mirrored})

    def evaluate_pair(self, t):
        t_arr = np.asarray(t, dtype=float)
        lo, hi = self.domain
        if np.any(~((t_arr >= lo) & (t_arr <= hi))):
            raise DomainError(f"evaluation point outside [{lo}, {hi}]")
        left = t_arr < self.beta
        src = np.where(left, t_arr, 2.0 * self.beta - t_arr)
        v, dv = self.source.evaluate_pair(np.clip(src, self.alpha, self.beta))
        return v, np.where(left, dv, -dv)

    def evaluate(self, t):
        return self.evaluate_pair(t)[0]

    def evaluate_slope(self, t):
        return self.evaluate_pair(t)[1]


def reflect_extend(sol: PiecewisePSolution, alpha: float, beta: float, n_check: int = 257) -> ReflectedFragment:
    """Mirror the rising stretch ``[alpha, beta]`` of ``sol`` about ``beta``.

    Requires ``u(alpha) = 0``, ``u' >= 0`` on ``(alpha, beta)`` and
    ``u'(beta) = 0``; the checks are relative to the largest slope seen on
    the stretch. For ``p > 2`` the slope near a crest behaves like
    ``dist^(1/(p-1))`` and is ill-conditioned, so the last condition is also
    accepted when ``|u'(beta)|^(p-1)`` is small relative to the largest flux.
    """
    L = sol.params.L
    if not (0.0 <= alpha < beta <= L):
        raise DomainError(f"need 0 <= alpha < beta <= L, got alpha={alpha}, beta={beta}")
    ts = np.linspace(alpha, beta, n_check)
    vals, slopes = sol.evaluate_pair(ts)
    scale = max(float(np.max(np.abs(slopes))), np.finfo(float).tiny)
    vscale = max(float(np.max(np.abs(vals))), np.finfo(float).tiny)
    if abs(vals[0]) > 1e-10 * vscale:
        raise DomainError(f"u(alpha) = {vals[0]:.3e} is not zero at alpha={alpha}")
    neg = np.flatnonzero(slopes[1:-1] < -1e-10 * scale)
    if neg.size:
        raise DomainError(f"u' < 0 inside (alpha, beta) at t={ts[1 + neg[0]]}")
    end = abs(slopes[-1])
    if end > 1e-8 * scale and (end / scale) ** (sol.params.p - 1.0) > 1e-8:
        raise DomainError(f"u'(beta) = {slopes[-1]:.3e} is not zero at beta={beta}")
    return ReflectedFragment(sol, float(alpha), float(beta))
