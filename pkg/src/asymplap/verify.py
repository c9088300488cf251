"""Oracle suite behind ``asymplap verify``.

Every check compares a closed form or an explicit solution against an
independent numerical computation and yields one :class:`CheckResult`.
The suite is deterministic: all randomness comes from one seeded
generator and no timings are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect, brentq

from .eigenfunctions import PiecewisePSolution, build_cover, build_kth, build_principal
from .ptrig import compute_pi_p
from .spectra import (
    ProblemParams,
    all_curves,
    breakpoint_t0,
    curve_asymptote,
    hump_length,
    lambda_1_asym,
    lambda_k_asym,
    sample_fucik_curve,
)
from . import oracle

# Fucik samples take mu in this range, as multiples of each curve's asymptote
FUCIK_MU_RANGE = (1.1, 20.0)

@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.measured <= self.tolerance)


def drift_bound(p: float) -> float:
    """Energy-drift budget of a default-step shoot."""
    return 1e-7 if p >= 2.0 else 1e-5


def pi_p_beta(p: float) -> float:
    """``2 pi / (p sin(pi / p))``, an identity independent of the quadrature."""
    return 2.0 * math.pi / (p * math.sin(math.pi / p))


def crest_location(sol: PiecewisePSolution, lo: float, hi: float, n_scan: int = 1001) -> float:
    """Abscissa in ``[lo, hi]`` where the slope changes sign, refined by bisection.

    Only the sign of the slope is used: near the crest it behaves like
    ``dist^(1/(p-1))`` and is far too flat for interpolating root finders
    when ``p`` is close to 1.
    """
    t = np.linspace(lo, hi, n_scan)
    s = sol.evaluate_slope(t)
    flips = np.nonzero(np.sign(s[:-1]) * np.sign(s[1:]) <= 0)[0]
    if flips.size == 0:
        raise ValueError("slope keeps its sign on the scanned interval")
    i = int(flips[0])
    if s[i] == 0.0:
        return float(t[i])
    if s[i + 1] == 0.0:
        return float(t[i + 1])
    return bisect(
        lambda x: float(np.sign(sol.evaluate_slope(x))),
        t[i],
        t[i + 1],
        xtol=1e-15,
        rtol=4 * np.finfo(float).eps,
        maxiter=200,
    )


def plateau_halfwidth(sol: PiecewisePSolution, t_peak: float, rel: float = 1e-12) -> float:
    """Half-width of the stretch around ``t_peak`` where ``|u| >= (1 - rel) |u(t_peak)|``.

    Close to ``p = 1`` the principal eigenfunction is flat to machine
    precision over a wide stretch, and any maximizer inside it is as good
    as the crest itself.
    """
    L = sol.params.L
    top = abs(sol.evaluate(t_peak))

    def f(t):
        return abs(sol.evaluate(t)) - (1.0 - rel) * top

    lo = brentq(f, 0.0, t_peak, xtol=1e-15) if t_peak > 0.0 else t_peak
    hi = brentq(f, t_peak, L, xtol=1e-15) if t_peak < L else t_peak
    return max(t_peak - lo, hi - t_peak)


def fucik_shoot_errors(params: ProblemParams, mu: float, nu: float, start_sign: int, P: int, N: int):
    """Shoot at ``(mu, nu)`` and measure it against the cover.

    Returns ``(end_error, hump_mismatch, gap_error, drift)`` where
    ``end_error = |u(L)| / max|u|``, ``hump_mismatch`` is 0 when the shot has
    exactly ``P`` positive and ``N`` negative humps, and ``gap_error`` is the
    largest deviation of a zero gap from ``l_mu`` / ``l_nu``.
    """
    shot = oracle.shoot(params, mu, nu, float(start_sign))
    end_error = abs(shot.end_value) / shot.max_abs_u
    humps = shot.humps
    counts_ok = humps.count(1) == P and humps.count(-1) == N
    l_mu, l_nu = hump_length(params, mu), hump_length(params, nu)
    gaps = shot.gaps()
    if len(gaps) != len(humps):
        return end_error, 1.0, math.inf, shot.energy_drift
    gap_error = max(abs(g - (l_mu if s > 0 else l_nu)) for g, s in zip(gaps, humps))
    return end_error, 0.0 if counts_ok else 1.0, gap_error, shot.energy_drift


def picone_errors(params: ProblemParams, rng: np.random.Generator, n: int):
    """Largest relative ``|R - P|`` and most negative ``R`` over ``n`` random tuples."""
    worst_rel, min_r = 0.0, math.inf
    for _ in range(n):
        u = rng.uniform(0.0, 10.0)
        v = rng.uniform(1e-3, 10.0)
        du = rng.uniform(-10.0, 10.0)
        dv = rng.uniform(-10.0, 10.0)
        R, P = oracle.picone_residual(params, u, du, v, dv)
        min_r = min(min_r, R)
        if P is not None:
            scale = max(abs(R), abs(P), oracle.picone_scale(params, u, du, v, dv))
            worst_rel = max(worst_rel, abs(R - P) / scale)
    return worst_rel, min_r


def run_suite(params: ProblemParams, seed: int = 0, picone_samples: int = 1000) -> list[CheckResult]:
    """Run every oracle check for ``params``; results come back in a fixed order."""
    rng = np.random.default_rng(seed)
    p, L = params.p, params.L
    lam1 = lambda_1_asym(params)
    out: list[CheckResult] = []

    pi_p = compute_pi_p(p)
    out.append(CheckResult("pi_p_vs_beta_identity", abs(pi_p - pi_p_beta(p)) / pi_p_beta(p), 1e-9))

    lam_shoot, shots = oracle.first_eigenvalue_shooting(params, return_shots=True)
    out.append(CheckResult("lambda1_shooting_rel_error", abs(lam_shoot - lam1) / lam1, 1e-6))

    ray = oracle.rayleigh_minimize(params, n=2000)
    out.append(CheckResult("lambda1_rayleigh_rel_error", abs(ray.value - lam1) / lam1, 1e-3))
    t_peak = L * breakpoint_t0(params)
    flat = plateau_halfwidth(build_principal(params, 1), t_peak) / ray.grid.h
    out.append(CheckResult("rayleigh_argmax_cells", abs(ray.grid.argmax() - t_peak) / ray.grid.h, max(2.0, flat)))
    out.append(CheckResult("rayleigh_sign_changes", float(np.sum(ray.grid.values[1:-1] <= 0.0)), 0.0))

    crest = crest_location(build_principal(params, 1), 0.0, L)
    out.append(CheckResult("principal_crest_offset", abs(crest - L * breakpoint_t0(params)), 1e-9))
    trough = crest_location(build_principal(params, -1), 0.0, L)
    out.append(CheckResult("principal_trough_offset", abs(trough - L * (1.0 - breakpoint_t0(params))), 1e-9))

    worst = 0.0
    for k in (1, 2, 3):
        lam_k = lambda_k_asym(params, k)
        worst = max(worst, oracle.weak_residual(params, build_kth(params, k), lam_k, lam_k))
    out.append(CheckResult("kth_weak_residual_max", worst, 1e-6))

    end_err = hump_err = gap_err = 0.0
    drift = max(s.energy_drift for s in shots)
    for curve in all_curves(3):
        bound = curve_asymptote(params, curve)
        for pt in sample_fucik_curve(params, curve, FUCIK_MU_RANGE[0] * bound, FUCIK_MU_RANGE[1] * bound, 2):
            start = 1 if curve.P >= curve.N else -1
            cover = build_cover(params, pt.mu, pt.nu, start)
            e, hm, g, d = fucik_shoot_errors(params, pt.mu, pt.nu, cover.start_sign, curve.P, curve.N)
            end_err, hump_err, gap_err = max(end_err, e), max(hump_err, hm), max(gap_err, g)
            drift = max(drift, d)
    out.append(CheckResult("fucik_shoot_end_value", end_err, 1e-6))
    out.append(CheckResult("fucik_shoot_hump_count_mismatch", hump_err, 0.0))
    out.append(CheckResult("fucik_shoot_gap_error", gap_err, 1e-6))

    out.append(CheckResult("shooting_energy_drift", drift, drift_bound(p)))

    rel, min_r = picone_errors(params, rng, picone_samples)
    out.append(CheckResult("picone_R_minus_P_rel", rel, 1e-10))
    out.append(CheckResult("picone_R_negative_part", max(0.0, -min_r), 1e-12))
    return out
