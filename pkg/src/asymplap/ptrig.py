"""Generalized p-trigonometry.

``sin_p`` is the increasing inverse of

    F_p(x) = int_0^x (1 - s^p)^(-1/p) ds,   0 <= x <= 1,

on ``[0, pi_p / 2]``, extended to the real line by ``sin_p(pi_p - s) = sin_p(s)``,
oddness and ``2 pi_p`` periodicity. ``pi_p = 2 F_p(1)``.

Inversion works on two branches. Below ``x = 1/2`` it solves ``F_p(x) = s``
directly. Above it solves for the gap ``delta = 1 - x`` from the remaining
arclength ``pi_p/2 - s``, so the slope ``(1 - x^p)^(1/p)`` keeps full relative
precision all the way up to the crest.
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError
from .quadrature import integrate, integrate_adaptive

P_MIN = 1.05
P_MAX = 20.0
DEFAULT_RESOLUTION = 4096
MIN_RESOLUTION = 64
TABLE_FORMAT_VERSION = 1

# fixed rule for the many small inversion integrals
_H_INVERT = 1.0 / 16.0
_NEWTON_MAX_ITER = 60


def check_exponent(p: float) -> float:
    p = float(p)
    if not (P_MIN <= p <= P_MAX) or math.isnan(p):
        raise DomainError(f"exponent p={p!r} outside the supported range [{P_MIN}, {P_MAX}]")
    return p


_LOG_TINY = math.log(np.finfo(float).tiny)


def _one_minus_pow_from_gap(p: float, gap):
    """``1 - (1 - gap)^p`` without cancellation."""
    with np.errstate(divide="ignore"):
        return -np.expm1(p * np.log1p(-gap))


@lru_cache(maxsize=64)
def compute_pi_p(p: float) -> float:
    """Return ``pi_p = 2 int_0^1 (1 - t^p)^(-1/p) dt``.

    Supported for ``p`` in ``[1.05, 20]``. The integral is evaluated by
    adaptive tanh-sinh quadrature, with ``1 - t^p`` formed from the exact
    distance to the singular endpoint.
    """
    p = check_exponent(p)

    def f(t, da, db):
        return _one_minus_pow_from_gap(p, db) ** (-1.0 / p)

    return 2.0 * integrate_adaptive(f, 0.0, 1.0)


def lambda_k_symmetric(p: float, L: float, k: int) -> float:
    """k-th Dirichlet eigenvalue ``(p - 1) (k pi_p / L)^p`` of ``-Delta_p`` on (0, L)."""
    if int(k) != k or k < 1:
        raise DomainError(f"eigenvalue index must be a positive integer, got {k!r}")
    if not L > 0:
        raise DomainError(f"interval length must be positive, got {L!r}")
    return (p - 1.0) * (k * compute_pi_p(p) / L) ** p


def _arclength_lower(p: float, x):
    """``F_p(x)`` for ``0 <= x <= 1/2``."""

    def f(t, da, db):
        return (1.0 - t**p) ** (-1.0 / p)

    return integrate(f, 0.0, x, _H_INVERT)


def _arclength_upper(p: float, delta):
    """``pi_p/2 - F_p(1 - delta)`` for ``0 <= delta <= 1/2``.

    With ``e = delta w`` and ``1 - (1 - e)^p = e q(e)`` the integral becomes
    ``delta^(1-1/p) int_0^1 w^(-1/p) q(delta w)^(-1/p) dw``. The factor
    ``w^(-1/p) p^(-1/p)`` is integrated exactly, so the quadrature only sees
    a bounded remainder and tiny ``delta`` (down to underflow) stays accurate.
    """
    delta = np.asarray(delta, dtype=float)
    inv = 1.0 / p
    lead = p**-inv

    def f(w, da, db):
        e = delta[..., None] * da
        with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
            q = np.where(e > 1e-200, _one_minus_pow_from_gap(p, e) / e, p)
            return da**-inv * (q**-inv - lead)

    zeros = np.zeros_like(delta)
    rest = integrate(f, zeros, zeros + 1.0, _H_INVERT)
    out = delta ** (1.0 - inv) * (lead / (1.0 - inv) + rest)
    return float(out) if out.ndim == 0 else out


def _safeguarded_newton(fun, z0, lo, hi, tol):
    """Vectorized Newton iteration kept inside ``[lo, hi]`` by bisection.

    ``fun(z, idx)`` returns ``(residual, derivative)`` of an increasing
    function for the targets selected by ``idx``.
    """
    z = np.clip(z0, lo, hi)
    lo = lo.copy()
    hi = hi.copy()
    idx = np.arange(z.size)
    for _ in range(_NEWTON_MAX_ITER):
        if idx.size == 0:
            break
        zi = z[idx]
        res, der = fun(zi, idx)
        zl = np.where(res < 0.0, zi, lo[idx])
        zh = np.where(res > 0.0, zi, hi[idx])
        with np.errstate(divide="ignore", invalid="ignore"):
            z_new = zi - res / der
        bad = ~np.isfinite(z_new) | (z_new < zl) | (z_new > zh)
        z_new = np.where(bad, 0.5 * (zl + zh), z_new)
        z_new = np.where(res == 0.0, zi, z_new)
        scale = np.maximum(1.0, np.abs(z_new))
        done = (np.abs(z_new - zi) <= tol * scale) | ((zh - zl) <= tol * scale)
        z[idx] = z_new
        lo[idx] = zl
        hi[idx] = zh
        idx = idx[~done]
    return z


@dataclass(frozen=True, eq=False)
class PTrigTable:
    """Tabulated rising branch of ``sin_p`` together with ``pi_p`` and ``c_p``.

    ``x_nodes``/``s_nodes`` are the amplitude/arclength pairs, strictly
    increasing from ``(0, 0)`` to ``(1, pi_p/2)``. ``delta_nodes = 1 - x`` and
    ``d_nodes = pi_p/2 - s`` are the same nodes measured from the crest.
    ``c_p`` normalizes ``phi_p(t) = c_p sin_p(pi_p t)`` in ``L^p(0, 1)``.
    """

    p: float
    pi_p: float
    resolution: int
    x_nodes: np.ndarray = field(repr=False)
    s_nodes: np.ndarray = field(repr=False)
    delta_nodes: np.ndarray = field(repr=False)
    d_nodes: np.ndarray = field(repr=False)
    s_half: float = field(repr=False)
    c_p: float = math.nan

    @property
    def nodes(self) -> np.ndarray:
        """``(resolution, 2)`` array of ``(x, F_p(x))`` pairs."""
        return np.column_stack([self.x_nodes, self.s_nodes])

    @property
    def half_pi_p(self) -> float:
        return 0.5 * self.pi_p

    def __post_init__(self):
        for name in ("x_nodes", "s_nodes", "delta_nodes", "d_nodes"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        low = self.x_nodes < 0.5
        s_low = np.append(self.s_nodes[low], self.s_half)
        x_low = np.append(self.x_nodes[low], 0.5)
        up = (self.delta_nodes < 0.5) & (self.delta_nodes > 0.0)
        logd = np.log(np.append(self.d_nodes[up][::-1], self.half_pi_p - self.s_half))
        logdel = np.log(np.append(self.delta_nodes[up][::-1], 0.5))
        object.__setattr__(self, "_lower", (PchipInterpolator(s_low, x_low), s_low, x_low))
        object.__setattr__(self, "_upper", (PchipInterpolator(logd, logdel), logd, logdel))


def _node_gaps(p: float, resolution: int) -> np.ndarray:
    # delta_i = (1 - i/n)^m with m = p/(p-1) spreads the nodes evenly in
    # arclength near the crest; m is capped so 1 - delta stays distinct in
    # double precision
    n = resolution - 1
    frac = (n - np.arange(resolution, dtype=float)) / n
    return frac ** min(p / (p - 1.0), 2.0)


def build_table(p: float, resolution: int = DEFAULT_RESOLUTION) -> PTrigTable:
    """Tabulate ``F_p`` and compute ``pi_p`` and the normalization ``c_p``."""
    p = check_exponent(p)
    if int(resolution) != resolution or resolution < MIN_RESOLUTION:
        raise DomainError(f"table resolution must be an integer >= {MIN_RESOLUTION}, got {resolution!r}")
    resolution = int(resolution)
    pi_p = compute_pi_p(p)
    half = 0.5 * pi_p

    delta = _node_gaps(p, resolution)
    x = 1.0 - delta
    x[0], delta[0] = 0.0, 1.0
    x[-1], delta[-1] = 1.0, 0.0
    s = np.empty(resolution)
    d = np.empty(resolution)
    low = x <= 0.5
    s[low] = _arclength_lower(p, x[low])
    d[low] = half - s[low]
    d[~low] = _arclength_upper(p, delta[~low])
    s[~low] = half - d[~low]
    s[0], d[0] = 0.0, half
    s[-1], d[-1] = half, 0.0
    s_half = float(_arclength_lower(p, 0.5))

    table = PTrigTable(
        p=p,
        pi_p=pi_p,
        resolution=resolution,
        x_nodes=x,
        s_nodes=s,
        delta_nodes=delta,
        d_nodes=d,
        s_half=s_half,
    )
    return dataclasses.replace(table, c_p=_normalization(table))


def _normalization(table: PTrigTable) -> float:
    p = table.p

    def f(t, da, db):
        return np.abs(sin_p(table, table.pi_p * t)) ** p

    # |sin_p(pi_p t)|^p is symmetric about t = 1/2
    integral = 2.0 * integrate_adaptive(f, 0.0, 0.5, rel_tol=1e-14)
    return integral ** (-1.0 / p)


@lru_cache(maxsize=32)
def _cached_table(p: float, resolution: int) -> PTrigTable:
    cache_dir = os.environ.get("ASYMPLAP_TABLE_CACHE")
    if cache_dir:
        path = Path(cache_dir) / f"ptrig_{float(p).hex()}_{resolution}.npz"
        if path.exists():
            return load_table(path)
        table = build_table(p, resolution)
        path.parent.mkdir(parents=True, exist_ok=True)
        save_table(table, path)
        return table
    return build_table(p, resolution)


def default_resolution() -> int:
    raw = os.environ.get("ASYMPLAP_RESOLUTION")
    return int(raw) if raw else DEFAULT_RESOLUTION


def get_table(p: float, resolution: int | None = None) -> PTrigTable:
    """Shared, memoized table for ``p`` (honours ``ASYMPLAP_TABLE_CACHE``)."""
    p = check_exponent(p)
    if resolution is None:
        resolution = default_resolution()
    return _cached_table(p, int(resolution))


def save_table(table: PTrigTable, path) -> None:
    """Write ``table`` to an ``.npz`` file; float64 arrays round-trip bit-exactly."""
    with open(path, "wb") as fh:
        np.savez(
            fh,
            format_version=np.int64(TABLE_FORMAT_VERSION),
            p=np.float64(table.p),
            pi_p=np.float64(table.pi_p),
            resolution=np.int64(table.resolution),
            x_nodes=table.x_nodes,
            s_nodes=table.s_nodes,
            delta_nodes=table.delta_nodes,
            d_nodes=table.d_nodes,
            s_half=np.float64(table.s_half),
            c_p=np.float64(table.c_p),
        )


def load_table(path) -> PTrigTable:
    with np.load(path) as data:
        version = int(data["format_version"])
        if version != TABLE_FORMAT_VERSION:
            raise ValueError(f"unsupported table format version {version}")
        return PTrigTable(
            p=float(data["p"]),
            pi_p=float(data["pi_p"]),
            resolution=int(data["resolution"]),
            x_nodes=data["x_nodes"].copy(),
            s_nodes=data["s_nodes"].copy(),
            delta_nodes=data["delta_nodes"].copy(),
            d_nodes=data["d_nodes"].copy(),
            s_half=float(data["s_half"]),
            c_p=float(data["c_p"]),
        )


def _invert(table: PTrigTable, r: np.ndarray, d: np.ndarray):
    """Amplitude ``x`` and slope ``y`` on the rising branch.

    ``r`` is the arclength in ``[0, pi_p/2]`` and ``d = pi_p/2 - r`` its
    distance to the crest (passed separately to keep it exact).
    """
    p = table.p
    x = np.empty_like(r)
    y = np.empty_like(r)

    low = r <= table.s_half
    if low.any():
        rl = r[low]
        interp, s_tab, x_tab = table._lower
        i = np.clip(np.searchsorted(s_tab, rl), 1, len(s_tab) - 1)

        def fun(z, idx):
            return _arclength_lower(p, z) - rl[idx], (1.0 - z**p) ** (-1.0 / p)

        xl = _safeguarded_newton(fun, interp(rl), x_tab[i - 1], x_tab[i], 4e-16)
        x[low] = xl
        y[low] = (1.0 - xl**p) ** (1.0 / p)

    up = ~low
    if up.any():
        du = d[up]
        delta = np.zeros_like(du)
        pos = du > 0.0
        if pos.any():
            interp, logd_tab, logdel_tab = table._upper
            logd = np.log(du[pos])
            below = logd < logd_tab[0]
            # under the last node the arclength behaves like delta^((p-1)/p)
            guess = np.where(
                below,
                logdel_tab[0] + (p / (p - 1.0)) * (logd - logd_tab[0]),
                interp(np.clip(logd, logd_tab[0], logd_tab[-1])),
            )
            i = np.clip(np.searchsorted(logd_tab, logd), 1, len(logd_tab) - 1)
            lo = np.where(below, _LOG_TINY, logdel_tab[i - 1])
            hi = np.where(below, logdel_tab[0], logdel_tab[i])

            def fun(z, idx):
                dl = np.exp(z)
                g = _arclength_upper(p, dl)
                with np.errstate(divide="ignore", invalid="ignore"):
                    slope = dl * _one_minus_pow_from_gap(p, dl) ** (-1.0 / p) / g
                    return np.log(g) - logd[idx], slope

            delta[pos] = np.exp(_safeguarded_newton(fun, guess, lo, hi, 4e-16))
        x[up] = 1.0 - delta
        y[up] = _one_minus_pow_from_gap(p, delta) ** (1.0 / p)
    return x, y


def sin_p_pair(table: PTrigTable, s):
    """Return ``(sin_p(s), sin_p'(s))`` for scalar or array ``s``."""
    s_arr = np.asarray(s, dtype=float)
    flat = np.atleast_1d(s_arr).ravel()
    sign = np.where(flat < 0.0, -1.0, 1.0)
    a = np.abs(flat)
    period = 2.0 * table.pi_p
    a = np.mod(a, period)
    second_half = a >= table.pi_p
    a = np.where(second_half, a - table.pi_p, a)
    falling = a > table.half_pi_p
    d = np.abs(table.half_pi_p - a)
    r = table.half_pi_p - d
    x, y = _invert(table, r, d)
    val_sign = np.where(second_half, -1.0, 1.0)
    value = sign * val_sign * x
    slope = val_sign * np.where(falling, -1.0, 1.0) * y
    if s_arr.ndim == 0:
        return float(value[0]), float(slope[0])
    return value.reshape(s_arr.shape), slope.reshape(s_arr.shape)


def sin_p(table: PTrigTable, s):
    """The p-sine: odd, ``2 pi_p``-periodic, values in ``[-1, 1]``."""
    return sin_p_pair(table, s)[0]


def sin_p_prime(table: PTrigTable, s):
    """Derivative of ``sin_p``; ``|sin_p|^p + |sin_p'|^p = 1``."""
    return sin_p_pair(table, s)[1]


def _check_unit(t):
    t_arr = np.asarray(t, dtype=float)
    if np.any(~((t_arr >= 0.0) & (t_arr <= 1.0))):
        raise DomainError("phi_p is defined for 0 <= t <= 1")
    return t_arr


def phi_p(table: PTrigTable, t):
    """Positive principal eigenfunction ``c_p sin_p(pi_p t)`` of ``-Delta_p`` on (0, 1)."""
    return table.c_p * sin_p(table, table.pi_p * _check_unit(t))


def phi_p_pair(table: PTrigTable, t):
    """``(phi_p(t), phi_p'(t))``."""
    v, dv = sin_p_pair(table, table.pi_p * _check_unit(t))
    return table.c_p * v, table.c_p * table.pi_p * dv
