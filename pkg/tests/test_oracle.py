import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymplap.eigenfunctions import build_fucik_solution, build_kth, build_principal
from asymplap.errors import AccuracyError, DomainError, SearchError
from asymplap.oracle import (
    GridFunction,
    first_eigenvalue_shooting,
    flux,
    flux_inverse,
    hamiltonian,
    picone_residual,
    picone_scale,
    rayleigh_minimize,
    shoot,
    weak_residual,
)
from asymplap.spectra import (
    FucikCurveId,
    ProblemParams,
    breakpoint_t0,
    curve_asymptote,
    hump_length,
    lambda_1_asym,
    sample_fucik_curve,
)
from asymplap.verify import drift_bound

PI2 = math.pi**2


class TestFlux:
    def test_examples(self):
        params = ProblemParams(3, 2, 1, 1)
        assert flux(params, 2.0) == 8.0 * 4.0
        assert flux(params, -2.0) == -4.0
        assert flux(params, 0.0) == 0.0
        assert flux_inverse(params, 32.0) == pytest.approx(2.0, rel=1e-15)
        assert flux_inverse(params, -4.0) == pytest.approx(-2.0, rel=1e-15)

    @pytest.mark.parametrize("p", [1.05, 1.5, 2.0, 4.0, 20.0])
    def test_round_trip(self, p):
        params = ProblemParams(p, 0.7, 1.9, 1)
        rng = np.random.default_rng(3)
        v = rng.uniform(-10, 10, 1000)
        back = flux(params, flux_inverse(params, v))
        assert np.max(np.abs(back - v) / np.abs(v)) < 1e-12

    def test_hamiltonian_examples(self):
        params = ProblemParams(2, 1, 1, 1)
        assert hamiltonian(params, PI2, PI2, 0.0, math.pi) == pytest.approx(PI2 / 2)
        assert hamiltonian(params, PI2, PI2, 1.0, 0.0) == pytest.approx(PI2 / 2)
        assert hamiltonian(params, 3.0, 5.0, -2.0, 0.0) == pytest.approx(10.0)
        assert hamiltonian(ProblemParams(2, 1, 2, 1), 1.0, 1.0, 0.0, -4.0) == pytest.approx(2.0)
        assert hamiltonian(params, 1.0, 1.0, np.zeros(3), np.zeros(3)).shape == (3,)


class TestShoot:
    def test_symmetric_p2_first_zero(self):
        res = shoot(ProblemParams(2, 1, 1, 1), PI2, PI2, 1.0, t_end=1.5, max_zeros=1)
        assert abs(res.zeros[0] - 1.0) < 1e-8
        assert res.humps == [1]
        assert res.energy_drift < 1e-10

    def test_asymmetric_crest_and_zeros(self):
        params = ProblemParams(2, 1, 3, 1)
        lam = lambda_1_asym(params)
        res = shoot(params, lam, lam, 1.0, t_end=1.6)
        assert np.allclose(res.zeros[:1], [1.0], atol=1e-8)
        assert abs(res.max_abs_u - 1.0 / (2 * math.pi)) < 1e-8

    def test_fucik_example(self):
        res = shoot(ProblemParams(2, 1, 1, 1), 4 * PI2, PI2, 1.0, t_end=1.6)
        assert np.allclose(res.zeros, [0.5, 1.5], atol=1e-8)
        assert res.humps == [1, -1, 1]
        assert np.allclose(res.gaps(), [0.5, 1.0, 0.1], atol=1e-8)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_homogeneity(self, p):
        params = ProblemParams(p, 1, 2, 1)
        a = shoot(params, 300.0, 90.0, 1.0, t_end=2.0)
        b = shoot(params, 300.0, 90.0, 2.0, t_end=2.0)
        assert len(a.zeros) == len(b.zeros) >= 2
        assert np.max(np.abs(np.array(a.zeros) - np.array(b.zeros))) < 1e-9
        assert b.max_abs_u == pytest.approx(2.0 * a.max_abs_u, rel=1e-8)

    def test_negative_start(self):
        res = shoot(ProblemParams(2, 1, 1, 1), PI2, 4 * PI2, -1.0)
        assert res.humps == [-1, 1]
        assert np.allclose(res.zeros, [0.5], atol=1e-8)

    @pytest.mark.parametrize("p, a, b", [(2.0, 1, 3), (1.5, 2, 1), (3.0, 1, 2)])
    def test_gaps_on_curves(self, p, a, b):
        params = ProblemParams(p, a, b, 1)
        for curve in (FucikCurveId(2, 1), FucikCurveId(2, 2), FucikCurveId(2, 3)):
            bound = curve_asymptote(params, curve)
            for pt in sample_fucik_curve(params, curve, 1.5 * bound, 6 * bound, 2):
                start = 1 if curve.P >= curve.N else -1
                res = shoot(params, pt.mu, pt.nu, float(start))
                assert abs(res.end_value) < 1e-6 * res.max_abs_u
                assert res.humps.count(1) == curve.P and res.humps.count(-1) == curve.N
                want = [hump_length(params, pt.mu if s > 0 else pt.nu) for s in res.humps]
                assert np.max(np.abs(np.array(res.gaps()) - want)) < 1e-6
                assert res.energy_drift < drift_bound(p)

    @pytest.mark.parametrize("p", [1.05, 1.5, 2.0, 3.0, 20.0])
    def test_drift_bound(self, p):
        params = ProblemParams(p, 1, 2, 1)
        lam = lambda_1_asym(params)
        assert shoot(params, 4 * lam, 4 * lam).energy_drift < drift_bound(p)

    @pytest.mark.parametrize("mu, step", [(1e4, 0.5), (1e4, 0.005), (1e12, 1.0)])
    def test_coarse_step_trips_guard(self, mu, step):
        with pytest.raises(AccuracyError, match="reduce the step"):
            shoot(ProblemParams(2, 1, 1, 1), mu, mu, 1.0, step=step)

    def test_zero_at_end_closes_hump(self):
        res = shoot(ProblemParams(2, 1, 1, 1), PI2, PI2, 1.0)
        assert res.zeros == [] and res.humps == [1]
        assert abs(res.end_value) < 1e-12

    @pytest.mark.parametrize("kwargs", [dict(s0=0.0), dict(mu=-1.0), dict(step=-0.1), dict(t_end=0.0)])
    def test_bad_input(self, kwargs):
        args = dict(params=ProblemParams(), mu=PI2, nu=PI2)
        args.update(kwargs)
        with pytest.raises(DomainError):
            shoot(**args)


class TestFirstEigenvalueShooting:
    @pytest.mark.parametrize("p, a, b", [(2.0, 1, 1), (1.5, 1, 3), (3.0, 2, 0.5)])
    def test_matches_closed_form(self, p, a, b):
        params = ProblemParams(p, a, b, 1)
        lam = lambda_1_asym(params)
        assert abs(first_eigenvalue_shooting(params) - lam) < 1e-6 * lam

    def test_scaling_in_length(self):
        params = ProblemParams(2.5, 1, 2, 1)
        one = first_eigenvalue_shooting(params)
        two = first_eigenvalue_shooting(params.with_length(2.0))
        assert two == pytest.approx(one / 2**2.5, rel=1e-8)

    def test_returns_shots(self):
        value, shots = first_eigenvalue_shooting(ProblemParams(), return_shots=True)
        assert value == pytest.approx(PI2, rel=1e-9)
        assert len(shots) > 5 and all(s.energy_drift < 1e-7 for s in shots)

    def test_bracket_failure(self):
        with pytest.raises(SearchError):
            first_eigenvalue_shooting(ProblemParams(), lam_range=(1e-6, 1.0))

    def test_bad_tol(self):
        with pytest.raises(DomainError):
            first_eigenvalue_shooting(ProblemParams(), tol=0.0)


class TestRayleigh:
    @pytest.mark.parametrize("p, a, b", [(2.0, 1, 3), (2.0, 1, 1), (3.0, 2, 2)])
    def test_close_to_closed_form(self, p, a, b):
        params = ProblemParams(p, a, b, 1)
        lam = lambda_1_asym(params)
        res = rayleigh_minimize(params, n=2000)
        assert abs(res.value - lam) < 1e-3 * lam
        assert abs(res.grid.argmax() - breakpoint_t0(params)) < 2 * res.grid.h
        assert np.all(res.grid.values[1:-1] > 0)
        assert res.converged

    def test_history_decreases(self):
        res = rayleigh_minimize(ProblemParams(1.5, 1, 3, 1), n=400)
        assert np.all(np.diff(res.history) <= 0)
        value, grid = res
        assert value == res.history[-1] and grid is res.grid

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_error_shrinks_under_refinement(self, p):
        params = ProblemParams(p, 1, 3, 1)
        lam = lambda_1_asym(params)
        errors = [abs(rayleigh_minimize(params, n=n).value - lam) for n in (250, 500, 1000)]
        assert errors[0] > errors[1] > errors[2]

    def test_bad_grid(self):
        with pytest.raises(DomainError):
            rayleigh_minimize(ProblemParams(), n=32)

    def test_grid_function(self):
        vals = np.sin(np.linspace(0, np.pi, 33))
        vals[-1] = 0.0
        g = GridFunction(2.0, vals)
        assert g.n == 32 and g.h == 2.0 / 32
        assert g.evaluate(1.0) == pytest.approx(1.0)
        with pytest.raises(DomainError):
            GridFunction(1.0, np.ones(33))
        with pytest.raises(DomainError):
            GridFunction(1.0, np.zeros(10))


class TestWeakResidual:
    @pytest.mark.parametrize("p, a, b", [(2.0, 1, 3), (1.5, 2, 1), (4.0, 1, 1)])
    def test_discriminates(self, p, a, b):
        params = ProblemParams(p, a, b, 1)
        lam = lambda_1_asym(params)
        sol = build_principal(params)
        assert weak_residual(params, sol, lam, lam) < 1e-6
        assert weak_residual(params, sol, 1.1 * lam, 1.1 * lam) > 1e-3

    def test_wrong_mu_nu_split(self):
        params = ProblemParams(2, 1, 1, 1)
        sol = build_fucik_solution(params, 4 * PI2, 16 * PI2, -1)
        assert weak_residual(params, sol, 4 * PI2, 16 * PI2) < 1e-6
        assert weak_residual(params, sol, 16 * PI2, 4 * PI2) > 1e-3

    def test_swapped_conductivities_fail(self):
        params = ProblemParams(2, 1, 3, 1)
        lam = lambda_1_asym(params)
        sol = build_kth(ProblemParams(2, 3, 1, 1), 1)
        assert weak_residual(params, sol, lam, lam) > 1e-3


class TestPicone:
    @pytest.mark.parametrize("p, a, b", [(2.0, 1, 3), (1.5, 2, 1), (3.0, 1, 2), (1.05, 1, 1), (20.0, 0.9, 1.1)])
    def test_identity_and_sign(self, p, a, b):
        params = ProblemParams(p, a, b, 1)
        rng = np.random.default_rng(11)
        worst, min_r = 0.0, math.inf
        for _ in range(2000):
            u, v = rng.uniform(0, 10), rng.uniform(1e-3, 10)
            du, dv = rng.uniform(-10, 10, 2)
            R, P = picone_residual(params, u, du, v, dv)
            min_r = min(min_r, R)
            if P is not None:
                ref = max(abs(R), abs(P), picone_scale(params, u, du, v, dv))
                worst = max(worst, abs(R - P) / ref)
        assert worst < 1e-10
        assert min_r >= -1e-12

    @settings(max_examples=200, deadline=None)
    @given(
        u=st.floats(0.0, 10.0),
        v=st.floats(1e-3, 10.0),
        du=st.floats(-10.0, 10.0),
        dv=st.floats(-10.0, 10.0),
        p=st.floats(1.05, 8.0),
    )
    def test_nonnegative_property(self, u, v, du, dv, p):
        params = ProblemParams(p, 1.0, 2.5, 1.0)
        R, _ = picone_residual(params, u, du, v, dv)
        assert R >= -1e-12 * max(1.0, picone_scale(params, u, du, v, dv))

    def test_proportional_pair_vanishes(self):
        params = ProblemParams(3, 1, 2, 1)
        R, P = picone_residual(params, 2.0, 3.0, 1.0, 1.5)
        assert abs(R) < 1e-12 and abs(P) < 1e-12
        R, P = picone_residual(params, 2.0, -3.0, 1.0, -1.5)
        assert abs(R) < 1e-12 and abs(P) < 1e-12

    def test_flat_v_has_no_p(self):
        R, P = picone_residual(ProblemParams(2, 1, 1, 1), 1.0, 2.0, 1.0, 0.0)
        assert P is None and R == 4.0

    @pytest.mark.parametrize("u, v", [(-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
    def test_bad_input(self, u, v):
        with pytest.raises(DomainError):
            picone_residual(ProblemParams(), u, 1.0, v, 1.0)
