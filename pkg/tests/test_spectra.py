import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymplap.errors import AsymptoteError, DomainError, InvalidCurveError
from asymplap.ptrig import lambda_k_symmetric
from asymplap.spectra import (
    Branch,
    FucikCurveId,
    FucikPoint,
    MembershipKind,
    ProblemParams,
    all_curves,
    breakpoint_t0,
    classical_branch_of,
    curve_asymptote,
    curve_residual,
    dirichlet_spectrum,
    fucik_membership,
    fucik_nu_on_curve,
    lambda_1_asym,
    lambda_k_asym,
    sample_fucik_curve,
)

PI2 = math.pi**2
# 16 pi_3^3 with pi_3 = 2 pi / (3 sin(pi/3)) = 4 pi / (3 sqrt 3)
LAMBDA_P3_A2_B2 = 16.0 * (4.0 * math.pi / (3.0 * math.sqrt(3.0))) ** 3


class TestParams:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(p=1.0), dict(p=25.0), dict(a=0.0), dict(b=-1.0), dict(L=0.0), dict(L=math.inf), dict(a=math.nan)],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(DomainError):
            ProblemParams(**kwargs)

    def test_defaults_and_coercion(self):
        params = ProblemParams(p=3, a=2, b=1, L=4)
        assert (params.p, params.a, params.b, params.L) == (3.0, 2.0, 1.0, 4.0)
        assert ProblemParams() == ProblemParams(2.0, 1.0, 1.0, 1.0)
        assert params.with_length(1.0).L == 1.0

    def test_point_and_curve_validation(self):
        with pytest.raises(DomainError):
            FucikPoint(0.0, 1.0)
        with pytest.raises(InvalidCurveError):
            FucikCurveId(1, 3)
        with pytest.raises(InvalidCurveError):
            FucikCurveId(0, 1)


class TestDirichlet:
    def test_lambda_1_examples(self):
        assert lambda_1_asym(ProblemParams(2, 1, 1, 1)) == pytest.approx(PI2, rel=1e-14)
        assert lambda_1_asym(ProblemParams(2, 1, 3, 1)) == pytest.approx(4 * PI2, rel=1e-14)
        assert lambda_1_asym(ProblemParams(3, 2, 2, 1)) == pytest.approx(LAMBDA_P3_A2_B2, rel=1e-12)
        assert round(lambda_1_asym(ProblemParams(3, 2, 2, 1)), 2) == 226.31

    def test_breakpoint(self):
        assert breakpoint_t0(ProblemParams(a=1, b=3)) == 0.25
        assert breakpoint_t0(ProblemParams(a=2.5, b=2.5)) == 0.5
        assert breakpoint_t0(ProblemParams(a=3, b=1)) == 0.75

    def test_spectrum_examples(self):
        evs = dirichlet_spectrum(ProblemParams(2, 1, 3, 1), 3)
        assert [ev.k for ev in evs] == [1, 2, 3]
        assert evs[1].value == pytest.approx(16 * PI2, rel=1e-14)
        assert dirichlet_spectrum(ProblemParams(2, 1, 1, 1), 3)[2].value == pytest.approx(9 * PI2, rel=1e-14)
        s15 = dirichlet_spectrum(ProblemParams(1.5, 1, 2, 1), 2)
        assert s15[1].value / s15[0].value == pytest.approx(2**1.5, rel=1e-14)

    @pytest.mark.parametrize("p, a, b, L", [(1.5, 0.3, 2.0, 0.7), (2.0, 1.0, 3.0, 1.0), (7.0, 4.0, 0.5, 3.0)])
    def test_spectrum_structure(self, p, a, b, L):
        params = ProblemParams(p, a, b, L)
        evs = dirichlet_spectrum(params, 8)
        values = [ev.value for ev in evs]
        assert all(x < y for x, y in zip(values, values[1:]))
        for ev in evs:
            expected = (ev.k * (a + b) / 2) ** p * lambda_k_symmetric(p, L, 1)
            assert abs(ev.value - expected) <= 1e-12 * expected
            assert abs(ev.value - ev.k**p * values[0]) <= 1e-12 * ev.value
            assert ev.value == pytest.approx(lambda_k_asym(params, ev.k), rel=1e-15)

    @pytest.mark.parametrize("k", [0, -2, 2.5])
    def test_bad_index(self, k):
        with pytest.raises(DomainError):
            lambda_k_asym(ProblemParams(), k)
        with pytest.raises(DomainError):
            dirichlet_spectrum(ProblemParams(), k)

    @pytest.mark.parametrize("p, a, b", [(1.5, 1, 3), (2, 2, 0.5), (4.5, 0.7, 0.7)])
    def test_scaling_in_length(self, p, a, b):
        ref = lambda_1_asym(ProblemParams(p, a, b, 1.0))
        for L in (0.5, 1.0, 2.0, math.pi):
            assert abs(lambda_1_asym(ProblemParams(p, a, b, L)) * L**p - ref) <= 1e-12 * ref

    @pytest.mark.parametrize("p, c", [(1.5, 0.3), (2.0, 2.0), (3.5, 1.7)])
    def test_symmetric_collapse(self, p, c):
        params = ProblemParams(p, c, c, 1.3)
        expected = c**p * lambda_k_symmetric(p, 1.3, 1)
        assert abs(lambda_1_asym(params) - expected) <= 1e-12 * expected

    @settings(max_examples=100, deadline=None)
    @given(
        st.floats(1.05, 20.0),
        st.floats(0.01, 100.0),
        st.floats(0.01, 100.0),
        st.floats(0.01, 100.0),
    )
    def test_swap_symmetry(self, p, a, b, L):
        assert lambda_1_asym(ProblemParams(p, a, b, L)) == lambda_1_asym(ProblemParams(p, b, a, L))


class TestCurves:
    SYM_PI = ProblemParams(2.0, 1.0, 1.0, math.pi)

    def test_nu_examples(self):
        assert fucik_nu_on_curve(self.SYM_PI, FucikCurveId(1, 1), 4.0) == pytest.approx(4.0, rel=1e-13)
        assert fucik_nu_on_curve(self.SYM_PI, FucikCurveId(1, 1), 9.0) == pytest.approx(2.25, rel=1e-13)

    def test_asymptote_error(self):
        with pytest.raises(AsymptoteError) as info:
            fucik_nu_on_curve(self.SYM_PI, FucikCurveId(1, 1), 1.0)
        assert info.value.bound == pytest.approx(1.0, rel=1e-14)
        assert curve_asymptote(self.SYM_PI, FucikCurveId(2, 1)) == pytest.approx(4.0, rel=1e-14)

    def test_sample_symmetric_branch(self):
        params = ProblemParams(2.0, 1.0, 1.0, 1.0)
        lam2 = lambda_k_asym(params, 2)
        pts = sample_fucik_curve(params, FucikCurveId(1, 1), 1.2 * PI2, 50 * PI2, 25)
        assert len(pts) == 25
        for pt in pts:
            assert pt.mu**-0.5 + pt.nu**-0.5 == pytest.approx(2 * lam2**-0.5, rel=1e-12)
        mus = [pt.mu for pt in pts]
        nus = [pt.nu for pt in pts]
        assert np.allclose(np.diff(np.log(mus)), np.log(mus[1] / mus[0]), rtol=1e-12)
        assert all(x > y for x, y in zip(nus, nus[1:]))

    def test_sample_scales_with_conductivities(self):
        sym = ProblemParams(2.0, 1.0, 1.0, 1.0)
        asym = ProblemParams(2.0, 1.0, 3.0, 1.0)
        for curve in all_curves(5):
            lo = 1.5 * curve_asymptote(sym, curve)
            s_pts = sample_fucik_curve(sym, curve, lo, 3 * lo, 6)
            a_pts = sample_fucik_curve(asym, curve, 4 * lo, 12 * lo, 6)
            for s, a in zip(s_pts, a_pts):
                assert a.mu == pytest.approx(4 * s.mu, rel=1e-12)
                assert a.nu == pytest.approx(4 * s.nu, rel=1e-12)

    def test_sample_rejects_bad_ranges(self):
        params = ProblemParams()
        curve = FucikCurveId(1, 1)
        with pytest.raises(AsymptoteError):
            sample_fucik_curve(params, curve, PI2 * 0.9, 100.0, 4)
        with pytest.raises(DomainError):
            sample_fucik_curve(params, curve, 50.0, 40.0, 4)
        with pytest.raises(DomainError):
            sample_fucik_curve(params, curve, 20.0, 40.0, 1)

    @pytest.mark.parametrize("p, a, b", [(1.5, 2.0, 1.0), (2.0, 1.0, 3.0), (3.0, 0.4, 0.9)])
    def test_points_satisfy_equation(self, p, a, b):
        params = ProblemParams(p, a, b, 1.7)
        for curve in all_curves(7):
            bound = curve_asymptote(params, curve)
            for pt in sample_fucik_curve(params, curve, 1.01 * bound, 100 * bound, 9):
                assert abs(curve_residual(params, curve, pt.mu, pt.nu)) < 1e-12

    @pytest.mark.parametrize("p, a, b", [(1.5, 2.0, 1.0), (2.0, 1.0, 3.0), (3.0, 1.0, 1.0)])
    def test_diagonal_consistency(self, p, a, b):
        params = ProblemParams(p, a, b, 1.0)
        for curve in all_curves(6):
            m = curve.P + curve.N
            lam_m = lambda_k_asym(params, m)
            assert abs(fucik_nu_on_curve(params, curve, lam_m) - lam_m) <= 1e-12 * lam_m

    @pytest.mark.parametrize("p, a, b", [(1.5, 2.0, 1.0), (2.0, 1.0, 3.0), (4.0, 1.0, 1.0)])
    def test_branch_equations_agree(self, p, a, b):
        params = ProblemParams(p, a, b, 1.0)
        rng = np.random.default_rng(11)
        for curve in all_curves(7):
            branch, k = classical_branch_of(curve)
            if branch is Branch.EVEN:
                cm, cn, m = 1, 1, 2 * k
                rhs_factor = 2
            elif branch is Branch.ODD_1:
                cm, cn, m = k, k + 1, 2 * k + 1
                rhs_factor = 2 * k + 1
            else:
                cm, cn, m = k + 1, k, 2 * k + 1
                rhs_factor = 2 * k + 1
            lam_m = lambda_k_asym(params, m)
            bound = curve_asymptote(params, curve)
            for mu in bound * np.exp(rng.uniform(0.01, 5.0, 100)):
                # classical form: cm mu^(-1/p) + cn nu^(-1/p) = rhs_factor lambda_m^(-1/p)
                nu = (cn / (rhs_factor * lam_m ** (-1 / p) - cm * mu ** (-1 / p))) ** p
                assert abs(fucik_nu_on_curve(params, curve, mu) - nu) <= 1e-10 * nu


class TestMembership:
    def test_examples(self):
        params = ProblemParams(2.0, 1.0, 1.0, 1.0)
        m = fucik_membership(params, 4 * PI2, 16 * PI2)
        assert m.kind is MembershipKind.ON_CURVE and m.curve == FucikCurveId(1, 2)
        assert fucik_membership(params, lambda_1_asym(params), 17.3).kind is MembershipKind.TRIVIAL_LINE_MU
        assert fucik_membership(params, 17.3, lambda_1_asym(params)).kind is MembershipKind.TRIVIAL_LINE_NU
        assert fucik_membership(params, 2 * PI2, 2 * PI2).kind is MembershipKind.NOT_IN_SPECTRUM

    def test_diagonal_points(self):
        params = ProblemParams(2.0, 1.0, 1.0, 1.0)
        for k in range(2, 11):
            m = fucik_membership(params, k * k * PI2, k * k * PI2)
            assert m.kind is MembershipKind.ON_CURVE
            assert m.curve.P + m.curve.N == k
        for x in (2.0, 5.5, 10.0, 50.0):
            assert fucik_membership(params, x * PI2, x * PI2).kind is MembershipKind.NOT_IN_SPECTRUM

    def test_trivial_line_takes_precedence(self):
        params = ProblemParams(2.0, 1.0, 1.0, 1.0)
        lam = lambda_1_asym(params)
        assert fucik_membership(params, lam, lam).kind is MembershipKind.TRIVIAL_LINE_MU

    def test_tolerance_validation(self):
        with pytest.raises(DomainError):
            fucik_membership(ProblemParams(), 1.0, 1.0, rel_tol=0.0)

    def test_nonpositive_is_outside(self):
        assert fucik_membership(ProblemParams(), -3.0, 50.0).kind is MembershipKind.NOT_IN_SPECTRUM

    @settings(max_examples=60, deadline=None)
    @given(
        st.sampled_from([1.5, 2.0, 3.0]),
        st.floats(0.2, 5.0),
        st.floats(0.2, 5.0),
        st.sampled_from(all_curves(7)),
        st.floats(1.05, 50.0),
    )
    def test_round_trip(self, p, a, b, curve, factor):
        params = ProblemParams(p, a, b, 1.0)
        bound = curve_asymptote(params, curve)
        pt = sample_fucik_curve(params, curve, factor * bound, 2 * factor * bound, 2)[0]
        m = fucik_membership(params, pt.mu, pt.nu, rel_tol=1e-9)
        assert m.kind is MembershipKind.ON_CURVE
        assert m.curve == curve


class TestBranches:
    @pytest.mark.parametrize(
        "curve, expected",
        [((2, 2), (Branch.EVEN, 2)), ((1, 2), (Branch.ODD_1, 1)), ((3, 2), (Branch.ODD_2, 2)), ((1, 1), (Branch.EVEN, 1))],
    )
    def test_examples(self, curve, expected):
        assert classical_branch_of(FucikCurveId(*curve)) == expected
        assert classical_branch_of(curve) == expected

    def test_invalid(self):
        with pytest.raises(InvalidCurveError):
            classical_branch_of((1, 3))

    def test_all_curves_order(self):
        curves = all_curves(5)
        assert [(c.P, c.N) for c in curves] == [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)]
