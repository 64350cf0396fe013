"""Independent oracles: EM zeta, Cauchy-circle derivatives, frac integrals."""

import mpmath as mp
import pytest

from zetalag import oracle
from zetalag.errors import ConvergenceError, DomainError


class TestZetaEm:
    # [TRIVIAL] zeta(2) = pi^2/6, zeta(0) = -1/2, zeta(-1) = -1/12.
    # References are built inside the test so they carry full precision.
    @pytest.mark.parametrize("s,ref_fn", [
        (mp.mpf(2), lambda: mp.pi**2 / 6),
        (mp.mpf(0), lambda: mp.mpf(-1) / 2),
        (mp.mpf(-1), lambda: mp.mpf(-1) / 12),
        (mp.mpf(4), lambda: mp.pi**4 / 90),
    ])
    def test_anchors_within_bracket(self, s, ref_fn, ctx):
        v, b = oracle.zeta_em(s, ctx, tol=1e-20)
        with ctx.workprec():
            # The epsilon absorbs representation rounding in the reference
            # (e.g. -1/12 has no finite binary form) when the bracket is 0.
            assert abs(v - ref_fn()) <= b + mp.mpf(2) ** (-ctx.precision_bits - 8)

    def test_complex_point_vs_mpmath(self, ctx):
        s = mp.mpc("0.6", "14.1")
        v, b = oracle.zeta_em(s, ctx, tol=1e-18)
        with ctx.workprec():
            ref = mp.zeta(s)
        assert abs(v - ref) <= b + mp.mpf("1e-30")

    def test_pole_rejected(self, ctx):
        with pytest.raises(DomainError):
            oracle.zeta_em(mp.mpf(1), ctx)

    def test_bracket_respects_tolerance(self, ctx):
        _, b = oracle.zeta_em(mp.mpc("0.51", "3"), ctx, tol=1e-14)
        assert b <= mp.mpf("1e-14")


class TestCauchyDerivative:
    def test_first_derivative_anchor(self, ctx):
        # [DERIVED] zeta'(2) from mpmath as an independent target.
        v, b = oracle.cauchy_derivative(mp.mpf(2), 1, ctx, tol=1e-14)
        with ctx.workprec():
            ref = mp.zeta(2, derivative=1)
        assert abs(v - ref) <= b + mp.mpf("1e-20")

    def test_zeroth_matches_em(self, ctx):
        v, b = oracle.cauchy_derivative(mp.mpf(3), 0, ctx, tol=1e-13)
        ve, be = oracle.zeta_em(mp.mpf(3), ctx, tol=1e-13)
        assert abs(v - ve) <= b + be

    def test_step_doubling_bracket_is_honest(self, ctx):
        for m in (1, 2, 3):
            v, b = oracle.cauchy_derivative(mp.mpf(2), m, ctx, tol=1e-12)
            with ctx.workprec():
                ref = mp.zeta(2, derivative=m)
            assert abs(v - ref) <= b + mp.mpf("1e-15")

    def test_circle_must_avoid_pole(self, ctx):
        with pytest.raises(DomainError):
            oracle.cauchy_derivative(mp.mpf("1.05"), 1, ctx, radius=0.2)

    def test_negative_order_rejected(self, ctx):
        with pytest.raises(DomainError):
            oracle.cauchy_derivative(mp.mpf(2), -1, ctx)


class TestFracIntegral:
    def test_first_moment_anchor(self, ctx):
        # [PAPER] int_1^oo {x}/x^2 dx = 1 - gamma_0.
        v, b = oracle.frac_integral_adaptive(1, 0, 1, ctx, tol=1e-11)
        assert abs(v - (1 - mp.euler)) <= b + mp.mpf("1e-18")

    def test_squared_norm_anchor(self, ctx):
        # [PAPER] int_1^oo {x}^2/x^2 dx = log(2 pi) - gamma_0 - 1.
        v, b = oracle.frac_integral_adaptive(2, 0, 0, ctx, tol=1e-11)
        ref = mp.log(2 * mp.pi) - mp.euler - 1
        assert abs(v - ref) <= b + mp.mpf("1e-18")

    def test_complex_shift_vs_series(self, ctx):
        # int_1^oo {x}/x^(s+1) dx = 1/(s-1) - zeta(s)/s for Re s > 0.
        s = mp.mpc("1.5", "2")
        v, b = oracle.frac_integral_adaptive(1, 0, s, ctx, tol=1e-13)
        with ctx.workprec():
            ref = 1 / (s - 1) - mp.zeta(s) / s
        assert abs(v - ref) <= b + mp.mpf("1e-15")

    def test_crude_policy_brackets_truth(self, ctx):
        spec = oracle.FracIntegralSpec(1, 0, 1, cutoff=512, tail_policy="bracket_crude")
        v, b = oracle.frac_integral(spec, ctx)
        assert abs(v - (1 - mp.euler)) <= b

    def test_divergent_spec_rejected(self):
        with pytest.raises(DomainError):
            oracle.FracIntegralSpec(1, 0, 0)  # Re(s) + p = 1

    def test_bad_policy_rejected(self):
        with pytest.raises(DomainError):
            oracle.FracIntegralSpec(1, 0, 1, tail_policy="guess")

    def test_adaptive_raises_when_stuck(self, ctx):
        # The crude tail bracket decays like X^(-0.001): hopeless at 1e-30.
        with pytest.raises(ConvergenceError):
            oracle.frac_integral_adaptive(1, 0, "1.001", ctx, tol=1e-30,
                                          tail_policy="bracket_crude",
                                          max_cutoff=2**12)


class TestHmNorm:
    def test_m0_reduces_to_anchor(self, ctx):
        # [TRIVIAL] the m = 0 closed form is log(2 pi) - gamma_0 - 1.
        v, b = oracle.hm_norm_closed(0, ctx, tol=1e-11)
        ref = mp.log(2 * mp.pi) - mp.euler - 1
        assert abs(v - ref) <= b + mp.mpf("1e-11")

    def test_matches_quadrature_m1(self, ctx):
        v, b = oracle.hm_norm_closed(1, ctx, tol=1e-11)
        q, qb = oracle.frac_integral_adaptive(2, 1, 0, ctx, tol=1e-10)
        assert abs(v - q) <= b + qb + mp.mpf("1e-10")

    def test_negative_order_rejected(self, ctx):
        with pytest.raises(DomainError):
            oracle.hm_norm_closed(-1, ctx)
