"""Arithmetic substrate: contexts, combinatorics, log-gamma."""

from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalag.errors import DomainError, PrecisionError
from zetalag.numkernel import (
    COMB,
    ComplexPoint,
    as_mpc,
    bernoulli,
    frac_to_mpf,
    log_gamma,
    make_context,
)


class TestMakeContext:
    def test_defaults(self):
        c = make_context()
        assert c.precision_bits == 192
        assert c.default_tolerance == 1e-12

    def test_rejects_low_precision(self):
        with pytest.raises(PrecisionError):
            make_context(precision_bits=32)

    def test_rejects_non_integer_bits(self):
        with pytest.raises(PrecisionError):
            make_context(precision_bits=192.5)

    def test_rejects_nonpositive_tolerance(self):
        with pytest.raises(PrecisionError):
            make_context(tolerance=0.0)

    def test_rejects_tolerance_below_mantissa(self):
        # 2^-120 < 2^-(64-8): a 64-bit mantissa cannot certify it.
        with pytest.raises(PrecisionError):
            make_context(precision_bits=64, tolerance=2.0**-120)

    def test_workprec_carries_guard_bits(self):
        c = make_context(128, 1e-9)
        with c.workprec():
            assert mp.mp.prec >= 128 + 32
        with c.workprec(40):
            assert mp.mp.prec >= 128 + 32 + 40


class TestComplexPoint:
    def test_value(self):
        p = ComplexPoint(2.0, -3.0)
        assert p.value == mp.mpc(2, -3)

    def test_rejects_nan(self):
        with pytest.raises(DomainError):
            ComplexPoint(float("nan"))

    def test_rejects_inf(self):
        with pytest.raises(DomainError):
            ComplexPoint(1.0, float("inf"))

    def test_as_mpc_coercions(self):
        assert as_mpc(2) == mp.mpc(2)
        assert as_mpc(1.5 + 2j) == mp.mpc(1.5, 2)
        assert as_mpc(ComplexPoint(0.5, 1.0)) == mp.mpc(0.5, 1)

    def test_as_mpc_rejects_nan(self):
        with pytest.raises(DomainError):
            as_mpc(float("nan"))


class TestCombinatorics:
    def test_factorial_small(self):
        assert COMB.factorial(0) == 1
        assert COMB.factorial(5) == 120

    def test_factorial_bounds(self):
        with pytest.raises(DomainError):
            COMB.factorial(-1)

    def test_binomial_values(self):
        assert COMB.binomial(5, 2) == 10
        assert COMB.binomial(5, 7) == 0
        assert COMB.binomial(5, -1) == 0

    def test_binomial_negative_n(self):
        with pytest.raises(DomainError):
            COMB.binomial(-2, 1)

    # [TRIVIAL] B_2 = 1/6, B_4 = -1/30, B_12 = -691/2730.
    @pytest.mark.parametrize(
        "j,expected",
        [(2, Fraction(1, 6)), (4, Fraction(-1, 30)), (12, Fraction(-691, 2730))],
    )
    def test_bernoulli_exact(self, j, expected, ctx):
        assert bernoulli(j, ctx) == expected

    def test_bernoulli_rejects_odd(self, ctx):
        with pytest.raises(DomainError):
            bernoulli(3, ctx)

    @given(n=st.integers(0, 200), k=st.integers(0, 200))
    def test_pascal_rule(self, n, k):
        assert COMB.binomial(n + 1, k) == COMB.binomial(n, k) + COMB.binomial(n, k - 1)


class TestLogGamma:
    def test_half_integer_anchor(self, ctx):
        # [TRIVIAL] Gamma(1/2) = sqrt(pi).
        with ctx.workprec():
            v = log_gamma(mp.mpf("0.5"), ctx)
            assert abs(mp.exp(v) - mp.sqrt(mp.pi)) < mp.mpf(10) ** -50

    def test_pole_rejected(self, ctx):
        with pytest.raises(DomainError):
            log_gamma(0, ctx)
        with pytest.raises(DomainError):
            log_gamma(-3, ctx)

    @settings(deadline=None, max_examples=25)
    @given(
        re=st.floats(0.2, 8, allow_nan=False),
        im=st.floats(-8, 8, allow_nan=False),
    )
    def test_recurrence_property(self, re, im, ctx):
        # log Gamma(z+1) = log Gamma(z) + log z on the right half plane.
        with ctx.workprec():
            z = mp.mpc(re, im)
            lhs = log_gamma(z + 1, ctx)
            rhs = log_gamma(z, ctx) + mp.log(z)
            assert abs(lhs - rhs) < mp.mpf(10) ** -40


def test_frac_to_mpf_tracks_precision(ctx):
    with ctx.workprec():
        v = frac_to_mpf(Fraction(1, 3))
        assert abs(v - mp.mpf(1) / 3) < mp.mpf(2) ** (-180)
