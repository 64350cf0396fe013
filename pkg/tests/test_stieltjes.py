"""Stieltjes constants: both methods, brackets, schedules, certification."""

import mpmath as mp
import pytest

from zetalag import stieltjes
from zetalag.errors import CertificationError, DomainError
from zetalag.numkernel import make_context

# [PAPER] gamma_0 is the Euler-Mascheroni constant; further digits are the
# standard published values of the first Stieltjes constants.  Parsed at
# elevated precision so the literals keep all their digits.
with mp.workprec(220):
    GAMMA_REF = {
        0: mp.mpf("0.57721566490153286060651209008240243104215933593992"),
        1: mp.mpf("-0.072815845483676724860586375874901319137736338334338"),
        2: mp.mpf("-0.0096903631928723184845303860352125293590658061013408"),
        3: mp.mpf("0.0020538344203033458661600465427533842857158044454106"),
        5: mp.mpf("0.00079332381730106270175333487744444483073153940458489"),
    }


class TestEulerMaclaurin:
    @pytest.mark.parametrize("n", sorted(GAMMA_REF))
    def test_reference_values_within_bracket(self, n, ctx):
        v, b = stieltjes.stieltjes_em(n, ctx, tol=1e-20)
        assert b <= mp.mpf("1e-20")
        assert abs(v - GAMMA_REF[n]) <= b

    def test_bracket_honours_tolerance(self, ctx):
        _, b = stieltjes.stieltjes_em(12, ctx, tol=1e-15)
        assert b <= mp.mpf("1e-15")

    def test_index_bounds(self, ctx):
        with pytest.raises(DomainError):
            stieltjes.stieltjes_em(-1, ctx)
        with pytest.raises(DomainError):
            stieltjes.stieltjes_em(stieltjes.N_MAX + 1, ctx)

    def test_agrees_with_independent_em(self, ctx):
        # mpmath's own gamma_n implementation is an external cross-check.
        with ctx.workprec():
            ref = mp.stieltjes(4)
        v, b = stieltjes.stieltjes_em(4, ctx, tol=1e-24)
        assert abs(v - ref) <= b + mp.mpf("1e-30")


class TestIntegralMethod:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_reference_within_bracket(self, n, ctx):
        v, b = stieltjes.stieltjes_integral(n, ctx, 10**4)
        assert abs(v - GAMMA_REF[n]) <= b

    def test_bracket_shrinks_with_cutoff(self, ctx):
        _, b1 = stieltjes.stieltjes_integral(1, ctx, 10**3)
        _, b2 = stieltjes.stieltjes_integral(1, ctx, 10**4)
        assert b2 < b1

    def test_requires_n_at_least_one(self, ctx):
        with pytest.raises(DomainError):
            stieltjes.stieltjes_integral(0, ctx, 100)

    def test_requires_integer_cutoff(self, ctx):
        with pytest.raises(DomainError):
            stieltjes.stieltjes_integral(1, ctx, 100.5)

    def test_small_cutoff_rejected(self, ctx):
        with pytest.raises(DomainError):
            stieltjes.stieltjes_integral(1, ctx, 4)


class TestSchedules:
    def test_binomial_schedule_shape(self):
        sched = stieltjes.binomial_tolerance_schedule(64, 1e-12)
        assert len(sched) == 65
        assert sched[0] == pytest.approx(1e-12)
        # Relaxation is monotone past the tight early indices.
        assert sched[60] > sched[30] > sched[10]

    def test_binomial_schedule_never_tighter_than_base(self):
        sched = stieltjes.binomial_tolerance_schedule(100, 1e-10)
        assert min(sched) >= 1e-10 * (1 - 1e-12)

    def test_laurent_schedule_tight_near_h_max(self):
        sched = stieltjes.laurent_tolerance_schedule(100, 1e-12, h_max=24)
        # Tightest requirement sits near j = h_max and relaxes both ways.
        j_min = sched.index(min(sched))
        assert 15 <= j_min <= 35
        assert sched[90] > sched[24]

    def test_combined_is_pointwise_min(self):
        a = stieltjes.binomial_tolerance_schedule(50, 1e-12)
        b = stieltjes.laurent_tolerance_schedule(50, 1e-12)
        c = stieltjes.combined_tolerance_schedule(50, 1e-12)
        assert c == [min(x, y) for x, y in zip(a, b)]


class TestBuildTable:
    def test_certified_table(self, small_stieltjes):
        assert small_stieltjes.max_index == 70
        assert small_stieltjes.method == "cross_certified"
        assert len(small_stieltjes) == 71

    def test_values_match_reference(self, small_stieltjes):
        for n, ref in GAMMA_REF.items():
            assert abs(small_stieltjes.gamma(n) - ref) <= small_stieltjes.brackets[n]

    def test_depth_guard(self, small_stieltjes):
        with pytest.raises(DomainError):
            small_stieltjes.gamma(71)

    def test_certification_failure_names_index(self, ctx, monkeypatch):
        # Corrupt the integral method; certification must name the index.
        def bad_integral(n, c, X):
            return mp.mpf(10), mp.mpf("1e-30")

        monkeypatch.setattr(stieltjes, "stieltjes_integral", bad_integral)
        with pytest.raises(CertificationError, match="n=1"):
            stieltjes.build_table(3, ctx, certify_up_to=3)

    def test_table_depth_validation(self, ctx):
        with pytest.raises(DomainError):
            stieltjes.build_table(stieltjes.N_MAX + 1, ctx)


def test_methods_cross_check_loose_context():
    # Full dual-method agreement also holds away from the default context.
    ctx = make_context(96, 1e-9)
    v_em, b_em = stieltjes.stieltjes_em(2, ctx)
    v_int, b_int = stieltjes.stieltjes_integral(2, ctx, 2000)
    assert abs(v_em - v_int) <= b_em + b_int
