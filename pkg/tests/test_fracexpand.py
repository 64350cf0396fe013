"""Fourier-Laguerre expansion of {x}: partial sums, probes, regularized sums."""

import mpmath as mp
import pytest

from zetalag import fracexpand, oracle
from zetalag.errors import CertificationError, DomainError, TableDepthError


class TestPartialSum:
    def test_midpoint_value_is_reasonable(self, small_grid, ctx):
        state = fracexpand.make_state(0, 64, small_grid, ctx)
        v = fracexpand.partial_sum(mp.mpf("2.5"), state, ctx)
        # No pointwise rate exists; at N = 64 the midpoint is within ~0.1.
        assert abs(v - mp.mpf("0.5")) < mp.mpf("0.1")

    def test_domain_guard(self, small_grid, ctx):
        state = fracexpand.make_state(0, 16, small_grid, ctx)
        with pytest.raises(DomainError):
            fracexpand.partial_sum(mp.mpf("0.9"), state, ctx)

    def test_state_depth_guard(self, small_grid, ctx):
        with pytest.raises(TableDepthError):
            fracexpand.make_state(0, 100, small_grid, ctx)


class TestL2Accounting:
    def test_error_decreases_with_depth(self, small_grid, parseval_target, ctx):
        state16 = fracexpand.make_state(0, 16, small_grid, ctx)
        state64 = fracexpand.make_state(0, 64, small_grid, ctx)
        e16 = fracexpand.l2_error(state16, parseval_target, ctx)
        e64 = fracexpand.l2_error(state64, parseval_target, ctx)
        assert 0 < e64 < e16

    def test_defective_norm_raises(self, small_grid, ctx):
        # A norm below the partial sum violates Bessel: must be flagged.
        state = fracexpand.make_state(0, 64, small_grid, ctx)
        with pytest.raises(CertificationError):
            fracexpand.l2_error(state, mp.mpf("0.1"), ctx)


class TestProbes:
    def test_grid_separation(self):
        near, far = fracexpand.default_probe_grid()
        assert all(min(abs(x - round(x)), 1) < 0.01 for x in near)
        assert all(min(abs(x - round(x)), 1) >= 0.3 for x in far)
        assert near and far

    def test_rows_are_per_depth(self, small_grid, ctx):
        rows = fracexpand.nonuniformity_probe([8, 32], small_grid, ctx)
        assert [r.N for r in rows] == [8, 32]
        for r in rows:
            assert r.sup_err_near_int > 0.2  # jump discontinuity floor
            assert r.sup_err_far < r.sup_err_near_int

    def test_m_restriction(self, small_grid, ctx):
        with pytest.raises(DomainError):
            fracexpand.nonuniformity_probe([8], small_grid, ctx, m=1)


class TestRegularizedSums:
    def test_abel_domain(self, small_grid, ctx):
        with pytest.raises(DomainError):
            fracexpand.abel_sum_ell([mp.mpf("1.0")], small_grid, ctx)

    def test_abel_depth_guard(self, small_grid, ctx):
        with pytest.raises(TableDepthError):
            fracexpand.abel_sum_ell([mp.mpf("0.99")], small_grid, ctx)

    def test_abel_moves_toward_target(self, small_grid, ctx):
        # [PAPER] sum_n ell_n = zeta(1/2) + 1 (conditionally).
        target, _ = oracle.zeta_em(mp.mpf("0.5"), ctx, tol=1e-13)
        target = target.real + 1
        rows = fracexpand.abel_sum_ell([mp.mpf("0.2"), mp.mpf("0.6")], small_grid, ctx)
        gaps = [abs(v - target) for _, v in rows]
        assert gaps[1] < gaps[0]

    def test_cesaro_in_right_neighbourhood(self, small_grid, ctx):
        v = fracexpand.cesaro_sum_ell(64, small_grid, ctx)
        assert abs(v - mp.mpf("-0.46035")) < mp.mpf("0.02")
