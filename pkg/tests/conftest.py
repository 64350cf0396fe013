"""Shared fixtures: precision contexts and the big certified tables.

The deep table (gamma_0..gamma_1006 and the 1000-column coefficient grid)
takes a few minutes to build and backs both the Parseval and the
fractional-part acceptance criteria, so it is built once per session.
"""

import mpmath as mp
import pytest

from zetalag import coefficients, stieltjes
from zetalag.numkernel import make_context

DEEP_GAMMA = 1006
DEEP_N = 1000
DEEP_M = 6


@pytest.fixture(scope="session")
def ctx():
    return make_context(192, 1e-12)


@pytest.fixture(scope="session")
def small_stieltjes(ctx):
    """gamma_0..gamma_70, cross-certified on the first indices."""
    sched = stieltjes.combined_tolerance_schedule(70, 1e-12)
    return stieltjes.build_table(70, ctx, certify_up_to=4, tol_schedule=sched)


@pytest.fixture(scope="session")
def small_grid(ctx, small_stieltjes):
    """Coefficient grid m <= 6, n <= 64."""
    return coefficients.build_coefficient_table(6, 64, small_stieltjes, ctx)


@pytest.fixture(scope="session")
def deep_stieltjes(ctx):
    """gamma_0..gamma_1006 under the combined tolerance schedule."""
    sched = stieltjes.combined_tolerance_schedule(DEEP_GAMMA, 1e-12)
    return stieltjes.build_table(DEEP_GAMMA, ctx, certify_up_to=4,
                                 tol_schedule=sched)


@pytest.fixture(scope="session")
def deep_grid(ctx, deep_stieltjes):
    """Coefficient grid m <= 6, n <= 1000 for the deep acceptance checks."""
    return coefficients.build_coefficient_table(DEEP_M, DEEP_N, deep_stieltjes, ctx)


@pytest.fixture(scope="session")
def parseval_target(ctx):
    """log(2 pi) - gamma_0 - 1, the Parseval anchor, at session precision."""
    with ctx.workprec():
        return mp.log(2 * mp.pi) - mp.euler - 1
