"""Fourier-Laguerre expansion of the fractional part: partial sums and probes.

The expansion sum_n (-1)^(n-1) ell_n^(m) L_n^(m)(log x) converges to {x} in
the H_m norm, and pointwise to {x} off the integers and to 1/2 at integers
x > 1.  Pointwise convergence has no proven rate, so the probes here assert
trends (error decreasing across decades of N) rather than tolerances; the
L2 accounting, by contrast, is exact Parseval arithmetic.

The conditionally convergent sum of the coefficients themselves,
sum_n ell_n = zeta(1/2) + 1, is exposed through Abel regularization
A(r) = sum_n ell_n r^n with r rising toward 1 (Cesaro offered secondarily).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from .coefficients import CoefficientTable, parseval_partial
from .errors import CertificationError, DomainError, TableDepthError
from .laguerre import laguerre_seq
from .numkernel import PrecisionContext


@dataclass(frozen=True)
class ExpansionState:
    """A truncated expansion of order m with its Parseval error budget."""

    m: int
    N: int
    table: CoefficientTable = field(repr=False)
    l2_error_sq: object = None  # filled when a norm value is supplied


def make_state(m: int, N: int, table: CoefficientTable, ctx: PrecisionContext,
               norm_sq=None) -> ExpansionState:
    if m > table.max_m or N > table.max_n:
        raise TableDepthError("coefficient table too small for the requested expansion")
    err = None
    if norm_sq is not None:
        err = mp.mpf(norm_sq) - parseval_partial(m, N, table, ctx)
    return ExpansionState(m=m, N=N, table=table, l2_error_sq=err)


def partial_sum(x, state: ExpansionState, ctx: PrecisionContext):
    """T_N(x) = sum_{n<=N} (-1)^(n-1) ell_n^(m) L_n^(m)(log x)."""
    x = mp.mpf(x)
    if not x > 1:
        raise DomainError(f"expansion lives on (1, oo), got x={x}")
    with ctx.workprec():
        u = mp.log(x)
        acc = mp.mpf(0)
        sign = -1  # (-1)^(n-1) at n = 0
        for n, lag in enumerate(laguerre_seq(state.m, u, state.N)):
            acc += sign * state.table.entry(n, state.m) * lag
            sign = -sign
        return acc


def l2_error(state: ExpansionState, norm_closed, ctx: PrecisionContext,
             bracket=0):
    """||{.}||_(m)^2 minus the Parseval partial sum; must be >= -bracket.

    A deficit beyond the supplied bracket means the coefficient table is
    defective (Bessel's inequality cannot fail), so that is a hard error.
    """
    with ctx.workprec():
        err = mp.mpf(norm_closed) - parseval_partial(state.m, state.N, state.table, ctx)
        if err < -mp.mpf(bracket):
            raise CertificationError(
                f"Parseval partial sum exceeds the norm by {mp.nstr(-err, 8)} "
                f"(m={state.m}, N={state.N}): coefficient table defect"
            )
        return err


def default_probe_grid(x_max: float = 20.0, near_offset: float = 1e-3,
                       far_points: int = 8):
    """Probe abscissas in (1, x_max]: integer-adjacent and interior points."""
    near, far = [], []
    k = 2
    while k <= x_max:
        near.extend([k - near_offset, k + near_offset])
        k += 1
    step = (x_max - 1.3) / far_points
    for i in range(far_points):
        far.append(1.3 + i * step + 0.17)  # keep at least 0.3 from integers
    far = [x for x in far if min(abs(x - round(x)), 1) >= 0.3]
    return near, far


@dataclass(frozen=True)
class ProbeRow:
    N: int
    sup_err_near_int: float
    sup_err_far: float


def nonuniformity_probe(N_list, table: CoefficientTable, ctx: PrecisionContext,
                        m: int = 0, grid=None):
    """Sup-errors |T_N(x) - {x}| near and far from integers, per N.

    Near integer points the sup-error never decays below a fixed floor (the
    limit has jump discontinuities there), while away from the integers it
    falls as N grows.
    """
    if m != 0:
        raise DomainError("the pointwise probe is specified for m = 0 only")
    near, far = default_probe_grid() if grid is None else grid
    N_list = sorted(N_list)
    n_max = N_list[-1]
    if n_max > table.max_n:
        raise TableDepthError(f"probe needs ell_0..ell_{n_max}")
    rows = []
    with ctx.workprec():
        targets_near = [mp.frac(mp.mpf(x)) for x in near]
        targets_far = [mp.frac(mp.mpf(x)) for x in far]
        sums_near = [mp.mpf(0)] * len(near)
        sums_far = [mp.mpf(0)] * len(far)
        gens_near = [laguerre_seq(m, mp.log(mp.mpf(x)), n_max) for x in near]
        gens_far = [laguerre_seq(m, mp.log(mp.mpf(x)), n_max) for x in far]
        sign = -1
        checkpoints = set(N_list)
        collected = {}
        for n in range(n_max + 1):
            c = table.entry(n, m)
            for i, g in enumerate(gens_near):
                sums_near[i] += sign * c * next(g)
            for i, g in enumerate(gens_far):
                sums_far[i] += sign * c * next(g)
            sign = -sign
            if n in checkpoints:
                sup_near = max(abs(s - t) for s, t in zip(sums_near, targets_near))
                sup_far = max(abs(s - t) for s, t in zip(sums_far, targets_far))
                collected[n] = (sup_near, sup_far)
        for N in N_list:
            sup_near, sup_far = collected[N]
            rows.append(ProbeRow(N=N, sup_err_near_int=float(sup_near),
                                 sup_err_far=float(sup_far)))
    return rows


def abel_sum_ell(r_list, table: CoefficientTable, ctx: PrecisionContext):
    """A(r) = sum_n ell_n r^n for each r in (0, 1]; rows of (r, A(r)).

    Requires the table deep enough that the geometric tail at the largest r
    is controlled (depth of roughly 20/(1-r)).
    """
    rows = []
    with ctx.workprec():
        for r in r_list:
            r = mp.mpf(r)
            if not (0 <= r < 1):
                raise DomainError(f"Abel parameter must lie in [0, 1), got {r}")
            if r > 0 and table.max_n < min(20 / (1 - r), 10**6):
                raise TableDepthError(
                    f"Abel sum at r={r} needs table depth >= {int(20/(1-r))}, "
                    f"have {table.max_n}"
                )
            acc = mp.mpf(0)
            rp = mp.mpf(1)
            for n in range(table.max_n + 1):
                acc += table.entry(n, 0) * rp
                rp *= r
            rows.append((r, acc))
    return rows


def cesaro_sum_ell(N: int, table: CoefficientTable, ctx: PrecisionContext):
    """(C, 1) mean of the partial sums of sum_n ell_n, up to N terms."""
    if N > table.max_n:
        raise TableDepthError(f"Cesaro mean needs ell_0..ell_{N}")
    with ctx.workprec():
        partial = mp.mpf(0)
        total = mp.mpf(0)
        for n in range(N + 1):
            partial += table.entry(n, 0)
            total += partial
        return total / (N + 1)
