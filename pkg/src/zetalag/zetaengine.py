"""Rational-series evaluation of zeta(s) and its derivatives on Re s > 1/2.

The engine sums

    S_m(s) = (s/(s-1))^(m+1) + sum_n C(n+m, m) ell_n^(m) ((1-s)/s)^n

with an adaptive truncation and a conservative geometric-envelope tail
bound, extracts derivatives from consecutive S_m, and reflects through the
functional equation for Re s < 1/2.  Near the pole at s = 1 the engine
switches to the Laurent expansion of zeta, where the rational head and the
series would cancel catastrophically in the derivative extraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .coefficients import CoefficientTable
from .errors import ConvergenceError, DomainError
from .numkernel import COMB, PrecisionContext, as_mpc, log_gamma

#: Switch to the Laurent path inside this distance of the pole.
LAURENT_RADIUS = 1e-6


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated series plus an honest tail accounting."""

    value: object
    terms_used: int
    tail_bound: object
    ratio: object
    path: str = "series"


def _check_domain(s):
    if s.real <= 0.5:
        raise DomainError(f"series domain is Re s > 1/2, got Re s = {s.real}")


def S_m(s, m: int, table: CoefficientTable, tol, ctx: PrecisionContext) -> SeriesResult:
    """sum_{k<=m} (-s)^k/k! zeta^(k)(s), by the rational series."""
    if m < 0:
        raise DomainError("order m must be >= 0")
    with ctx.workprec(64):
        s = as_mpc(s)
        _check_domain(s)
        if s == 1:
            raise DomainError("S_m has a pole at s = 1 (the ell0 limit lives off the pole)")
        tol = mp.mpf(ctx.default_tolerance if tol is None else tol)
        if abs(s - 1) < LAURENT_RADIUS:
            return _s_m_laurent(s, m, table, tol, ctx)

        z = (1 - s) / s
        r = abs(z)
        # The series needs roughly log(tol (1-r)) / log(r) terms.  When the
        # grid cannot reach that far (r near 1, i.e. s near the critical
        # line or far up the strip), re-sum through the entire part of the
        # Laurent expansion instead: same data, rearranged to converge in
        # powers of (s - 1)/j! rather than (1-s)/s.
        depth_est = mp.log(tol * (1 - r)) / mp.log(r)
        if depth_est > table.max_n:
            return _s_m_laurent(s, m, table, tol, ctx)
        head = (s / (s - 1)) ** (m + 1)
        acc = mp.mpc(0)
        zp = mp.mpc(1)
        recent = []
        n = 0
        while n <= table.max_n:
            term = COMB.binomial(n + m, m) * table.entry(n, m) * zp
            acc += term
            recent = (recent + [abs(term)])[-3:]
            # Geometric envelope on the tail: |term| r/(1-r) with the
            # binomial growth ratio folded in; ell_n oscillates through
            # zero, so the envelope uses the last few magnitudes.
            growth = max(1, mp.mpf(n + m + 1) / (n + 1))
            bound = max(recent) * r / (1 - r) * growth
            if n >= 2 and bound <= tol:
                return SeriesResult(value=head + acc, terms_used=n + 1,
                                    tail_bound=bound, ratio=r, path="series")
            zp *= z
            n += 1
        raise ConvergenceError(
            f"S_{m}({s}): grid exhausted at n = {table.max_n} with tail bound {mp.nstr(bound, 5)}",
            achieved=bound,
        )


def _s_m_laurent(s, m, table, tol, ctx) -> SeriesResult:
    """S_m from the Laurent expansion of zeta around s = 1.

    zeta(s) - 1/(s-1) is entire, so its Taylor series in s - 1 converges
    for every s; only the table depth and intermediate cancellation limit
    the reach.  The partial sums peak near |gamma_j (s-1)^j / j!| at
    j ~ |s-1| before decaying, so the working precision is raised by
    ~1.45 |s-1| bits to absorb the hump.
    """
    stable = table.source_table
    h = s - 1
    extra = 64 + int(mp.ceil(mp.mpf("1.45") * abs(h)))
    with ctx.workprec(extra):
        acc = mp.mpc(0)
        terms = 0
        tail = mp.mpf(0)
        for k in range(m + 1):
            weight = (-s) ** k / mp.factorial(k)
            zk, used, zk_tail = _zeta_deriv_laurent(s, k, stable, tol / max(1, abs(weight)))
            acc += weight * zk
            terms = max(terms, used)
            tail += abs(weight) * zk_tail
    return SeriesResult(value=acc, terms_used=terms, tail_bound=tail,
                        ratio=abs(h), path="laurent")


def _zeta_deriv_laurent(s, k, stable, tol):
    # zeta^(k)(s) = (-1)^k k!/(s-1)^(k+1) + sum_{j>=k} (-1)^j gamma_j (s-1)^(j-k)/(j-k)!
    h = s - 1
    value = (-1) ** k * mp.factorial(k) / h ** (k + 1)
    r = abs(h)
    # Terms can grow until j ~ |s-1|; only judge convergence past the hump.
    j_floor = k + 3 + int(mp.ceil(2 * r))
    thresh = mp.mpf(tol) / 8
    j = k
    used = 0
    recent = []
    while j <= stable.max_index:
        term = (-1) ** j * stable.gamma(j) * h ** (j - k) / mp.factorial(j - k)
        value += term
        used += 1
        recent = (recent + [abs(term)])[-3:]
        if j >= j_floor and max(recent) < thresh:
            # Past the hump the terms fall off superexponentially, so a
            # small multiple of the recent envelope bounds the tail.
            return value, used, 4 * max(recent)
        j += 1
    raise ConvergenceError(
        f"Laurent path for zeta^({k})({s}) exhausted gamma_0..gamma_{stable.max_index} "
        f"with last terms ~ {mp.nstr(max(recent), 5)}",
        achieved=4 * max(recent) if recent else None,
    )


def zeta_derivative(s, m: int, table: CoefficientTable, tol, ctx: PrecisionContext):
    """zeta^(m)(s) extracted from S_m and S_(m-1); S_(-1) is identically 0."""
    with ctx.workprec(64):
        s = as_mpc(s)
        if s == 0:
            raise DomainError("derivative extraction divides by s; s = 0 is excluded")
        sm = S_m(s, m, table, tol, ctx)
        if m == 0:
            return sm.value
        sm1 = S_m(s, m - 1, table, tol, ctx)
        return mp.factorial(m) * (sm.value - sm1.value) / (-s) ** m


def chi(s, ctx: PrecisionContext):
    """Functional-equation factor chi(s) = pi^(s-1/2) Gamma((1-s)/2)/Gamma(s/2)."""
    with ctx.workprec(64):
        s = as_mpc(s)
        for w, name in (((1 - s) / 2, "(1-s)/2"), (s / 2, "s/2")):
            if w.imag == 0 and w.real <= 0 and w.real == mp.floor(w.real):
                raise DomainError(f"chi undefined: {name} = {w.real} hits a Gamma pole/zero")
        return mp.exp(
            (s - mp.mpf(1) / 2) * mp.log(mp.pi)
            + log_gamma((1 - s) / 2, ctx)
            - log_gamma(s / 2, ctx)
        )


def zeta_reflected(s, table: CoefficientTable, tol, ctx: PrecisionContext):
    """zeta(s) for Re s < 1/2 via zeta(s) = chi(s) zeta(1-s)."""
    with ctx.workprec(64):
        s = as_mpc(s)
        if s.real >= 0.5:
            raise DomainError("reflection path is for Re s < 1/2")
        if s == 0:
            return mp.mpc(-0.5)  # limit through the chi pole
        if s.imag == 0 and s.real == mp.floor(s.real) and mp.floor(s.real) % 2 == 0:
            return mp.mpc(0)  # trivial zero: 1/Gamma(s/2) vanishes
        return chi(s, ctx) * zeta_derivative(1 - s, 0, table, tol, ctx)


def zeta(s, table: CoefficientTable, ctx: PrecisionContext, tol=None):
    """zeta(s) anywhere off the pole: series for Re s > 1/2, else reflection."""
    with ctx.workprec(64):
        s = as_mpc(s)
        if s.real > 0.5:
            return zeta_derivative(s, 0, table, tol, ctx)
        if s.real < 0.5:
            return zeta_reflected(s, table, tol, ctx)
        raise DomainError("the critical line Re s = 1/2 is outside both paths")
