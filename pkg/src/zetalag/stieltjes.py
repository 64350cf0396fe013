"""Stieltjes constants by two independent methods, with error brackets.

``stieltjes_em`` applies Euler-Maclaurin summation to f(x) = log^n(x)/x,
using exact rational derivative tables, and returns a rigorous bracket on
the discarded remainder.  ``stieltjes_integral`` evaluates the integral
representation

    gamma_n = int_1^oo (n log^(n-1)x - log^n x) / x^2 * {x} dx    (n >= 1)

exactly interval by interval up to an integer cutoff X, bracketing the tail
by 0 <= {x} <= 1.  ``build_table`` cross-certifies the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import CertificationError, ConvergenceError, DomainError
from .numkernel import COMB, PrecisionContext, frac_to_mpf

#: Implementation cap on the Stieltjes index.
N_MAX = 1024

#: Default certification depth for the dual-method run in build_table;
#: the crude-tail integral method loses sharpness quickly beyond this.
CERTIFY_DEFAULT = 10


# ---------------------------------------------------------------------------
# Exact derivative tables for f(x) = log^n(x) / x
#
# A term dict maps (i, p) -> Fraction c, meaning  c * log^i(x) / x^p.
# Differentiation is exact on this representation:
#   d/dx [log^i x / x^p] = i log^(i-1)x / x^(p+1) - p log^i x / x^(p+1).
# ---------------------------------------------------------------------------

def _diff_terms(terms):
    out = {}
    for (i, p), c in terms.items():
        if i > 0:
            key = (i - 1, p + 1)
            out[key] = out.get(key, Fraction(0)) + c * i
        key = (i, p + 1)
        out[key] = out.get(key, Fraction(0)) - c * p
    return out


def _eval_terms(terms, x, logx):
    return mp.fsum(frac_to_mpf(c) * logx**i / x**p for (i, p), c in terms.items())


def _abs_tail_integral(terms, x, logx, logx_pows=None):
    # sum of |c| * int_x^oo log^i(u)/u^p du, closed form via the recurrence
    #   V(i, p) = log^i(x) x^(1-p)/(p-1) + i/(p-1) V(i-1, p).
    total = mp.mpf(0)
    lpow = (lambda i: logx_pows[i]) if logx_pows is not None else (lambda i: logx**i)
    by_power = {}
    for (i, p), c in terms.items():
        if p < 2:
            raise DomainError("divergent tail integral (x-power below 2)")
        by_power.setdefault(p, []).append((i, c))
    for p, items in by_power.items():
        # One chain per x-power, built once up to the largest log-degree.
        base = x ** (1 - p) / (p - 1)
        vals = [base]
        for ii in range(1, max(i for i, _ in items) + 1):
            vals.append(lpow(ii) * base + ii * vals[ii - 1] / (p - 1))
        total += mp.fsum(abs(frac_to_mpf(c)) * vals[i] for i, c in items)
    return total


def _em_working_bits(ctx, n, X):
    # Partial-sum terms reach log^(n+1)(X); raise precision so the final
    # cancellation still leaves the full requested mantissa.
    swell = int((n + 1) * max(0.0, math.log2(math.log(X)))) if X > 2 else 0
    return 2 * n + swell + 64


def stieltjes_em(n: int, ctx: PrecisionContext, tol=None):
    """Stieltjes constant gamma_n by Euler-Maclaurin, with bracket.

    Returns ``(value, bracket)`` where the bracket bounds the discarded
    Euler-Maclaurin remainder.  The cutoff X and correction order are raised
    adaptively until the bracket is at or below ``tol`` (defaults to the
    context tolerance).
    """
    if n < 0 or n > N_MAX:
        raise DomainError(f"Stieltjes index {n} outside [0, {N_MAX}]")
    tol = mp.mpf(ctx.default_tolerance if tol is None else tol)
    X = max(10, 2 * n)
    while X <= 2**26:
        with ctx.workprec(_em_working_bits(ctx, n, X)):
            result = _em_at_cutoff(n, X, tol)
        if result is not None:
            return result
        X *= 2
    raise ConvergenceError(f"stieltjes_em({n}): cannot reach tolerance {tol}")


def _em_at_cutoff(n, X, tol):
    logs = [mp.log(k) for k in range(2, X + 1)]
    partial = mp.mpf(1) if n == 0 else mp.mpf(0)
    for k, L in zip(range(2, X + 1), logs):
        partial += L**n / k
    logX = logs[-1]
    Xf = mp.mpf(X)
    value = partial - logX ** (n + 1) / (n + 1) - (logX**n / Xf) / 2

    terms = {(n, 1): Fraction(1)}
    best = None
    deriv = terms
    j = 0
    while j < 512:
        j += 1
        deriv = _diff_terms(deriv)  # f^(2j-1)
        b2j = frac_to_mpf(COMB.bernoulli(2 * j))
        corr = b2j / mp.factorial(2 * j) * _eval_terms(deriv, Xf, logX)
        deriv = _diff_terms(deriv)  # f^(2j)
        bound = 2 * mp.zeta(2 * j) / (2 * mp.pi) ** (2 * j) * _abs_tail_integral(deriv, Xf, logX)
        if best is not None and bound >= best[1]:
            break  # asymptotic regime exhausted at this cutoff
        value -= corr
        best = (value, bound)
        if bound <= tol:
            return best
    if best is not None and best[1] <= tol:
        return best
    return None


# ---------------------------------------------------------------------------
# Integral method
# ---------------------------------------------------------------------------

_POWER_SUM_CACHE = {}


def _log_power_sums(X, jmax, prec):
    """T_j = sum_{k=2}^{X-1} log^j(k)/k for j <= jmax, one shared pass."""
    key = (X, prec)
    cached = _POWER_SUM_CACHE.get(key)
    if cached is not None and len(cached) > jmax:
        return cached
    sums = [mp.mpf(0)] * (jmax + 1)
    for k in range(2, X):
        L = mp.log(k)
        inv = mp.mpf(1) / k
        p = inv
        sums[0] += p
        for j in range(1, jmax + 1):
            p *= L
            sums[j] += p
    _POWER_SUM_CACHE[key] = sums
    return sums


def stieltjes_integral(n: int, ctx: PrecisionContext, X: int):
    """gamma_n from the fractional-part integral, exact up to cutoff X.

    The integral over [1, X] is evaluated with closed-form antiderivatives
    of log^j(x)/x and log^j(x)/x^2; the tail beyond X is bracketed using
    0 <= {x} <= 1.  Requires n >= 1 and integer X >= 10.
    """
    if n < 1:
        raise DomainError("integral representation requires n >= 1")
    if n > N_MAX:
        raise DomainError(f"Stieltjes index {n} outside [1, {N_MAX}]")
    if not isinstance(X, int) or isinstance(X, bool):
        if isinstance(X, float) and X.is_integer():
            X = int(X)
        else:
            raise DomainError(f"cutoff must be an integer, got {X!r}")
    if X < 10:
        raise DomainError(f"cutoff must be >= 10, got {X}")

    extra = 2 * n + 64
    with ctx.workprec(extra):
        prec = mp.mp.prec
        fact = [mp.factorial(j) for j in range(n + 2)]
        logX = mp.log(X)
        Xf = mp.mpf(X)

        # int_1^X of the 1/x part telescopes to a closed form.
        total1 = logX**n - logX ** (n + 1) / (n + 1)

        # The k/x^2 part needs H(k) = n*A_(n-1)(k) - A_n(k) at each integer,
        # where A_i(x) = -(1/x) sum_{j<=i} (i!/j!) log^j(x).  Abel summation
        # turns sum_k k*(H(k+1)-H(k)) into (X-1)H(X) - sum_{k=2}^{X-1} H(k) - H(1),
        # and H(1) = 0.  The interior sum reduces to log-power sums T_j.
        T = _log_power_sums(X, n, prec)

        def sum_A(i):  # sum_{k=2}^{X-1} A_i(k)
            return -mp.fsum(fact[i] / fact[j] * T[j] for j in range(i + 1))

        def A(i, x, logx):
            return -mp.fsum(fact[i] / fact[j] * logx**j for j in range(i + 1)) / x

        HX = n * A(n - 1, Xf, logX) - A(n, Xf, logX)
        sum_H = n * sum_A(n - 1) - sum_A(n)
        part2 = (X - 1) * HX - sum_H
        value = total1 - part2

        # Tail: int_X^oo log^i(x)/x^2 dx = (1/X) sum_{j<=i} (i!/j!) log^j(X).
        def W(i):
            return mp.fsum(fact[i] / fact[j] * logX**j for j in range(i + 1)) / Xf

        tail = n * W(n - 1) - W(n)
        if logX > n:
            # Integrand is single-signed beyond X; centre the bracket.
            value += tail / 2
            bracket = abs(tail) / 2
        else:
            bracket = n * W(n - 1) + W(n)
        return value, bracket


# ---------------------------------------------------------------------------
# Shared-pass Euler-Maclaurin for whole tables
#
# A per-entry run re-walks 2..X for every n; a table build can instead sweep
# k once, carrying log^n(k)/k for all n <= N with one multiplication per
# (k, n) pair.  The sweep is split into blocks of n so shallow entries do
# not pay the mantissa width the deep ones need.
# ---------------------------------------------------------------------------

def _em_corrections(n, X, logX_pows, tol):
    """Correction series and remainder bracket for gamma_n at cutoff X.

    Returns (correction_total, bracket) or None if the asymptotic regime at
    this cutoff bottoms out above ``tol``.  ``logX_pows[i]`` is log^i(X).
    """
    Xf = mp.mpf(X)
    logX = logX_pows[1]
    terms = {(n, 1): Fraction(1)}
    deriv = terms
    total = mp.mpf(0)
    best = None
    xpows = {}
    j = 0
    while j < 512:
        j += 1
        deriv = _diff_terms(deriv)  # f^(2j-1)
        b2j = frac_to_mpf(COMB.bernoulli(2 * j))
        corr = b2j / mp.factorial(2 * j) * mp.fsum(
            frac_to_mpf(c) * logX_pows[i] / xpows.setdefault(p, Xf**p)
            for (i, p), c in deriv.items()
        )
        deriv = _diff_terms(deriv)  # f^(2j)
        # The bracket only steers truncation; 80 bits of it are plenty.
        with mp.workprec(80):
            bound = (2 * mp.zeta(2 * j) / (2 * mp.pi) ** (2 * j)
                     * _abs_tail_integral(deriv, Xf, logX, logX_pows))
        if best is not None and bound >= best[1]:
            break
        total += corr
        best = (total, bound)
        if bound <= tol:
            return best
    return best if best is not None and best[1] <= tol else None


def _em_block(n_lo, n_hi, X, tols, ctx):
    """gamma_n for n_lo..n_hi from one shared sweep of 2..X.

    Returns a list of (value, bracket) entries, with None where the bracket
    target was not met at this cutoff.
    """
    with ctx.workprec(_em_working_bits(ctx, n_hi, X)):
        partial = [mp.mpf(1) if n == 0 else mp.mpf(0) for n in range(n_hi + 1)]
        for k in range(2, X + 1):
            L = mp.log(k)
            p = mp.mpf(1) / k
            partial[0] += p
            for n in range(1, n_hi + 1):
                p *= L
                partial[n] += p
        logX = mp.log(X)
        logX_pows = [mp.mpf(1)]
        for _ in range(n_hi + 1):
            logX_pows.append(logX_pows[-1] * logX)
        out = []
        for n in range(n_lo, n_hi + 1):
            head = partial[n] - logX_pows[n + 1] / (n + 1) - logX_pows[n] / (2 * X)
            res = _em_corrections(n, X, logX_pows, mp.mpf(tols[n]))
            out.append(None if res is None else (head - res[0], res[1]))
        return out


def _em_table(N, ctx, tols):
    """All of gamma_0..gamma_N via blocked shared sweeps."""
    values = [None] * (N + 1)
    brackets = [None] * (N + 1)
    block_edges = [n for n in (128, 384, 768) if n < N] + [N]
    n_lo = 0
    for n_hi in block_edges:
        X = max(64, 2 * n_hi)
        while X <= 2**26:
            rows = _em_block(n_lo, n_hi, X, tols, ctx)
            if all(r is not None for r in rows):
                break
            X *= 2
        else:
            raise ConvergenceError(f"shared EM pass stuck in block ending at n={n_hi}")
        for n, row in zip(range(n_lo, n_hi + 1), rows):
            values[n], brackets[n] = row
        n_lo = n_hi + 1
    return values, brackets


# ---------------------------------------------------------------------------
# Certified tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StieltjesTable:
    """Certified values gamma_0..gamma_N with per-entry error brackets."""

    values: tuple
    brackets: tuple
    method: str  # euler_maclaurin | fracpart_integral | cross_certified

    def __len__(self):
        return len(self.values)

    def gamma(self, n: int):
        if n >= len(self.values):
            raise DomainError(f"table holds gamma_0..gamma_{len(self.values)-1}, asked for {n}")
        return self.values[n]

    @property
    def max_index(self):
        return len(self.values) - 1


def binomial_tolerance_schedule(N: int, base_tol: float):
    """Per-index EM tolerances tuned for downstream binomial transforms.

    gamma_k enters ell_n with weight C(n-1, k-1)/k!, largest at n = N, so
    the absolute accuracy needed for gamma_k relaxes by k!/C(N-1, k-1).
    """
    out = []
    for k in range(N + 1):
        if k == 0:
            out.append(base_tol)
            continue
        relax = math.lgamma(k + 1) - (
            math.lgamma(N) - math.lgamma(k) - math.lgamma(N - k + 1)
        ) if k <= N - 1 else math.lgamma(k + 1)
        out.append(base_tol * max(1.0, math.exp(min(700.0, relax))))
    return out


def laurent_tolerance_schedule(N: int, base_tol: float, h_max: float = 24.0):
    """Per-index EM tolerances for the Laurent path of the series engine.

    gamma_j enters zeta(s) - 1/(s-1) with weight (s-1)^j / j!, so keeping
    the evaluation accurate to base_tol for |s - 1| <= h_max needs gamma_j
    to base_tol * j! / h_max^j.  The requirement is tightest near
    j = h_max and relaxes superexponentially beyond it.
    """
    if h_max <= 0:
        raise DomainError("h_max must be positive")
    out = []
    for j in range(N + 1):
        scale = math.lgamma(j + 1) - j * math.log(h_max)
        out.append(base_tol * math.exp(max(-120.0, min(700.0, scale))))
    return out


def combined_tolerance_schedule(N: int, base_tol: float, h_max: float = 24.0):
    """Pointwise minimum of the binomial and Laurent schedules."""
    return [
        min(a, b)
        for a, b in zip(
            binomial_tolerance_schedule(N, base_tol),
            laurent_tolerance_schedule(N, base_tol, h_max),
        )
    ]


def build_table(
    N: int,
    ctx: PrecisionContext,
    certify_up_to: int | None = None,
    integral_cutoff: int = 10**4,
    tol_schedule=None,
) -> StieltjesTable:
    """Build gamma_0..gamma_N, cross-certified against the integral method.

    Euler-Maclaurin values are stored.  For every n <= min(N, certify_up_to)
    with n >= 1, the integral method must agree within the summed brackets,
    otherwise a :class:`CertificationError` names the offending index.
    """
    if N < 0 or N > N_MAX:
        raise DomainError(f"table depth {N} outside [0, {N_MAX}]")
    reach = CERTIFY_DEFAULT if certify_up_to is None else certify_up_to
    reach = min(N, reach)
    tols = (
        [float(ctx.default_tolerance)] * (N + 1)
        if tol_schedule is None
        else list(tol_schedule[: N + 1])
    )
    values, brackets = _em_table(N, ctx, tols)
    for n in range(1, reach + 1):
        vi, bi = stieltjes_integral(n, ctx, integral_cutoff)
        if abs(values[n] - vi) > brackets[n] + bi:
            raise CertificationError(
                f"dual-method disagreement at n={n}: "
                f"|em - integral| = {mp.nstr(abs(values[n]-vi), 8)} "
                f"exceeds combined bracket {mp.nstr(brackets[n]+bi, 8)}"
            )
    method = "cross_certified" if reach >= 1 else "euler_maclaurin"
    return StieltjesTable(values=tuple(values), brackets=tuple(brackets), method=method)
