"""Modified Laguerre basis on (1, oo) and H_m inner products.

The basis functions are Laguerre polynomials evaluated at log x.  Upward
recurrence is the production path; the explicit alternating sum is kept as
a cross-check oracle (it cancels badly for large n * log x).

Inner products are taken against the weight log^m(x)/(m! x^2).  Integrands
are declared structurally -- a polynomial in log x times an optional
fractional-part factor -- so the integrator can use exact antiderivatives
throughout instead of blind quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from . import oracle
from .errors import DomainError
from .numkernel import COMB, PrecisionContext, as_mpc, frac_to_mpf


def _check_params(n, m):
    if n < 0 or m < 0:
        raise DomainError(f"degree and order must be >= 0, got n={n}, m={m}")


def _check_x(x):
    x = mp.mpf(x)
    if not x > 1:
        raise DomainError(f"modified Laguerre basis lives on (1, oo), got x={x}")
    return x


def laguerre_seq(m: int, u, n_max: int):
    """Yield L_0^(m)(u) .. L_nmax^(m)(u) by the three-term recurrence."""
    prev2 = mp.mpf(1)
    yield prev2
    if n_max == 0:
        return
    prev1 = 1 + m - u
    yield prev1
    for n in range(1, n_max):
        cur = ((2 * n + 1 + m - u) * prev1 - (n + m) * prev2) / (n + 1)
        yield cur
        prev2, prev1 = prev1, cur


def eval_recurrence(n: int, m: int, x, ctx: PrecisionContext):
    """L_n^(m)(log x) by upward recurrence (the production path)."""
    _check_params(n, m)
    with ctx.workprec():
        u = mp.log(_check_x(x))
        for value in laguerre_seq(m, u, n):
            pass
        return value


def eval_explicit(n: int, m: int, x, ctx: PrecisionContext):
    """L_n^(m)(log x) from the explicit alternating sum (test oracle)."""
    _check_params(n, m)
    with ctx.workprec(2 * n):
        u = mp.log(_check_x(x))
        return mp.fsum(
            COMB.binomial(n + m, n - k) * (-1) ** k / mp.factorial(k) * u**k
            for k in range(n + 1)
        )


@dataclass(frozen=True)
class GenFunCheck:
    """Partial sum of the generating-function identity and its residual."""

    value: object
    target: object
    residual: object
    terms_used: int
    ratio: object


def partial_sum_check(m: int, x, s, N: int, ctx: PrecisionContext) -> GenFunCheck:
    """Check sum_n L_n^(m)(log x) ((s-1)/s)^n against s^(m+1)/x^(s-1).

    The series converges absolutely iff Re(s) > 1/2; outside that domain a
    :class:`DomainError` is raised.
    """
    _check_params(0, m)
    with ctx.workprec():
        x = _check_x(x)
        s = as_mpc(s)
        z = (s - 1) / s if s != 0 else None
        if z is None or abs(z) >= 1:
            raise DomainError(f"generating function diverges at s={s} (|(s-1)/s| >= 1)")
        u = mp.log(x)
        acc = mp.mpc(0)
        zp = mp.mpc(1)
        for val in laguerre_seq(m, u, N):
            acc += val * zp
            zp *= z
        target = s ** (m + 1) / mp.exp((s - 1) * u)
        return GenFunCheck(value=acc, target=target, residual=abs(acc - target),
                           terms_used=N + 1, ratio=abs(z))


# ---------------------------------------------------------------------------
# Structured integrands and inner products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Integrand:
    """Polynomial in log x (exact coefficients) times {x}^frac_power."""

    log_coeffs: tuple  # Fractions, index = power of log x
    frac_power: int = 0

    def __mul__(self, other: "Integrand") -> "Integrand":
        a, b = self.log_coeffs, other.log_coeffs
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            for j, cb in enumerate(b):
                prod[i + j] += ca * cb
        return Integrand(tuple(prod), self.frac_power + other.frac_power)


def laguerre_fn(n: int, m: int) -> Integrand:
    """The basis function L_n^(m)(log x) as a structured integrand."""
    _check_params(n, m)
    coeffs = tuple(
        Fraction(COMB.binomial(n + m, n - k) * (-1) ** k, COMB.factorial(k))
        for k in range(n + 1)
    )
    return Integrand(coeffs)


def fracpart() -> Integrand:
    """The fractional-part factor {x}."""
    return Integrand((Fraction(1),), frac_power=1)


def constant(c=1) -> Integrand:
    return Integrand((Fraction(c),))


def inner_product(f: Integrand, g: Integrand, m: int, ctx: PrecisionContext, tol=None):
    """<f, g>_(m) = (1/m!) int_1^oo f g log^m(x)/x^2 dx.

    Purely polynomial integrands reduce exactly (u = log x turns the weight
    into the Gamma integral); fractional-part factors go through the exact
    piecewise integrator with a bracketed tail below ``tol``.
    """
    if m < 0:
        raise DomainError("inner product order must be >= 0")
    h = f * g
    if h.frac_power > 2:
        raise DomainError("more than two fractional-part factors is not integrable here")
    tol = mp.mpf(ctx.default_tolerance if tol is None else tol)
    with ctx.workprec(64):
        if h.frac_power == 0:
            # (1/m!) int_0^oo P(u) u^m e^-u du = sum_j c_j (j+m)!/m!
            total = Fraction(0)
            for j, c in enumerate(h.log_coeffs):
                total += c * Fraction(COMB.factorial(j + m), COMB.factorial(m))
            return frac_to_mpf(total)
        acc = mp.mpf(0)
        active = [(j, c) for j, c in enumerate(h.log_coeffs) if c != 0]
        for j, c in active:
            scale = max(mp.mpf(1), abs(frac_to_mpf(c)))
            part_tol = tol / (len(active) * scale)
            v, _ = oracle.frac_integral_adaptive(
                h.frac_power, j + m, 2 - h.frac_power, ctx, tol=part_tol
            )
            acc += frac_to_mpf(c) * v
        return acc / mp.factorial(m)


def gram_matrix(max_n: int, m: int, ctx: PrecisionContext):
    """Exact Gram matrix <L_n^(m), L_k^(m)>_(m) for n, k <= max_n."""
    fns = [laguerre_fn(n, m) for n in range(max_n + 1)]
    with ctx.workprec():
        return [
            [inner_product(fns[n], fns[k], m, ctx) for k in range(max_n + 1)]
            for n in range(max_n + 1)
        ]
