"""Independent ground-truth machinery used to validate every other module.

Three engines live here:

* ``zeta_em`` -- Euler-Maclaurin evaluation of zeta(s) with analytic
  continuation and a rigorous remainder bracket;
* ``cauchy_derivative`` -- zeta derivatives from the trapezoidal rule on a
  circle, with a step-doubling bracket;
* ``frac_integral`` -- exact piecewise integration of fractional-part
  integrals (closed-form antiderivatives on every [k, k+1), bracketed tail).

None of them touches the rational-series engine they are meant to check.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .errors import ConvergenceError, DomainError
from .numkernel import COMB, PrecisionContext, as_mpc, frac_to_mpf

# ---------------------------------------------------------------------------
# Euler-Maclaurin zeta
# ---------------------------------------------------------------------------

def zeta_em(s, ctx: PrecisionContext, tol=None):
    """zeta(s) by Euler-Maclaurin with an analytic-continuation tail.

    Returns ``(value, bracket)``.  Works for any s != 1 (the correction
    order J grows until Re(s) + 2J + 1 > 1 and the remainder bracket is
    below ``tol``).
    """
    s = as_mpc(s)
    tol = mp.mpf(ctx.default_tolerance if tol is None else tol)
    if s == 1:
        raise DomainError("zeta_em pole at s = 1")
    with ctx.workprec(64):
        N = max(8, int(2 + abs(s.imag) / 3))
        while N <= 2**22:
            value, bracket = _zeta_em_at(s, N, tol)
            if bracket is not None and bracket <= tol:
                return value, bracket
            N *= 2
    raise ConvergenceError(f"zeta_em({s}): cannot reach tolerance {tol}")


def _zeta_em_at(s, N, tol):
    sigma = s.real
    value = mp.fsum(mp.power(n, -s) for n in range(1, N))
    value += mp.power(N, 1 - s) / (s - 1)
    value += mp.power(N, -s) / 2
    rising = mp.mpc(1)  # (s)_(2j-1) built incrementally
    best = (value, None)
    j = 0
    Npow = mp.power(N, -s + 1)  # N^(1-s); term j uses N^(-s-2j+1)
    while j < 256:
        j += 1
        if j == 1:
            rising = s
        else:
            rising = rising * (s + 2 * j - 3) * (s + 2 * j - 2)
        b = frac_to_mpf(COMB.bernoulli(2 * j))
        term = b / mp.factorial(2 * j) * rising * mp.power(N, -s - 2 * j + 1)
        if sigma + 2 * j + 1 <= 0:
            value += term
            continue  # remainder bound not yet valid at this order
        # Standard remainder bound: |R_J| <= |next term| * |s+2J+1|/(sigma+2J+1).
        nxt = rising * (s + 2 * j - 1) * (s + 2 * j)
        b2 = frac_to_mpf(COMB.bernoulli(2 * j + 2))
        bound = abs(b2 / mp.factorial(2 * j + 2) * nxt * mp.power(N, -s - 2 * j - 1)) * (
            abs(s + 2 * j + 1) / (sigma + 2 * j + 1)
        )
        if best[1] is not None and bound >= best[1]:
            break
        value += term
        best = (value, bound)
        if bound <= tol:
            break
    return best


# ---------------------------------------------------------------------------
# Cauchy-circle derivatives
# ---------------------------------------------------------------------------

def cauchy_derivative(s, m: int, ctx: PrecisionContext, radius=None, K: int = 16, tol=None):
    """m-th derivative of zeta at s via the trapezoidal rule on a circle.

    The sample count doubles until two successive results agree to half the
    tolerance; the returned bracket is that disagreement plus the amplified
    sample brackets.
    """
    s = as_mpc(s)
    if m < 0:
        raise DomainError("derivative order must be >= 0")
    if K < 8:
        raise DomainError("sample count below 8")
    tol = mp.mpf(ctx.default_tolerance if tol is None else tol)
    if radius is None:
        radius = min(mp.mpf(1) / 8, abs(s - 1) / 2)
    radius = mp.mpf(radius)
    if radius <= 0 or abs(s - 1) <= radius:
        raise DomainError("circle touches the pole at s = 1")
    with ctx.workprec(64):
        fac_m = mp.factorial(m)
        amp = fac_m / radius**m
        sample_tol = tol / (4 * amp)
        prev = None
        while K <= 2**14:
            acc = mp.mpc(0)
            sample_err = mp.mpf(0)
            for jj in range(K):
                w = mp.exp(2j * mp.pi * jj / K)
                zv, zb = zeta_em(s + radius * w, ctx, tol=sample_tol)
                acc += zv * w**-m
                sample_err += zb
            val = fac_m * acc / (K * radius**m)
            prop = fac_m * sample_err / (K * radius**m)
            if prev is not None:
                delta = abs(val - prev)
                if delta <= tol / 2:
                    return val, delta + prop
            prev = val
            K *= 2
    raise ConvergenceError(f"cauchy_derivative({s}, m={m}): trapezoid did not settle")


# ---------------------------------------------------------------------------
# Fractional-part integrals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FracIntegralSpec:
    """Description of int_1^oo {x}^p log^d(x) / x^(s+p) dx.

    ``power_of_frac`` p is 1 or 2; ``log_degree`` d >= 0; ``s_shift`` is the
    complex exponent s (the denominator is x^(s+1) for p = 1 and x^(s+2)
    for p = 2).  Absolute convergence needs Re(s) + p > 1.
    """

    power_of_frac: int
    log_degree: int
    s_shift: complex = 1
    cutoff: int = 4096
    tail_policy: str = "halfmean"  # or "bracket_crude"

    def __post_init__(self):
        if self.power_of_frac not in (1, 2):
            raise DomainError("power_of_frac must be 1 or 2")
        if self.log_degree < 0:
            raise DomainError("log_degree must be >= 0")
        if self.tail_policy not in ("halfmean", "bracket_crude"):
            raise DomainError(f"unknown tail policy {self.tail_policy!r}")
        if not isinstance(self.cutoff, int) or self.cutoff < 4:
            raise DomainError("cutoff must be an integer >= 4")
        q_re = mp.re(as_mpc(self.s_shift)) + self.power_of_frac
        if not q_re > 1:
            raise DomainError(f"divergent spec: Re(s) + p = {q_re} <= 1")


def _antiderivs(dmax, a, L, x_pow):
    # F_d(x) = int log^d(x) x^(-a) dx for d = 0..dmax, given L = log x and
    # x_pow = x^(1-a).  For a == 1 the closed form is log^(d+1)(x)/(d+1).
    if a == 1:
        return [L ** (d + 1) / (d + 1) for d in range(dmax + 1)]
    out = [x_pow / (1 - a)]
    for d in range(1, dmax + 1):
        out.append((x_pow * L**d - d * out[d - 1]) / (1 - a))
    return out


def _w0(d, q, X, logX):
    # int_X^oo log^d(x) x^(-q) dx for Re q > 1.
    xq = mp.exp((1 - q) * logX)
    w = xq / (q - 1)
    for dd in range(1, d + 1):
        w = (logX**dd * xq + dd * w) / (q - 1)
    return w


def _kpow(k, a, L):
    # k^(1-a); exact binary powering when the exponent is a real integer.
    if mp.im(a) == 0:
        ar = mp.re(a)
        if ar == int(ar):
            return mp.mpf(k) ** (1 - int(ar))
    return mp.exp((1 - a) * L)


def _head_extend(p, d, exponents, k_lo, k_hi, prev):
    """Exact interval sums for k in [k_lo, k_hi]; returns (delta, last fk)."""
    delta = mp.mpc(0)
    for k in range(k_lo, k_hi + 1):
        L = mp.log(k)
        fk = [_antiderivs(d, a, L, _kpow(k, a, L))[d] for a in exponents]
        if prev is not None:
            km = k - 1
            for i in range(p + 1):
                coeff = COMB.binomial(p, i) * (-km) ** (p - i)
                delta += coeff * (fk[i] - prev[i])
        prev = fk
    return delta, prev


def _g_diff(terms, q):
    # d/dx of sum c log^i(x) x^-(q+o), as the same kind of term dict.
    out = {}
    for (i, o), c in terms.items():
        if i > 0:
            key = (i - 1, o + 1)
            out[key] = out.get(key, mp.mpc(0)) + c * i
        key = (i, o + 1)
        out[key] = out.get(key, mp.mpc(0)) - c * (q + o)
    return out


def _g_eval(terms, q, X, logX):
    xq = mp.exp(-q * logX)
    return mp.fsum(c * logX**i * xq * mp.mpf(X) ** (-o) for (i, o), c in terms.items())


def _g_abs_tail(terms, req, X, logX):
    # upper bound on int_X^oo |g|: term-wise absolute integrals.
    return mp.fsum(abs(c) * _w0(i, mp.mpf(req) + o, X, logX) for (i, o), c in terms.items())


def _periodic_tail(r0, g_terms, q, X, logX, tol):
    """int_X^oo Btilde_r0({x}) g(x) dx by iterated integration by parts.

    Btilde_r is the periodic Bernoulli function; each step trades one order
    of Btilde for one derivative of g, gaining ~1/X.  Returns the best
    (value, bracket) pair; the bracket uses sup |Btilde_r| <= 2 r! zeta(r) /
    (2 pi)^r (valid for r >= 2).
    """
    total = mp.mpc(0)
    mult = mp.mpf(1)
    r = r0
    g_t = g_terms
    best = None
    for _ in range(64):
        b = frac_to_mpf(COMB.bernoulli(r + 1))
        if b != 0:
            total += mult * (-b) * _g_eval(g_t, q, X, logX) / (r + 1)
        mult = -mult / (r + 1)
        r += 1
        g_t = _g_diff(g_t, q)
        abs_tail = _g_abs_tail(g_t, q.real, X, logX)
        with mp.workprec(80):
            sup_b = 2 * mp.zeta(r) * mp.factorial(r) / (2 * mp.pi) ** r
        bound = abs(mult) * sup_b * abs_tail
        if best is None or bound < best[1]:
            best = (total, bound)
            if bound <= tol:
                break
        else:
            break  # asymptotic regime exhausted at this cutoff
    return best


def _tail_and_bracket(p, d, q, X, tail_policy, tol):
    """(tail contribution to add, bracket) at cutoff X per the policy."""
    logX = mp.log(X)
    req = q.real
    if tail_policy == "bracket_crude":
        return mp.mpc(0), _w0(d, mp.mpf(req), X, logX)
    # halfmean: {x} = 1/2 + Btilde_1, {x}^2 = {x} - 1/6 + Btilde_2.
    w0 = _w0(d, q, X, logX)
    g = {(d, 0): mp.mpc(1)}
    t1, b1 = _periodic_tail(1, g, q, X, logX, tol / 2)
    if p == 1:
        return w0 / 2 + t1, b1
    t2, b2 = _periodic_tail(2, g, q, X, logX, tol / 2)
    return w0 / 3 + t1 + t2, b1 + b2


def frac_integral(spec: FracIntegralSpec, ctx: PrecisionContext):
    """Evaluate a fractional-part integral per ``spec``; returns (value, bracket).

    On each [k, k+1) the fractional part is the polynomial x - k (squared
    for p = 2), so the integral up to the cutoff is a finite sum of exact
    antiderivative differences.  The tail is bracketed per the policy.
    """
    p, d, X = spec.power_of_frac, spec.log_degree, spec.cutoff
    with ctx.workprec(64):
        s = as_mpc(spec.s_shift)
        q = s + p
        exponents = [q - i for i in range(p + 1)]  # for the x^i pieces of (x-k)^p
        value, _ = _head_extend(p, d, exponents, 1, X, None)
        tail, bracket = _tail_and_bracket(p, d, q, X, spec.tail_policy, mp.mpf(0))
        value += tail
        if s.imag == 0:
            value = value.real
        return value, abs(bracket)


def frac_integral_adaptive(power, log_degree, s_shift, ctx: PrecisionContext, tol=None,
                           start_cutoff: int = 256, tail_policy: str = "halfmean",
                           max_cutoff: int = 2**22):
    """Double the cutoff until the tail bracket is at or below ``tol``.

    The exact head sum is extended incrementally across doublings, so the
    total work is linear in the final cutoff.
    """
    tol = mp.mpf(ctx.default_tolerance if tol is None else tol)
    # Validate the spec once up front (domain checks live in __post_init__).
    FracIntegralSpec(power, log_degree, s_shift, cutoff=max(4, start_cutoff),
                     tail_policy=tail_policy)
    with ctx.workprec(64):
        s = as_mpc(s_shift)
        q = s + power
        exponents = [q - i for i in range(power + 1)]
        head = mp.mpc(0)
        prev = None
        k_lo, X = 1, start_cutoff
        while X <= max_cutoff:
            delta, prev = _head_extend(power, log_degree, exponents, k_lo, X, prev)
            head += delta
            tail, bracket = _tail_and_bracket(power, log_degree, q, X, tail_policy, tol)
            if abs(bracket) <= tol:
                value = head + tail
                if s.imag == 0:
                    value = value.real
                return value, abs(bracket)
            k_lo = X + 1
            X *= 2
    raise ConvergenceError(f"frac_integral(p={power}, d={log_degree}): bracket stuck above {tol}")


# ---------------------------------------------------------------------------
# Closed-form H_m norms of the fractional part
# ---------------------------------------------------------------------------

def hm_norm_closed(m: int, ctx: PrecisionContext, stieltjes_table=None, tol=None):
    """Closed-form ||{.}||_(m)^2 from zeta derivatives at 0 and gamma_k.

    Returns ``(value, bracket)`` with the bracket propagated from the
    Cauchy-circle derivative oracle and the Stieltjes table.
    """
    if m < 0:
        raise DomainError("norm order must be >= 0")
    tol = mp.mpf(ctx.default_tolerance if tol is None else tol)
    with ctx.workprec(64):
        part_tol = tol / (2 * (m + 2))
        value = mp.mpf(1 - (-1) ** m)
        bracket = mp.mpf(0)
        for k in range(m + 2):
            if k == 0:
                zk, zb = zeta_em(mp.mpf(0), ctx, tol=part_tol)
            else:
                zk, zb = cauchy_derivative(mp.mpf(0), k, ctx, tol=part_tol)
            value += 2 * (-1) ** k * zk.real / mp.factorial(k)
            bracket += 2 * zb / mp.factorial(k)
        for k in range(m + 1):
            if stieltjes_table is not None:
                g = stieltjes_table.gamma(k)
                gb = stieltjes_table.brackets[k]
            else:
                from .stieltjes import stieltjes_em
                g, gb = stieltjes_em(k, ctx, tol=part_tol)
            value -= g / mp.factorial(k)
            bracket += gb / mp.factorial(k)
        return value, bracket
