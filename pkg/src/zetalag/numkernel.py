"""Arithmetic substrate: precision contexts, complex points, exact combinatorics.

Every other module performs its floating arithmetic through a
:class:`PrecisionContext`, which pins the binary working precision and the
default target tolerance for adaptive routines.  Combinatorial quantities
(factorials, binomial coefficients, Bernoulli numbers) are kept exact and are
only converted to floats at the point of use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .errors import DomainError, PrecisionError

# Extra mantissa bits carried internally so last-digit roundoff never
# contaminates a digit the context promises.
GUARD_BITS = 32

#: Largest Bernoulli index served by :func:`bernoulli`.
J_MAX = 2048


@dataclass(frozen=True)
class PrecisionContext:
    """Working-precision configuration governing all arithmetic in a run."""

    precision_bits: int
    default_tolerance: float

    def workprec(self, extra: int = 0):
        """Context manager setting mpmath precision to the working mantissa."""
        return mp.workprec(self.precision_bits + GUARD_BITS + max(0, extra))

    @property
    def tolerance(self):
        return mp.mpf(self.default_tolerance)


def make_context(precision_bits: int = 192, tolerance: float = 1e-12) -> PrecisionContext:
    """Build a validated precision context.

    Rejects precision below 64 bits and tolerances finer than the mantissa
    can represent (the tolerance must stay above ``2**(-precision_bits+8)``).
    """
    if not isinstance(precision_bits, int) or precision_bits < 64:
        raise PrecisionError(f"precision_bits must be an integer >= 64, got {precision_bits!r}")
    tolerance = float(tolerance)
    if not tolerance > 0:
        raise PrecisionError(f"tolerance must be positive, got {tolerance!r}")
    if tolerance < 2.0 ** (-(precision_bits - 8)):
        raise PrecisionError(
            f"tolerance {tolerance:g} is finer than a {precision_bits}-bit mantissa supports"
        )
    return PrecisionContext(precision_bits=precision_bits, default_tolerance=tolerance)


@dataclass(frozen=True)
class ComplexPoint:
    """A complex argument s = sigma + i*t with finite components."""

    re: float
    im: float = 0.0

    def __post_init__(self):
        for part in (self.re, self.im):
            if not mp.isfinite(mp.mpf(part)):
                raise DomainError(f"non-finite component in complex point: {part!r}")

    @property
    def value(self):
        return mp.mpc(self.re, self.im)


def as_mpc(s):
    """Coerce ComplexPoint / complex / real input to an mpmath complex."""
    if isinstance(s, ComplexPoint):
        return s.value
    z = mp.mpc(s)
    if not (mp.isfinite(z.real) and mp.isfinite(z.imag)):
        raise DomainError(f"non-finite complex argument: {s!r}")
    return z


class CombinatoricsCache:
    """Exact factorials, binomial coefficients and Bernoulli numbers.

    All values are exact integers or rationals; no rounding ever enters the
    cache.  Instances are read-only after construction and safe to share.
    """

    def __init__(self, k_max: int = 4096, j_max: int = J_MAX):
        self.k_max = k_max
        self.j_max = j_max

    def factorial(self, k: int) -> int:
        if k < 0 or k > self.k_max:
            raise DomainError(f"factorial index {k} outside [0, {self.k_max}]")
        return math.factorial(k)

    def binomial(self, n: int, k: int) -> int:
        if n < 0:
            raise DomainError(f"binomial with negative n={n}")
        if k < 0 or k > n:
            return 0
        return math.comb(n, k)

    def bernoulli(self, j: int) -> Fraction:
        if j < 0 or j > self.j_max:
            raise DomainError(f"Bernoulli index {j} outside [0, {self.j_max}]")
        return _bernoulli_exact(j)


@lru_cache(maxsize=None)
def _bernoulli_exact(j: int) -> Fraction:
    p, q = mp.bernfrac(j)
    return Fraction(int(p), int(q))


#: Shared read-only combinatorics table.
COMB = CombinatoricsCache()


def bernoulli(j: int, ctx: PrecisionContext) -> Fraction:
    """Exact rational Bernoulli number B_j for even j >= 2."""
    if j % 2 != 0 or j < 2:
        raise DomainError(f"Bernoulli index must be even and >= 2, got {j}")
    if j > J_MAX:
        raise DomainError(f"Bernoulli index {j} exceeds cap {J_MAX}")
    return _bernoulli_exact(j)


def log_gamma(z, ctx: PrecisionContext):
    """Principal-branch log Gamma at configurable precision.

    Raises :class:`DomainError` at the poles z in {0, -1, -2, ...}.
    """
    with ctx.workprec():
        w = as_mpc(z)
        if w.imag == 0 and w.real <= 0 and w.real == mp.floor(w.real):
            raise DomainError(f"log_gamma pole at z = {w.real}")
        res = mp.loggamma(w)
        return res


def frac_to_mpf(c: Fraction):
    """Convert an exact rational to a float at the current mpmath precision."""
    return mp.mpf(c.numerator) / c.denominator
