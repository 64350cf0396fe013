"""The coefficient grid ell_n^(m), binomial transforms, and EGF checks.

Everything here is driven by a certified Stieltjes table.  The grid is
built column-first: the column ell_0^(m) = -1 + sum_{k<=m} gamma_k/k! is
exact given the table, and each row follows by the binomial transform.
Alternating binomial sums lose about n bits to cancellation, so all
transform arithmetic runs at an elevated internal precision and rounds
once at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from .errors import DomainError, TableDepthError
from .numkernel import COMB, PrecisionContext
from .stieltjes import StieltjesTable


def _require_depth(table: StieltjesTable, n: int, what: str):
    if table.max_index < n:
        raise TableDepthError(
            f"{what} needs gamma_0..gamma_{n}, table holds up to gamma_{table.max_index}"
        )


def ell0(m: int, table: StieltjesTable, ctx: PrecisionContext):
    """ell_0^(m) = -1 + sum_{k=0}^m gamma_k / k!."""
    if m < 0:
        raise DomainError("order must be >= 0")
    _require_depth(table, m, f"ell0({m})")
    with ctx.workprec(2 * m):
        return mp.fsum(table.gamma(k) / mp.factorial(k) for k in range(m + 1)) - 1


def ell(n: int, table: StieltjesTable, ctx: PrecisionContext):
    """Fourier coefficient ell_n: the binomial transform of gamma_k/k!.

    For n >= 1, ell_n = sum_{k=1}^n C(n-1, k-1) (-1)^(n-k) gamma_k / k!;
    n = 0 is served by ``ell0(0)``.
    """
    if n < 1:
        raise DomainError("ell(n) requires n >= 1; use ell0(0) for n = 0")
    _require_depth(table, n, f"ell({n})")
    with ctx.workprec(2 * n):
        return mp.fsum(
            COMB.binomial(n - 1, k - 1) * (-1) ** (n - k) * table.gamma(k) / mp.factorial(k)
            for k in range(1, n + 1)
        )


def ell_nm(n: int, m: int, table: StieltjesTable, ctx: PrecisionContext):
    """ell_n^(m) = -delta_n0 + sum_k C(n,k)(-1)^(n-k) sum_{j<=m+k} gamma_j/j!."""
    if n < 0 or m < 0:
        raise DomainError("indices must be >= 0")
    _require_depth(table, m + n, f"ell_nm({n}, {m})")
    with ctx.workprec(2 * (n + m)):
        # Partial sums of gamma_j/j! shared across k.
        psums = []
        acc = mp.mpf(0)
        for j in range(m + n + 1):
            acc += table.gamma(j) / mp.factorial(j)
            psums.append(acc)
        total = mp.fsum(
            COMB.binomial(n, k) * (-1) ** (n - k) * psums[m + k] for k in range(n + 1)
        )
        if n == 0:
            total -= 1
        return total


def binomial_transform(seq):
    """B: a_n -> sum_k C(n,k) (-1)^(n-k) a_k, same length as the input."""
    seq = list(seq)
    if not seq:
        raise DomainError("binomial transform of an empty sequence")
    return [
        mp.fsum(COMB.binomial(n, k) * (-1) ** (n - k) * seq[k] for k in range(n + 1))
        for n in range(len(seq))
    ]


def inverse_binomial_transform(seq):
    """B^-1: a_n -> sum_k C(n,k) a_k."""
    seq = list(seq)
    if not seq:
        raise DomainError("binomial transform of an empty sequence")
    return [
        mp.fsum(COMB.binomial(n, k) * seq[k] for k in range(n + 1))
        for n in range(len(seq))
    ]


@dataclass(frozen=True)
class CoefficientTable:
    """Grid ell_n^(m) for m <= M, n <= N, plus the ell_0^(m) column to M + N."""

    grid: tuple  # grid[m][n]
    ell0_column: tuple  # index m, length M + N + 1
    source_table: StieltjesTable = field(repr=False)
    max_m: int
    max_n: int

    def entry(self, n: int, m: int = 0):
        if m > self.max_m or n > self.max_n:
            raise TableDepthError(
                f"grid covers m <= {self.max_m}, n <= {self.max_n}; asked for ({n}, {m})"
            )
        return self.grid[m][n]


def build_coefficient_table(max_m: int, max_n: int, table: StieltjesTable,
                            ctx: PrecisionContext) -> CoefficientTable:
    """Column-first construction of the grid from the ell_0 column via B."""
    if max_m < 0 or max_n < 0:
        raise DomainError("table extents must be >= 0")
    _require_depth(table, max_m + max_n, "coefficient table")
    with ctx.workprec(2 * (max_m + max_n)):
        # The column must carry the *builder's* full precision: entry m is
        # amplified by C(n, k) (up to 2^max_n) inside the transform, so the
        # narrower per-entry precision of ell0() would poison deep rows.
        column = []
        acc = mp.mpf(0)
        for m in range(max_m + max_n + 1):
            acc += table.gamma(m) / mp.factorial(m)
            column.append(acc - 1)
        grid = []
        for m in range(max_m + 1):
            row = binomial_transform(column[m : m + max_n + 1])
            grid.append(tuple(row))
    return CoefficientTable(
        grid=tuple(grid),
        ell0_column=tuple(column),
        source_table=table,
        max_m=max_m,
        max_n=max_n,
    )


def egf_check(m: int, z, K: int, table: CoefficientTable, ctx: PrecisionContext):
    """Residual of the EGF identity F_m(z) = G_m(z) e^-z at truncation K."""
    with ctx.workprec(64):
        z = mp.mpc(z)
        if abs(z) >= 1:
            raise DomainError(f"EGF identity stated for |z| < 1, got |z| = {abs(z)}")
        if m > table.max_m or K > table.max_n or m + K > len(table.ell0_column) - 1:
            raise TableDepthError("coefficient table too small for the requested EGF check")
        f = mp.fsum(table.entry(n, m) * z**n / mp.factorial(n) for n in range(K + 1))
        g = mp.fsum(table.ell0_column[m + n] * z**n / mp.factorial(n) for n in range(K + 1))
        return abs(f - mp.exp(-z) * g)


def parseval_partial(m: int, N: int, table: CoefficientTable, ctx: PrecisionContext):
    """sum_{n<=N} C(n+m, m) (ell_n^(m))^2, monotone non-decreasing in N."""
    if m > table.max_m or N > table.max_n:
        raise TableDepthError(
            f"grid covers m <= {table.max_m}, n <= {table.max_n}; asked for m={m}, N={N}"
        )
    with ctx.workprec():
        return mp.fsum(
            COMB.binomial(n + m, m) * table.entry(n, m) ** 2 for n in range(N + 1)
        )
