"""Unified command-line frontend and the end-to-end identity verifier.

Output is deterministic: identical configuration produces byte-identical
CSV/JSON, with numbers rendered as decimal strings carrying
ceil(precision_bits * 0.301) significant digits.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import mpmath as mp

from . import coefficients, fracexpand, laguerre, oracle, stieltjes, zetaengine
from .errors import ZetalagError
from .numkernel import COMB, make_context

SUITES = (
    "parseval",
    "orthogonality",
    "egf",
    "norms",
    "reflection",
    "dual_stieltjes",
    "series_vs_oracle",
    "fracpart",
)


@dataclass
class RunConfig:
    precision_bits: int = 192
    tolerance: float = 1e-12
    max_n: int = 64
    max_m: int = 6
    output_format: str = "csv"
    suite_selector: tuple = SUITES
    out_path: str | None = None

    def __post_init__(self):
        if self.output_format not in ("csv", "json"):
            raise ZetalagError(f"unknown output format {self.output_format!r}")

    @property
    def ctx(self):
        return make_context(self.precision_bits, self.tolerance)

    @property
    def digits(self):
        return math.ceil(self.precision_bits * 0.301)


def fmt(x, config: RunConfig) -> str:
    """Render a number as a decimal string at the configured digit count."""
    return mp.nstr(mp.mpf(x) if not isinstance(x, mp.mpc) else x,
                   config.digits, strip_zeros=True)


# ---------------------------------------------------------------------------
# Shared table construction (cached per process)
# ---------------------------------------------------------------------------

_CACHE = {}


def _stieltjes_table(config: RunConfig, depth: int):
    key = ("stieltjes", config.precision_bits, config.tolerance, depth)
    if key not in _CACHE:
        sched = stieltjes.combined_tolerance_schedule(depth, config.tolerance)
        _CACHE[key] = stieltjes.build_table(depth, config.ctx, tol_schedule=sched)
    return _CACHE[key]


def _coeff_table(config: RunConfig):
    key = ("coeffs", config.precision_bits, config.tolerance, config.max_m, config.max_n)
    if key not in _CACHE:
        stable = _stieltjes_table(config, config.max_m + config.max_n)
        _CACHE[key] = coefficients.build_coefficient_table(
            config.max_m, config.max_n, stable, config.ctx
        )
    return _CACHE[key]


def _ell_nm_bracket(n, m, stable, ctx):
    # Propagated Stieltjes brackets through the Theorem-1.1 sum.
    with ctx.workprec():
        col = [mp.fsum(stable.brackets[j] / mp.factorial(j) for j in range(mm + 1))
               for mm in range(m + n + 1)]
        return mp.fsum(COMB.binomial(n, k) * col[m + k] for k in range(n + 1))


# ---------------------------------------------------------------------------
# Emitters
# ---------------------------------------------------------------------------

def _write(text: str, config: RunConfig):
    if config.out_path:
        try:
            with open(config.out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ZetalagError(f"cannot write output to {config.out_path}: {exc}") from exc
    else:
        sys.stdout.write(text)


def emit_table(kind: str, config: RunConfig) -> str:
    """Deterministic CSV/JSON artifact for stieltjes / coeffs / norms."""
    ctx = config.ctx
    if kind == "stieltjes":
        stable = _stieltjes_table(config, config.max_n)
        rows = [
            {"n": n, "gamma": fmt(stable.gamma(n), config),
             "bracket": fmt(stable.brackets[n], config), "method": stable.method}
            for n in range(config.max_n + 1)
        ]
        header = ["n", "gamma", "bracket", "method"]
    elif kind == "coeffs":
        table = _coeff_table(config)
        stable = table.source_table
        rows = [
            {"m": m, "n": n, "ell_nm": fmt(table.entry(n, m), config),
             "bracket": fmt(_ell_nm_bracket(n, m, stable, ctx), config)}
            for m in range(config.max_m + 1)
            for n in range(config.max_n + 1)
        ]
        header = ["m", "n", "ell_nm", "bracket"]
    elif kind == "norms":
        stable = _stieltjes_table(config, max(config.max_m, 2))
        rows = []
        for m in range(config.max_m + 1):
            closed, cb = oracle.hm_norm_closed(m, ctx, stieltjes_table=stable,
                                               tol=config.tolerance)
            quad, qb = oracle.frac_integral_adaptive(2, m, 0, ctx, tol=config.tolerance)
            quad = quad / mp.factorial(m)
            rows.append({"m": m, "closed_form": fmt(closed, config),
                         "quadrature": fmt(quad, config),
                         "bracket": fmt(cb + qb, config)})
        header = ["m", "closed_form", "quadrature", "bracket"]
    else:
        raise ZetalagError(f"unknown table kind {kind!r}")

    if config.output_format == "json":
        if kind == "coeffs":
            nested = {}
            for r in rows:
                nested.setdefault(str(r["m"]), {})[str(r["n"])] = {
                    "ell_nm": r["ell_nm"], "bracket": r["bracket"]
                }
            return json.dumps(nested, indent=2, sort_keys=True) + "\n"
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(str(r[h]) for h in header) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Verify suites
# ---------------------------------------------------------------------------

def _suite_parseval(config, report):
    ctx = config.ctx
    table = _coeff_table(config)
    norm0, nb = oracle.hm_norm_closed(0, ctx, stieltjes_table=table.source_table,
                                      tol=config.tolerance)
    vals = [coefficients.parseval_partial(0, N, table, ctx)
            for N in range(config.max_n + 1)]
    worst_drop = max(
        (float(vals[i] - vals[i + 1]) for i in range(len(vals) - 1)), default=0.0
    )
    report.add("parseval", "partial sums monotone", max(0.0, worst_drop), 0.0)
    excess = float(vals[-1] - norm0)
    report.add("parseval", "Bessel bound (partial <= norm)", max(0.0, excess),
               float(nb) + 1e-10)


def _suite_orthogonality(config, report):
    ctx = config.ctx
    worst = 0.0
    for m in range(0, 3):
        g = laguerre.gram_matrix(8, m, ctx)
        for n in range(9):
            for k in range(9):
                expect = COMB.binomial(n + m, m) if n == k else 0
                worst = max(worst, abs(float(g[n][k] - expect)))
    report.add("orthogonality", "Gram matrix = diag(C(n+m,m)), n,k<=8, m<=2",
               worst, 1e-8)


def _suite_egf(config, report):
    ctx = config.ctx
    table = _coeff_table(config)
    worst = 0.0
    K = min(30, config.max_n, len(table.ell0_column) - 1 - 3)
    for m in range(0, 4):
        for z in (mp.mpf("0.3"), mp.mpf("-0.3"), mp.mpc(0, "0.5")):
            worst = max(worst, float(coefficients.egf_check(m, z, K, table, ctx)))
    report.add("egf", f"EGF identity residual at K={K}, m<=3", worst, 1e-12)


def _suite_norms(config, report):
    ctx = config.ctx
    stable = _stieltjes_table(config, max(config.max_m, 2))
    worst = 0.0
    for m in range(3):
        closed, _ = oracle.hm_norm_closed(m, ctx, stieltjes_table=stable,
                                          tol=min(config.tolerance, 1e-10))
        quad, _ = oracle.frac_integral_adaptive(2, m, 0, ctx, tol=1e-10)
        worst = max(worst, abs(float(closed - quad / mp.factorial(m))))
    report.add("norms", "closed-form vs quadrature H_m norms, m<=2", worst, 1e-8)


def _suite_reflection(config, report):
    ctx = config.ctx
    if config.max_n < 64:
        # Reflection evaluates the series at 1 - s, which needs ~48 terms.
        config = RunConfig(config.precision_bits, config.tolerance, 64,
                           config.max_m, config.output_format)
    table = _coeff_table(config)
    worst_chi = 0.0
    for s in (mp.mpc("0.3", "2.0"), mp.mpc("-1.7", "0.4"), mp.mpc("2.2", "-3.1")):
        worst_chi = max(worst_chi, float(abs(zetaengine.chi(s, ctx)
                                             * zetaengine.chi(1 - s, ctx) - 1)))
    for t in ("1.5", "7.25", "13.0"):
        worst_chi = max(worst_chi,
                        float(abs(abs(zetaengine.chi(mp.mpc("0.5", t), ctx)) - 1)))
    report.add("reflection", "chi(s)chi(1-s)=1 and |chi(1/2+it)|=1", worst_chi, 1e-10)
    worst = 0.0
    for s in (mp.mpc(0), mp.mpc(-1), mp.mpc("0.3", "5.0")):
        mine = zetaengine.zeta_reflected(s, table, config.tolerance, ctx) \
            if s != 0 else zetaengine.zeta_reflected(s, table, config.tolerance, ctx)
        ref, _ = oracle.zeta_em(s, ctx, tol=1e-12) if s != 0 else oracle.zeta_em(s, ctx, tol=1e-12)
        worst = max(worst, float(abs(mine - ref)))
    report.add("reflection", "reflected zeta vs oracle at {0,-1,0.3+5i}", worst, 1e-8)


def _suite_dual_stieltjes(config, report):
    ctx = config.ctx
    stable = _stieltjes_table(config, config.max_n + config.max_m)
    worst = 0.0
    for n in range(1, 9):
        vi, bi = stieltjes.stieltjes_integral(n, ctx, 10**4)
        slack = float(abs(stable.gamma(n) - vi) - (stable.brackets[n] + bi))
        worst = max(worst, slack)
    report.add("dual_stieltjes", "EM vs integral gamma_n within brackets, n<=8",
               max(0.0, worst), 0.0)


def _suite_series_vs_oracle(config, report):
    ctx = config.ctx
    if config.max_n < 64:
        # The series needs ~48 terms at s = 2 to clear the 1e-11 target.
        config = RunConfig(config.precision_bits, config.tolerance, 64,
                           config.max_m, config.output_format)
    table = _coeff_table(config)
    tol = min(config.tolerance, 1e-11)
    worst = 0.0
    for s in (mp.mpf(2), mp.mpf("1.5"), mp.mpc("1.5", "5")):
        mine = zetaengine.zeta_derivative(s, 0, table, tol, ctx)
        ref, _ = oracle.zeta_em(s, ctx, tol=tol)
        worst = max(worst, float(abs(mine - ref)))
    report.add("series_vs_oracle", "rational series vs EM zeta", worst, 1e-10)
    worst = 0.0
    for m in (1, 2):
        mine = zetaengine.zeta_derivative(mp.mpf(2), m, table, tol, ctx)
        ref, rb = oracle.cauchy_derivative(mp.mpf(2), m, ctx, tol=1e-10)
        worst = max(worst, float(abs(mine - ref) - rb))
    report.add("series_vs_oracle", "derivative extraction vs Cauchy circle",
               max(0.0, worst), 1e-8)


def _suite_fracpart(config, report):
    ctx = config.ctx
    table = _coeff_table(config)
    n_lo, n_hi = max(8, config.max_n // 4), config.max_n
    rows = fracexpand.nonuniformity_probe([n_lo, n_hi], table, ctx)
    report.add("fracpart", f"far-from-integer sup error decreases {n_lo}->{n_hi}",
               max(0.0, rows[1].sup_err_far - rows[0].sup_err_far), 0.0)
    report.add("fracpart", "sup error floor persists near integers",
               max(0.0, 0.2 - rows[1].sup_err_near_int), 0.0)
    r_hi = 1 - 20 / config.max_n if config.max_n > 40 else 0.5
    target = oracle.zeta_em(mp.mpf("0.5"), ctx, tol=1e-12)[0].real + 1
    sums = fracexpand.abel_sum_ell([mp.mpf("0.3"), r_hi], table, ctx)
    gap_lo = abs(sums[0][1] - target)
    gap_hi = abs(sums[1][1] - target)
    report.add("fracpart", f"Abel sum trend toward zeta(1/2)+1 (r=0.3 vs r={r_hi})",
               max(0.0, float(gap_hi - gap_lo)), 0.0)


_SUITE_FNS = {
    "parseval": _suite_parseval,
    "orthogonality": _suite_orthogonality,
    "egf": _suite_egf,
    "norms": _suite_norms,
    "reflection": _suite_reflection,
    "dual_stieltjes": _suite_dual_stieltjes,
    "series_vs_oracle": _suite_series_vs_oracle,
    "fracpart": _suite_fracpart,
}


class VerifyReport:
    def __init__(self):
        self.items = []

    def add(self, suite, name, residual, bound):
        self.items.append({
            "suite": suite,
            "identity": name,
            "residual": residual,
            "bound": bound,
            "pass": residual <= bound,
        })

    @property
    def ok(self):
        return all(item["pass"] for item in self.items)


def run_verify(config: RunConfig) -> VerifyReport:
    """Execute the selected identity suites; report residuals and bounds."""
    report = VerifyReport()
    for suite in sorted(config.suite_selector):
        if suite not in _SUITE_FNS:
            raise ZetalagError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        _SUITE_FNS[suite](config, report)
    return report


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="zetalag",
        description="Rational-series zeta evaluation, Stieltjes constants, and "
                    "Fourier-Laguerre expansion of the fractional part.",
    )
    p.add_argument("--prec", type=int,
                   default=int(os.environ.get("ZL_DEFAULT_PREC", "192")),
                   help="working precision in bits (default 192, env ZL_DEFAULT_PREC)")
    p.add_argument("--tol", type=float, default=1e-12, help="target tolerance")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="write output to PATH instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("stieltjes", help="certified Stieltjes constants (CSV)")
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--method", choices=("em", "integral", "both"), default="em")
    sp.add_argument("--cutoff", type=int, default=10**4,
                    help="integral-method cutoff X")

    cp = sub.add_parser("coeffs", help="coefficient grid ell_n^(m) (CSV)")
    cp.add_argument("--max-n", type=int, default=64)
    cp.add_argument("--max-m", type=int, default=6)
    cp.add_argument("--parseval", action="store_true",
                    help="emit running Parseval partial sums instead of the grid")
    cp.add_argument("--m", type=int, default=0, help="order for --parseval")

    lp = sub.add_parser("laguerre", help="modified Laguerre basis values")
    lp.add_argument("--n", type=int, default=0)
    lp.add_argument("--m", type=int, default=0)
    lp.add_argument("--x", type=str, default="2.0")
    lp.add_argument("--gram", action="store_true", help="emit the Gram matrix as CSV")
    lp.add_argument("--max-n", type=int, default=8)

    zp = sub.add_parser("zeta", help="rational-series zeta / derivatives (JSON)")
    zp.add_argument("--re", type=str, required=True)
    zp.add_argument("--im", type=str, default="0")
    zp.add_argument("--m", type=int, default=0)
    zp.add_argument("--max-n", type=int, default=256,
                    help="coefficient grid depth available to the series")

    op = sub.add_parser("oracle", help="independent ground-truth evaluations (JSON)")
    osub = op.add_subparsers(dest="oracle_command", required=True)
    oz = osub.add_parser("zeta")
    oz.add_argument("--re", type=str, required=True)
    oz.add_argument("--im", type=str, default="0")
    oz.add_argument("--deriv", type=int, default=0)
    on = osub.add_parser("norm")
    on.add_argument("--m", type=int, required=True)
    oi = osub.add_parser("integral")
    oi.add_argument("--power", type=int, required=True, choices=(1, 2))
    oi.add_argument("--logdeg", type=int, required=True)
    oi.add_argument("--s-shift", type=str, default="1")
    oi.add_argument("--cutoff", type=int, default=4096)
    oi.add_argument("--tail", choices=("halfmean", "bracket_crude"), default="halfmean")

    fp = sub.add_parser("fracpart", help="Fourier-Laguerre expansion of {x}")
    fp.add_argument("--x", type=str, default="2.5")
    fp.add_argument("--m", type=int, default=0)
    fp.add_argument("--terms", type=int, default=64)
    fp.add_argument("--sum", choices=("direct", "abel", "cesaro"), default="direct")
    fp.add_argument("--r", type=str, default="0.5", help="Abel parameter for --sum abel")
    fp.add_argument("--probe", action="store_true")
    fp.add_argument("--max-terms", type=int, default=100)

    np_ = sub.add_parser("norm", help="H_m norms: closed form vs quadrature (CSV)")
    np_.add_argument("--max-m", type=int, default=2)

    vp = sub.add_parser("verify", help="run the end-to-end identity suites")
    vp.add_argument("--suite", action="append", choices=SUITES, default=None)
    vp.add_argument("--max-n", type=int, default=64)
    vp.add_argument("--max-m", type=int, default=6)
    return p


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def _cmd_stieltjes(args, config):
    ctx = config.ctx
    lines = ["n,gamma,bracket,method"]
    rows = []
    if args.method in ("em", "both"):
        for n in range(args.max_n + 1):
            v, b = stieltjes.stieltjes_em(n, ctx)
            rows.append((n, v, b, "em"))
    if args.method in ("integral", "both"):
        for n in range(1, args.max_n + 1):
            v, b = stieltjes.stieltjes_integral(n, ctx, args.cutoff)
            rows.append((n, v, b, "integral"))
    for n, v, b, method in rows:
        lines.append(f"{n},{fmt(v, config)},{fmt(b, config)},{method}")
    _write("\n".join(lines) + "\n", config)
    return 0


def _cmd_coeffs(args, config):
    config.max_n = args.max_n
    config.max_m = args.max_m if not args.parseval else max(args.max_m, args.m)
    ctx = config.ctx
    table = _coeff_table(config)
    if args.parseval:
        lines = ["N,partial_sum"]
        for N in range(args.max_n + 1):
            lines.append(
                f"{N},{fmt(coefficients.parseval_partial(args.m, N, table, ctx), config)}"
            )
        _write("\n".join(lines) + "\n", config)
        return 0
    _write(emit_table("coeffs", config), config)
    return 0


def _cmd_laguerre(args, config):
    ctx = config.ctx
    if args.gram:
        g = laguerre.gram_matrix(args.max_n, args.m, ctx)
        lines = [",".join(fmt(v, config) for v in row) for row in g]
        _write("\n".join(lines) + "\n", config)
        return 0
    value = laguerre.eval_recurrence(args.n, args.m, mp.mpf(args.x), ctx)
    _write(fmt(value, config) + "\n", config)
    return 0


def _cmd_zeta(args, config):
    ctx = config.ctx
    config.max_n = args.max_n
    config.max_m = max(config.max_m, args.m)
    table = _coeff_table(config)
    s = mp.mpc(mp.mpf(args.re), mp.mpf(args.im))
    if s.real < 0.5 and args.m == 0:
        value = zetaengine.zeta_reflected(s, table, config.tolerance, ctx)
        payload = {"value_re": fmt(value.real, config), "value_im": fmt(value.imag, config),
                   "terms_used": None, "tail_bound": None, "path": "reflection"}
    else:
        res = zetaengine.S_m(s, args.m, table, config.tolerance, ctx)
        value = zetaengine.zeta_derivative(s, args.m, table, config.tolerance, ctx)
        payload = {"value_re": fmt(mp.re(value), config),
                   "value_im": fmt(mp.im(value), config),
                   "terms_used": res.terms_used,
                   "tail_bound": fmt(res.tail_bound, config),
                   "path": res.path}
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", config)
    return 0


def _cmd_oracle(args, config):
    ctx = config.ctx
    if args.oracle_command == "zeta":
        s = mp.mpc(mp.mpf(args.re), mp.mpf(args.im))
        if args.deriv == 0:
            v, b = oracle.zeta_em(s, ctx, tol=config.tolerance)
        else:
            v, b = oracle.cauchy_derivative(s, args.deriv, ctx, tol=config.tolerance)
        payload = {"value_re": fmt(v.real, config), "value_im": fmt(v.imag, config),
                   "bracket": fmt(b, config)}
    elif args.oracle_command == "norm":
        v, b = oracle.hm_norm_closed(args.m, ctx, tol=config.tolerance)
        payload = {"value": fmt(v, config), "bracket": fmt(b, config)}
    else:
        spec = oracle.FracIntegralSpec(args.power, args.logdeg, mp.mpf(args.s_shift),
                                       cutoff=args.cutoff, tail_policy=args.tail)
        v, b = oracle.frac_integral(spec, ctx)
        v = mp.mpc(v)
        payload = {"value_re": fmt(v.real, config), "value_im": fmt(v.imag, config),
                   "bracket": fmt(b, config)}
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", config)
    return 0


def _cmd_fracpart(args, config):
    ctx = config.ctx
    if args.probe:
        config.max_n = max(config.max_n, args.max_terms)
        table = _coeff_table(config)
        n_list = sorted({max(1, args.max_terms // 10), args.max_terms})
        rows = fracexpand.nonuniformity_probe(n_list, table, ctx)
        lines = ["N,sup_err_near_int,sup_err_far"]
        for row in rows:
            lines.append(f"{row.N},{row.sup_err_near_int!r},{row.sup_err_far!r}")
        _write("\n".join(lines) + "\n", config)
        return 0
    config.max_n = max(config.max_n, args.terms)
    config.max_m = max(config.max_m, args.m)
    table = _coeff_table(config)
    if args.sum == "direct":
        state = fracexpand.make_state(args.m, args.terms, table, ctx)
        value = fracexpand.partial_sum(mp.mpf(args.x), state, ctx)
        payload = {"x": args.x, "m": args.m, "terms": args.terms,
                   "partial_sum": fmt(value, config)}
    elif args.sum == "abel":
        ((r, value),) = fracexpand.abel_sum_ell([mp.mpf(args.r)], table, ctx)
        payload = {"r": args.r, "abel_sum": fmt(value, config)}
    else:
        value = fracexpand.cesaro_sum_ell(args.terms, table, ctx)
        payload = {"terms": args.terms, "cesaro_mean": fmt(value, config)}
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", config)
    return 0


def _cmd_norm(args, config):
    config.max_m = args.max_m
    _write(emit_table("norms", config), config)
    return 0


def _cmd_verify(args, config):
    config.max_n = args.max_n
    config.max_m = args.max_m
    config.suite_selector = tuple(args.suite) if args.suite else SUITES
    report = run_verify(config)
    lines = []
    for item in report.items:
        status = "PASS" if item["pass"] else "FAIL"
        lines.append(
            f"[{status}] {item['suite']}: {item['identity']} "
            f"(residual {item['residual']:.3e}, bound {item['bound']:.3e})"
        )
    lines.append("verify: " + ("all identities hold" if report.ok else "FAILURES present"))
    _write("\n".join(lines) + "\n", config)
    return 0 if report.ok else 1


_COMMANDS = {
    "stieltjes": _cmd_stieltjes,
    "coeffs": _cmd_coeffs,
    "laguerre": _cmd_laguerre,
    "zeta": _cmd_zeta,
    "oracle": _cmd_oracle,
    "fracpart": _cmd_fracpart,
    "norm": _cmd_norm,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    config = RunConfig(
        precision_bits=args.prec,
        tolerance=args.tol,
        output_format=args.format,
        out_path=args.out,
    )
    try:
        return _COMMANDS[args.command](args, config)
    except ZetalagError as exc:
        print(f"zetalag: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
