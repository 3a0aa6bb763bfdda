"""Command line front end: expand forms, run named checks, write reports.

Exit codes: 0 success, 1 a congruence failed, 2 usage error, 3 precision or
truncation insufficient to decide.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

from . import cache
from .basis import duke_jenkins, r_p
from .coeffring import PadicScaled, PrecisionError, UnsupportedValuationError, encode_rational
from .forms import FORM_IDS, delta, e2tilde, eichler_integral, eisenstein, eisenstein_p, j_invariant
from .padlimit import DEFAULT_PRECISION, f_alpha_delta_truncated, plan_truncation
from .qseries import QQ, PadicRing, QSeries, WindowError
from .verify import CHECKS, CongruenceReport, exit_code, run_check, suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3

CLASSICAL = ("eisenstein", "delta", "j", "eisenstein-p", "e2tilde", "eichler")
CLASSICAL_CACHE_TERMS = 2000
R3_CACHE_TERMS = 8721


class UsageError(Exception):
    pass


def form_params(form: str, args) -> dict:
    """The parameters that identify ``form``; the cache key uses exactly these."""
    keys = {
        "eisenstein": ("k",), "delta": (), "j": (), "eisenstein-p": ("k", "p"),
        "e2tilde": ("p",), "eichler": ("kappa",), "dj-basis": ("m",), "r-p": ("p",),
        "f-alpha-delta": ("p", "l", "s"),
    }[form]
    return {k: getattr(args, k) for k in keys}


def build_form(form: str, params: dict, terms: int, ring) -> QSeries:
    """The expansion of ``form`` with every coefficient below q^terms."""
    if form == "eisenstein":
        return eisenstein(params["k"], terms, ring)
    if form == "delta":
        return delta(terms, ring)
    if form == "j":
        return j_invariant(terms, ring)
    if form == "eisenstein-p":
        return eisenstein_p(params["k"], params["p"], terms, ring)
    if form == "e2tilde":
        return e2tilde(params["p"], terms, ring)
    if form == "eichler":
        kappa = params["kappa"]
        if kappa != -10:
            raise UsageError("eichler is implemented for Delta only, so kappa must be -10")
        if ring is not QQ:
            raise UsageError("eichler is only available over the rationals")
        return eichler_integral(delta(terms), kappa)
    if form == "dj-basis":
        return duke_jenkins(params["m"], terms, ring)
    if form == "r-p":
        return r_p(params["p"], terms, ring)
    if form == "f-alpha-delta":
        p = params["p"]
        plan = plan_truncation(p, 12, params["l"], params["s"], terms)
        return f_alpha_delta_truncated(p, plan, ring)
    raise UsageError(f"unknown form {form!r}")


def _cache_terms(form: str, params: dict, terms: int) -> int:
    if form in CLASSICAL:
        return max(terms, CLASSICAL_CACHE_TERMS)
    if form == "r-p" and params["p"] == 3:
        return max(terms, R3_CACHE_TERMS)
    return terms


def expand(form: str, params: dict, terms: int, ring, cache_dir: Optional[str] = None) -> QSeries:
    """Memoized ``build_form``; the result never depends on the cache contents."""
    if cache_dir is None:
        return build_form(form, params, terms, ring)
    try:
        hit = cache.cache_read(cache_dir, form, params, ring, terms)
    except cache.CacheError as exc:
        print(f"warning: ignoring cache entry: {exc}", file=sys.stderr)
        hit = None
    if hit is not None:
        return hit.series
    full = build_form(form, params, _cache_terms(form, params, terms), ring)
    if full.prec_bound > full.min_exp:
        cache.cache_write(cache_dir, cache.CacheEntry(form, params, full))
    return full.truncate(terms)


def _encode(c) -> str:
    return c.encode() if isinstance(c, PadicScaled) else encode_rational(c)


def format_series(series: QSeries, form: str, params: dict, fmt: str) -> str:
    lines = [f"{n} {_encode(series.coeff(n))}" for n in range(series.min_exp, series.prec_bound)]
    if fmt == "plain":
        return "\n".join(lines)
    doc = {
        "form": form, "params": params, "ring": str(series.ring),
        "minExp": series.min_exp, "precBound": series.prec_bound,
        "coefficients": [line.split(" ", 1)[1] for line in lines],
    }
    return json.dumps(doc, indent=2)


def _resolve_cache_dir(args) -> Optional[str]:
    return os.environ.get("MOCKMOD_CACHE_DIR") or args.cache_dir


def _ring(args, p: int):
    if args.ring == "rational":
        return QQ
    return PadicRing(p, args.precision)


def cmd_expand(args) -> int:
    if args.terms < 1:
        raise UsageError("--terms must be positive")
    params = form_params(args.form, args)
    ring = _ring(args, args.p)
    series = expand(args.form, params, args.terms, ring, _resolve_cache_dir(args))
    print(format_series(series, args.form, params, args.format))
    return EXIT_OK


def cmd_plan(args) -> int:
    plan = plan_truncation(args.p, 12, args.l, args.s, args.terms)
    out = plan.to_json()
    out["r"] = plan.depth
    out["rpTerms"] = plan.rp_terms
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _run_one(check_id: str, options: dict) -> CongruenceReport:
    start = time.perf_counter()
    try:
        return run_check(check_id, **options)
    except (PrecisionError, WindowError) as exc:
        return CongruenceReport.undecided(check_id, options.get("p"), exc,
                                          (time.perf_counter() - start) * 1000,
                                          options.get("precision"))


def cmd_verify(args) -> int:
    options = {"terms": args.terms, "precision": args.precision, "p": args.p}
    report = _run_one(args.check, options)
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.line())
        for d in report.details:
            print(f"  {d}")
        if report.first_mismatch is not None:
            print(f"  first mismatch: {report.to_json()['firstMismatch']}")
    if report.error is not None:
        print(f"error: {report.error}", file=sys.stderr)
    return exit_code([report])


def cmd_checks(args) -> int:
    for check_id in CHECKS:
        print(check_id)
    return EXIT_OK


def summary(reports) -> dict:
    reports = list(reports)
    return {
        "checks": len(reports),
        "passed": sum(r.passed for r in reports),
        "failed": sum(not r.passed and r.error is None for r in reports),
        "undecided": sum(r.error is not None for r in reports),
    }


def emit_report(reports, path, timing: bool = True) -> dict:
    """Write the reports as a JSON array whose last element is the summary."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to emit")
    entries = []
    for r in reports:
        doc = r.to_json()
        if not timing:
            doc["wallTimeMs"] = None
        entries.append(doc)
    summ = summary(reports)
    entries.append({"summary": summ})
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(entries, fh, indent=2)
        fh.write("\n")
    return summ


def run_suite(p: int, jobs: int = 1) -> list[CongruenceReport]:
    plan = suite(p)
    if jobs <= 1:
        return [_run_one(c, o) for c, o in plan]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, [c for c, _ in plan], [o for _, o in plan]))


def cmd_report(args) -> int:
    reports = run_suite(args.p, args.jobs)
    for r in reports:
        print(r.line())
    summ = emit_report(reports, args.out, timing=not args.no_timing)
    print(f"summary: {summ['passed']}/{summ['checks']} passed, {summ['failed']} failed, "
          f"{summ['undecided']} undecided")
    return exit_code(reports)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mockmod", description=__doc__.splitlines()[0])
    parser.add_argument("--cache-dir", default=None,
                        help="coefficient cache directory (MOCKMOD_CACHE_DIR takes precedence)")
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("expand", help="print a q-expansion")
    ex.add_argument("--form", required=True, choices=FORM_IDS)
    ex.add_argument("--k", type=int, default=4, help="weight for eisenstein and eisenstein-p")
    ex.add_argument("--p", type=int, default=3)
    ex.add_argument("--m", type=int, default=2, help="pole order for dj-basis")
    ex.add_argument("--l", type=int, default=3, help="target exponent for f-alpha-delta")
    ex.add_argument("--s", type=int, default=7, help="scaling exponent for f-alpha-delta")
    ex.add_argument("--kappa", type=int, default=-10)
    ex.add_argument("--terms", type=int, default=10, help="print coefficients below q^TERMS")
    ex.add_argument("--ring", choices=("rational", "padic"), default="rational")
    ex.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    ex.add_argument("--format", choices=("plain", "json"), default="plain")
    ex.set_defaults(func=cmd_expand)

    pl = sub.add_parser("plan", help="truncation plan for f-alpha-delta as JSON")
    pl.add_argument("--p", type=int, default=3)
    pl.add_argument("--l", type=int, default=3)
    pl.add_argument("--s", type=int, default=7)
    pl.add_argument("--terms", type=int, default=323)
    pl.set_defaults(func=cmd_plan)

    ve = sub.add_parser("verify", help="run one named check")
    ve.add_argument("--check", required=True, choices=tuple(CHECKS))
    ve.add_argument("--terms", type=int, default=None)
    ve.add_argument("--precision", type=int, default=None)
    ve.add_argument("--p", type=int, default=None)
    ve.add_argument("--format", choices=("line", "json"), default="line")
    ve.set_defaults(func=cmd_verify)

    ch = sub.add_parser("checks", help="list check ids")
    ch.set_defaults(func=cmd_checks)

    rp = sub.add_parser("report", help="run the suite for a prime and write JSON")
    rp.add_argument("--p", type=int, required=True)
    rp.add_argument("--out", required=True)
    rp.add_argument("--jobs", type=int, default=1, help="run checks in parallel processes")
    rp.add_argument("--no-timing", action="store_true", help="omit wall times for byte-stable output")
    rp.set_defaults(func=cmd_report)
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionError, WindowError) as exc:
        print(f"precision: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValueError, UnsupportedValuationError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
