"""Command line front end: ``verify``, ``eval`` and ``table``.

Exit codes: 0 when every requested check passes, 1 when some check fails,
2 for usage errors (bad arguments, unknown ids or families, bad parameters).
"""
from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from ..qpolys import FAMILY_PARAMS, Family, eval_poly
from ..qcore import QCoreError
from . import report as rep
from .catalog import CATALOG, CatalogError, CheckConfig, ResourceError, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _number(text: str):
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def parse_params(text: str | None) -> dict:
    """``"a=0.5,b=0.2,N=4"`` -> dict; integers stay integers."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not of the form k=v")
        k, v = item.split("=", 1)
        k = k.strip()
        if k == "N":
            try:
                out[k] = int(v)
            except ValueError:
                raise UsageError(f"N must be an integer, got {v!r}") from None
        else:
            out[k] = _number(v)
    return out


def parse_grid(spec: str) -> list:
    """``start:stop:num`` (inclusive linspace) or a comma separated list."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid {spec!r} must be start:stop:num")
        a, b = float(parts[0]), float(parts[1])
        try:
            n = int(parts[2])
        except ValueError:
            raise UsageError(f"grid count {parts[2]!r} is not an integer") from None
        if n < 1:
            raise UsageError("grid needs at least one point")
        return [float(x) for x in np.linspace(a, b, n)]
    pts = [_number(x) for x in spec.split(",") if x.strip()]
    if not pts:
        raise UsageError("empty grid")
    return pts


def fmt_value(v) -> str:
    v = complex(v)
    if v.imag == 0.0:
        return f"{v.real:.17g}"
    return f"{v.real:.17g}{v.imag:+.17g}j"


def _family(name: str) -> Family:
    try:
        return Family(name)
    except ValueError:
        raise UsageError(f"unknown family {name!r}; choose from {', '.join(f.value for f in Family)}") from None


def _lmax(text):
    if text is None:
        return None
    try:
        v = float(text)
    except ValueError:
        raise UsageError(f"--lmax must be a number, got {text!r}") from None
    if abs(2 * v - round(2 * v)) > 1e-12 or v < 0:
        raise UsageError(f"--lmax must be a non-negative half-integer, got {text}")
    return v


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsu2", description="Numerical identity checks for quantum SU(2).")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run catalog checks")
    v.add_argument("--suite", default="all", help="'all' or a comma separated list of check ids")
    v.add_argument("--q", type=float, default=0.5)
    v.add_argument("--sigma", default="0.3", help="real, inf or -inf")
    v.add_argument("--tau", default="-0.4", help="real, inf or -inf")
    v.add_argument("--mu", default="0.9", help="real or inf")
    v.add_argument("--lmax", default=None, help="half-integer cap on spins (at most 3)")
    v.add_argument("--report", default=None, help="write the JSON report here")
    v.add_argument("--csv", default=None, help="write a summary CSV here")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--timings", action="store_true", help="record runtimes and timestamps")
    v.add_argument("--quiet", action="store_true")

    e = sub.add_parser("eval", help="evaluate one polynomial")
    e.add_argument("family")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--x", required=True)
    e.add_argument("--params", default="")

    t = sub.add_parser("table", help="tabulate a family as CSV")
    t.add_argument("family")
    t.add_argument("--nmax", type=int, required=True)
    t.add_argument("--grid", required=True, help="start:stop:num or x1,x2,...")
    t.add_argument("--params", default="")

    sub.add_parser("list", help="list catalog ids and polynomial families")
    return p


def _verify(args, out) -> int:
    ids = None if args.suite == "all" else [s.strip() for s in args.suite.split(",") if s.strip()]
    if ids is not None:
        bad = [i for i in ids if i not in CATALOG]
        if bad or not ids:
            raise UsageError(f"unknown check id(s) {bad}; known: {', '.join(CATALOG)}")
    try:
        cfg = CheckConfig(q=args.q, sigma=args.sigma, tau=args.tau, mu=args.mu,
                          lmax=_lmax(args.lmax), workers=max(1, args.workers))
    except ResourceError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    started = rep._now() if args.timings else None
    results = run_suite(cfg, ids)
    finished = rep._now() if args.timings else None
    if not args.quiet:
        for r in results:
            out.write(f"{'PASS' if r.passed else 'FAIL'} {r.id} maxAbsErr={r.maxAbsErr:.3e}\n")
        n_ok = sum(r.passed for r in results)
        out.write(f"{n_ok}/{len(results)} checks passed\n")
    if args.report:
        rep.write_json(rep.build_report(results, cfg, timings=args.timings, started=started, finished=finished),
                       args.report)
    if args.csv:
        rep.write_csv(results, args.csv)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _eval(args, out) -> int:
    fam = _family(args.family)
    val = eval_poly(fam, args.n, _number(args.x), **parse_params(args.params))
    out.write(fmt_value(val) + "\n")
    return EXIT_OK


def _table(args, out) -> int:
    fam = _family(args.family)
    if args.nmax < 0:
        raise UsageError("--nmax must be non-negative")
    params = parse_params(args.params)
    grid = parse_grid(args.grid)
    nmax = min(args.nmax, params["N"]) if "N" in params else args.nmax
    # evaluate everything first so a bad parameter leaves no partial table
    rows = [[fam.value, n, fmt_value(x), fmt_value(eval_poly(fam, n, x, **params))]
            for n in range(nmax + 1) for x in grid]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["family", "n", "x", "value"])
    w.writerows(rows)
    return EXIT_OK


def _list(args, out) -> int:
    out.write("checks:\n")
    for k in CATALOG:
        out.write(f"  {k}\n")
    out.write("families:\n")
    for f in Family:
        out.write(f"  {f.value}({', '.join(FAMILY_PARAMS[f])})\n")
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:   # argparse already printed the usage message
        return EXIT_USAGE if exc.code else EXIT_OK
    handler = {"verify": _verify, "eval": _eval, "table": _table, "list": _list}[args.cmd]
    try:
        return handler(args, out)
    except (UsageError, CatalogError, ResourceError, QCoreError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
