"""Command-line front end.

stdout carries data only; diagnostics go to stderr. Exit codes:

    0  success
    1  other failure (e.g. reduction budget exhausted)
    2  parse or usage error
    3  input is not an isolated singularity
    4  Newton non-degeneracy could not be established
    5  bad --tau-max
    6  unknown catalog family
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import catalog as catalog_mod
from .errors import DegeneracyError, DomainError, NonIsolatedError, NotConvenientError, SingspecError
from .hertling import InequalityVerdict, ghcts_check, ghcts_reduced_check, hertling_check
from .poly import ParseError, Polynomial, parse, variable_names
from .spectrum import Spectrum, spectrum_newton, spectrum_quasihomogeneous
from .tjurina import exclusion_report

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_NON_ISOLATED = 3
EXIT_DEGENERATE = 4
EXIT_TAU_MAX = 5
EXIT_UNKNOWN_FAMILY = 6


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class OutputOptions:
    fmt: str = "table"  # table | json | csv
    approx: bool = False


def fmt_rational(v, approx: bool = False) -> str:
    v = Fraction(v)
    if approx:
        return f"{float(v):.10g}"
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _convert(value, approx: bool):
    """Rationals become strings, containers are converted recursively."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return fmt_rational(value, approx) if isinstance(value, Fraction) else value
    if isinstance(value, (Spectrum, list, tuple)):
        return [_convert(v, approx) for v in value]
    if isinstance(value, dict):
        return {k: _convert(v, approx) for k, v in value.items()}
    if isinstance(value, InequalityVerdict):
        return verdict_dict(value, approx)
    return str(value)


def verdict_dict(v: InequalityVerdict, approx: bool = False) -> dict:
    return {
        "mode": v.mode,
        "count": v.count,
        "center": fmt_rational(v.center, approx),
        "sum_sq_dev": fmt_rational(v.sum_sq_dev, approx),
        "range": fmt_rational(v.range, approx),
        "lhs": fmt_rational(v.lhs, approx),
        "rhs": fmt_rational(v.rhs, approx),
        "slack": fmt_rational(v.slack, approx),
        "residual": fmt_rational(v.residual, approx),
        "holds": v.holds,
    }


def _flat(value) -> str:
    if isinstance(value, list):
        return " ".join(_flat(v) for v in value)
    if isinstance(value, dict):
        return " ".join(f"{k}={_flat(v)}" for k, v in value.items())
    return "" if value is None else str(value).lower() if isinstance(value, bool) else str(value)


def render(report: dict, opts: OutputOptions) -> str:
    data = _convert(report, opts.approx)
    if opts.fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if opts.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        for k, v in data.items():
            w.writerow([k, _flat(v)])
        return buf.getvalue()
    width = max(len(k) for k in data)
    lines = []
    for k, v in data.items():
        if isinstance(v, list) and not any(isinstance(x, dict) for x in v):
            v = "{" + ", ".join(str(x) for x in v) + "}"
        elif isinstance(v, dict):
            v = _flat(v)
        elif isinstance(v, list):
            v = "; ".join(_flat(x) for x in v)
        lines.append(f"{k.ljust(width)}  {_flat(v) if not isinstance(v, str) else v}")
    return "\n".join(lines) + "\n"


def render_records(rows: list[dict], opts: OutputOptions) -> str:
    data = [_convert(r, opts.approx) for r in rows]
    if opts.fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if not data:
        return ""
    buf = io.StringIO()
    if opts.fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(data[0]))
        for r in data:
            w.writerow([_flat(v) for v in r.values()])
        return buf.getvalue()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(list(data[0]))
    for r in data:
        w.writerow([_flat(v) for v in r.values()])
    return buf.getvalue()


def _parse_poly(text: str, nvars: int | None) -> Polynomial:
    try:
        return parse(text, nvars)
    except ParseError as exc:
        raise CliError(f"cannot parse {text!r}: {exc}", EXIT_PARSE) from exc


def _parse_rationals(text: str) -> list[Fraction]:
    items = [t for t in re.split(r"[\s,{}]+", text) if t]
    try:
        return [Fraction(t) for t in items]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"cannot read rationals from {text!r}", EXIT_PARSE) from exc


def cmd_spectrum(args) -> dict:
    f = _parse_poly(args.poly, args.nvars)
    if args.weights:
        w = _parse_rationals(args.weights)
        try:
            sp = spectrum_quasihomogeneous(f, w)
        except NonIsolatedError:
            raise
        except ValueError as exc:
            raise CliError(str(exc), EXIT_PARSE) from exc
        method = "quasihomogeneous"
    else:
        sp = spectrum_newton(f, assume_nondegenerate=args.assume_nondegenerate)
        method = "newton"
    return {
        "input": args.poly,
        "nvars": f.nvars,
        "method": method,
        "mu": len(sp),
        "spectrum": sp,
        "hertling": hertling_check(sp),
    }


def cmd_tjurina(args) -> dict:
    f = _parse_poly(args.poly, args.nvars)
    rep = exclusion_report(f, assume_nondegenerate=args.assume_nondegenerate)
    return {
        "input": args.poly,
        "nvars": f.nvars,
        "mu": rep.mu,
        "tau": rep.tau,
        "spectrum": rep.sp,
        "tjurina_spectrum": rep.sp_tau,
        "rset": rep.rset,
        "bounds": list(rep.bounds),
        "max_excluded": rep.mu == rep.tau or rep.rset.counts()[rep.sp.max] == 1,
        "hertling": hertling_check(rep.sp),
        "ghcts": ghcts_check(rep.sp_tau),
    }


def cmd_check(args) -> dict:
    if (args.poly is None) == (args.spectrum_file is None):
        raise CliError("give exactly one of a polynomial or --spectrum-file", EXIT_PARSE)
    report: dict = {"mode": args.mode}
    if args.poly is not None:
        f = _parse_poly(args.poly, args.nvars)
        report["input"] = args.poly
        if args.mode == "ghcts" and args.tau_max is None:
            rep = exclusion_report(f, assume_nondegenerate=args.assume_nondegenerate)
            values = rep.sp_tau
        else:
            values = spectrum_newton(f, assume_nondegenerate=args.assume_nondegenerate)
    else:
        try:
            with open(args.spectrum_file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read {args.spectrum_file}: {exc}", EXIT_PARSE) from exc
        report["input"] = args.spectrum_file
        nvars = args.nvars
        if args.mode == "hertling" and nvars is None:
            raise CliError("--nvars is required for hertling on a spectrum file", EXIT_PARSE)
        values = Spectrum(_parse_rationals(text), nvars or 0)
        if not len(values):
            raise CliError("empty spectrum file", EXIT_PARSE)
    report["values"] = list(values)
    if args.mode == "hertling":
        if args.tau_max is not None:
            raise CliError("--tau-max only applies to ghcts", EXIT_TAU_MAX)
        report["verdict"] = hertling_check(values)
    elif args.tau_max is not None:
        try:
            report["verdict"] = ghcts_reduced_check(values, args.tau_max)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_TAU_MAX) from exc
    else:
        report["verdict"] = ghcts_check(values)
    return report


def _parse_params(items: list[str]) -> dict[str, int]:
    out = {}
    for item in items:
        for piece in item.split(","):
            if not piece:
                continue
            name, sep, value = piece.partition("=")
            if not sep:
                raise CliError(f"bad parameter {piece!r}; expected name=value", EXIT_PARSE)
            try:
                out[name.strip()] = int(value)
            except ValueError as exc:
                raise CliError(f"bad parameter value in {piece!r}", EXIT_PARSE) from exc
    return out


def _load_catalog(path):
    try:
        return catalog_mod.load(path)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot load catalog {path}: {exc}", EXIT_PARSE) from exc


def _record_row(rec: catalog_mod.VerificationRecord) -> dict:
    return {
        "family": rec.family,
        "params": ",".join(f"{k}={v}" for k, v in rec.params.items()),
        "mu": rec.mu,
        "tau": rec.tau,
        "mu_ok": rec.mu_ok,
        "spectrum_ok": rec.spectrum_ok,
        "rset_ok": rec.rset_ok,
        "hertling_ok": rec.hertling_ok,
        "ghcts_ok": rec.ghcts_ok,
        "ok": rec.ok,
        "rset": list(rec.rset),
        "mismatches": "; ".join(rec.mismatches),
    }


def _verify_item(item):
    path, name, params = item
    fam = catalog_mod.load(path).get(name)
    return _record_row(catalog_mod.verify(fam, params))


def default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def run_items(items: list, jobs: int) -> list[dict]:
    """Verify work items, returning rows in input order whatever the scheduling."""
    if jobs <= 1 or len(items) <= 1:
        return [_verify_item(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_verify_item, items))


def cmd_catalog(args) -> list[dict]:
    cat = _load_catalog(args.catalog)
    if args.action == "list":
        return [
            {
                "family": fam.name,
                "nvars": fam.nvars,
                "params": ",".join(f"{p}>={lo}" for p, lo in fam.params),
                "mu": fam.mu,
                "template": fam.template,
            }
            for fam in cat
        ]
    if args.action == "verify":
        if not args.family:
            raise CliError("catalog verify needs a family name", EXIT_PARSE)
        try:
            fam = cat.get(args.family)
        except KeyError:
            raise CliError(f"unknown family {args.family!r}; see `catalog list`", EXIT_UNKNOWN_FAMILY)
        params = _parse_params(args.params or [])
        fam.check_params(params)
        items = [(args.catalog, fam.name, params)]
    else:
        names = [args.family] if args.family else cat.names()
        items = []
        for name in names:
            try:
                fam = cat.get(name)
            except KeyError:
                raise CliError(f"unknown family {name!r}; see `catalog list`", EXIT_UNKNOWN_FAMILY)
            items.extend((args.catalog, name, p) for p in catalog_mod.parameter_grid(fam, args.rmax, args.smax, args.kmax))
    jobs = args.jobs if args.jobs is not None else default_jobs()
    return run_items(items, jobs)


SINGULAR_TEMPLATE = """\
LIB"gmssing.lib";
LIB"sing.lib";
{ring}
{poly}
list v = vfilt(f);
ideal I = v[4];
list sp = spectrum(f);
list vf = v[3];
int m = size(sp[2]);
int mu = milnor(f);
intvec t;
ideal J = f,jacob(f);
int a;
int j;
module temp;
for(a = m ; a >= 1 ; a = a-1){{
	temp = vf[a];
	temp = std(temp);
	for(j = 1 ; j <= mu ; j = j+1){{
		if(reduce(gen(j),temp) == 0){{
			J = J,I[j];
		}}
	}}
	J = std(J);
	t[a] = vdim(J);
}}
int tau = tjurina(f);
intvec w;
w[m] = tau-t[m];
for(a = m-1 ; a >= 1 ; a = a-1){{
	w[a] = t[a+1]-t[a];
}}
w;
spectrum(f);
mu-tau;
"""


def singular_poly(f: Polynomial) -> str:
    """SINGULAR short notation: x3y2 for x^3*y^2, terms in decreasing lex order."""
    names = variable_names(f.nvars)
    parts = []
    for m in sorted(f.support, reverse=True):
        c = f.coefficient(m)
        mono = "".join(n + (str(e) if e > 1 else "") for n, e in zip(names, m) if e)
        a = abs(c)
        coeff = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        if not mono:
            body = coeff
        elif a == 1:
            body = mono
        else:
            body = f"{coeff}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return text + "".join(s + b for s, b in parts[1:])


def cmd_emit_singular(args) -> str:
    f = _parse_poly(args.poly, args.nvars)
    if f.nvars > 3:
        raise CliError(f"the script template supports at most 3 variables, got {f.nvars}", EXIT_PARSE)
    names = ",".join(variable_names(f.nvars))
    return SINGULAR_TEMPLATE.format(ring=f"ring r = 0, ({names}), ds;", poly=f"poly f = {singular_poly(f)};")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singspec", description=__doc__.splitlines()[0])
    out = argparse.ArgumentParser(add_help=False)
    fmt = out.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="CSV output")
    out.add_argument("--approx", action="store_true", help="print decimals instead of exact rationals")
    germ = argparse.ArgumentParser(add_help=False)
    germ.add_argument("--nvars", type=int, help="number of variables (default: inferred)")
    germ.add_argument("--assume-nondegenerate", action="store_true",
                      help="treat facets the criteria cannot certify as non-degenerate")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[out, germ], help="spectrum of a germ")
    p.add_argument("poly")
    p.add_argument("--weights", help="comma-separated weights; selects the quasihomogeneous formula")

    p = sub.add_parser("tjurina", parents=[out, germ], help="Tjurina spectrum, excluded exponents and bounds")
    p.add_argument("poly")

    p = sub.add_parser("check", parents=[out, germ], help="Hertling or GHCTS inequality")
    p.add_argument("mode", choices=["hertling", "ghcts"])
    p.add_argument("poly", nargs="?")
    p.add_argument("--spectrum-file", help="file of rationals separated by whitespace or commas")
    p.add_argument("--tau-max", type=int, help="drop the mu - tau_max largest exponents first (ghcts)")

    p = sub.add_parser("catalog", parents=[out], help="list, verify or sweep catalog families")
    p.add_argument("action", choices=["list", "verify", "sweep"])
    p.add_argument("family", nargs="?")
    p.add_argument("--params", action="append", help="e.g. r=2,s=1 (repeatable)")
    p.add_argument("--rmax", type=int, default=5)
    p.add_argument("--smax", type=int, default=5)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--jobs", type=int, help="worker processes (default: available CPUs)")
    p.add_argument("--catalog", default=None,
                   help="catalog file, or a built-in name: " + ", ".join(catalog_mod.BUILTIN))

    p = sub.add_parser("emit-singular", parents=[germ], help="SINGULAR script for cross-validation")
    p.add_argument("poly")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    opts = OutputOptions(fmt=getattr(args, "fmt", None) or "table", approx=getattr(args, "approx", False))
    try:
        if args.command == "spectrum":
            text = render(cmd_spectrum(args), opts)
        elif args.command == "tjurina":
            text = render(cmd_tjurina(args), opts)
        elif args.command == "check":
            text = render(cmd_check(args), opts)
        elif args.command == "catalog":
            rows = cmd_catalog(args)
            text = render_records(rows, opts)
            sys.stdout.write(text)
            return EXIT_OK if args.action == "list" or all(r["ok"] for r in rows) else EXIT_FAILURE
        else:
            text = cmd_emit_singular(args)
    except CliError as exc:
        print(f"singspec: {exc}", file=sys.stderr)
        return exc.code
    except NonIsolatedError as exc:
        print(f"singspec: not an isolated singularity: {exc}", file=sys.stderr)
        return EXIT_NON_ISOLATED
    except (DegeneracyError, NotConvenientError) as exc:
        print(f"singspec: {exc}; rerun with --assume-nondegenerate to override", file=sys.stderr)
        return EXIT_DEGENERATE
    except DomainError as exc:
        print(f"singspec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SingspecError, ValueError, RuntimeError) as exc:
        print(f"singspec: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
