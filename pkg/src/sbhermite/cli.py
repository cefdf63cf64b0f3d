"""Command-line front end: ``eval``, ``transform`` and ``check``.

Complex numbers are written ``a+bi``: an optional real part and an optional
imaginary part ending in ``i`` (or ``j``), each with an optional sign and
scientific exponent.  Examples: ``1``, ``-2.5e-3``, ``0.3-1.2i``, ``-i``.
Points on C^2 or R^2 are two such literals separated by a comma.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from . import genfuncs as gf
from . import identities as ids
from . import report
from . import transforms as tr
from .config import RunConfig
from .polynomials import (
    laguerre,
    monomial_norm_sq,
    real_hermite,
    real_hermite_norm_sq,
    uchp,
    uchp_norm_sq,
)

COMPLEX_GRAMMAR = "complex literal a+bi, e.g. 1, -2.5e-3, 0.3-1.2i, -i"

def parse_complex(text: str) -> complex:
    """Parse ``a+bi``; raises ValueError on anything else."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s[-1] not in "ij":
        return complex(float(s), 0.0)
    body = s[:-1]
    split = 0
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            split = k
            break
    real_txt, imag_txt = body[:split], body[split:]
    if imag_txt in ("", "+", "-"):
        imag_txt += "1"
    return complex(float(real_txt) if real_txt else 0.0, float(imag_txt))

def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid {COMPLEX_GRAMMAR}: {text!r}") from None

def _point_arg(text: str) -> tuple:
    try:
        return tuple(parse_complex(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid point {text!r}; use {COMPLEX_GRAMMAR}, comma separated") from None

def format_complex(v: complex) -> str:
    v = complex(v)
    if v.imag == 0:
        return f"{v.real:.15g}"
    return f"{v.real:.15g}{v.imag:+.15g}i"

# ------------------------------------------------------------------ eval

def cmd_eval(args) -> int:
    what = args.what
    if what == "uchp":
        value = uchp(args.m, args.n, args.nu)(args.z)
    elif what == "hermite":
        value = real_hermite(args.n, args.nu)(args.x)
    elif what == "laguerre":
        value = laguerre(args.m)(args.x)
    elif what == "norm":
        if args.kind == "uchp":
            value = uchp_norm_sq(args.m, args.n, args.nu)
        elif args.kind == "hermite":
            value = real_hermite_norm_sq(args.m, args.nu)
        else:
            value = monomial_norm_sq(args.m, args.n, args.nu)
    elif what in ("closed_form", "series"):
        params = {}
        for item in args.param or []:
            key, _, val = item.partition("=")
            params[key] = _typed_param(key, val)
        if what == "closed_form":
            value = gf.closed_form(args.id, **params)
        else:
            value = gf.series(args.id, args.terms, **params).value
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(what)
    print(format_complex(value))
    return 0

def _typed_param(key: str, val: str):
    if key in ("m", "mp", "n"):
        return int(val)
    if key in ("nu", "mu", "x"):
        return float(val)
    return parse_complex(val)

# ------------------------------------------------------------------ transform

TRANSFORM_KINDS = {
    "B1": ("B1", "R"),
    "B1_level": ("B1_level", "R"),
    "B2": ("B2", "R2"),
    "T": ("T", "C"),
    "T_inverse": ("T_inverse", "C2"),
    "T_pair": ("T_pair", "C"),
    "fourier": ("shifted_fourier", "C"),
    "shifted_fourier": ("shifted_fourier", "C"),
    "wigner": ("wigner", "R2"),
    "G_composite": ("G_composite", "R"),
}

def build_input(spec: str, domain: str, nu: float) -> tr.FunctionHandle:
    """Test function from ``name[:i,j]`` for the given input domain."""
    name, _, rest = spec.partition(":")
    idx = [int(v) for v in rest.split(",")] if rest else []
    if name == "gauss" and not idx:
        if domain == "C2":
            raise ValueError("no Gaussian test function on C2; use monomial:m,n")
        return tr.gaussian(domain, 0.5)
    if name == "zero" and not idx:
        return tr.zero(domain)
    if name == "uchp" and len(idx) == 2 and domain == "C":
        return tr.uchp_function(idx[0], idx[1], nu)
    if name == "hermite" and len(idx) == 1 and domain == "R":
        return tr.hermite_function(idx[0], nu)
    if name == "hermite_gauss" and len(idx) == 2 and domain == "R2":
        return tr.hermite_gauss_product(idx[0], idx[1], nu)
    if name == "monomial" and len(idx) == 2 and domain == "C2":
        return tr.monomial_combination({(idx[0], idx[1]): 1.0}, nu)
    raise ValueError(f"unknown test function {spec!r} for input domain {domain}")

def cmd_transform(args) -> int:
    kind, domain = TRANSFORM_KINDS[args.kind]
    levels = tuple(args.levels) if args.levels else ()
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    tspec = tr.TransformSpec(kind, args.nu, levels, cfg.orders())
    f = build_input(args.input, domain, args.nu)
    g = tspec.apply(f)
    rows = []
    for pt in args.at:
        if len(pt) != g.arity:
            raise ValueError(f"{args.kind} output takes {g.arity} coordinate(s) per point, got {len(pt)}")
        if g.domain in ("R", "R2"):
            if any(c.imag != 0 for c in pt):
                raise ValueError("real output domain needs real points")
            pt = tuple(c.real for c in pt)
        rows.append((pt, g(*pt)))
    coords = ["x", "y"] if g.domain in ("R", "R2") else ["z", "w"]
    print(",".join(coords[: g.arity] + ["value"]))
    for pt, v in rows:
        print(",".join([format_complex(c) for c in pt] + [format_complex(v)]))
    return 0

# ------------------------------------------------------------------ check

def cmd_check(args) -> int:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.out is not None:
        overrides["out"] = args.out
    if args.csv is not None:
        overrides["csv"] = args.csv
    if overrides:
        cfg = RunConfig.from_dict({**cfg.to_dict(), **overrides})
    params = {}
    for key in ("m", "n", "nu"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    if args.max_order is not None:
        params["max_order"] = args.max_order
    selected = [s for s in args.suite.split(",") if s] if args.suite != "all" else "all"
    summary = ids.run_suite(selected, cfg, params, timing=args.timing)
    report.write_json(summary, cfg.out)
    report.write_csv(summary, cfg.csv)
    for r in summary.reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.check_id:22s} residual={r.residual:.3e} tol={r.tolerance:.0e}")
    n_fail = sum(not r.passed for r in summary.reports)
    print(f"{len(summary.reports)} reports, {n_fail} failed; wrote {cfg.out} and {cfg.csv}")
    return 0 if summary.passed else 1

# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sbhermite", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"sbhermite {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a polynomial, norm or generating function")
    esub = e.add_subparsers(dest="what", required=True)
    u = esub.add_parser("uchp", help="complex Hermite polynomial H^nu_{m,n}(z)")
    u.add_argument("--m", type=int, required=True)
    u.add_argument("--n", type=int, required=True)
    u.add_argument("--nu", type=float, default=1.0)
    u.add_argument("--z", type=_complex_arg, required=True, help=COMPLEX_GRAMMAR)
    h = esub.add_parser("hermite", help="rescaled real Hermite polynomial H^nu_n(x)")
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--nu", type=float, default=1.0)
    h.add_argument("--x", type=_complex_arg, required=True, help=COMPLEX_GRAMMAR)
    lg = esub.add_parser("laguerre", help="Laguerre polynomial L_m(x)")
    lg.add_argument("--m", type=int, required=True)
    lg.add_argument("--x", type=_complex_arg, required=True, help=COMPLEX_GRAMMAR)
    nm = esub.add_parser("norm", help="squared norm of a basis function")
    nm.add_argument("--kind", choices=("uchp", "hermite", "monomial"), default="uchp")
    nm.add_argument("--m", type=int, required=True)
    nm.add_argument("--n", type=int, default=0)
    nm.add_argument("--nu", type=float, default=1.0)
    for name in ("closed_form", "series"):
        c = esub.add_parser(name, help=f"generating function, {name.replace('_', ' ')} side")
        c.add_argument("--id", required=True, choices=[f.value for f in gf.GenFormulaId])
        c.add_argument("--param", action="append", metavar="KEY=VALUE",
                       help="formula parameter; complex values use " + COMPLEX_GRAMMAR)
        c.add_argument("--terms", type=int, default=gf.DEFAULT_TERMS)
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("transform", help="apply a transform to a built-in test function")
    t.add_argument("kind", choices=sorted(TRANSFORM_KINDS))
    t.add_argument("--nu", type=float, default=1.0)
    t.add_argument("--input", required=True,
                   help="gauss | zero | uchp:m,n | hermite:m | hermite_gauss:j,k | monomial:m,n")
    t.add_argument("--at", type=_point_arg, action="append", required=True,
                   help="output point, one or two comma-separated complex literals; repeatable")
    t.add_argument("--levels", type=int, nargs="+", help="level n (B1_level) or n n' (T_pair)")
    t.add_argument("--config", help="TOML run configuration")
    t.set_defaults(func=cmd_transform)

    k = sub.add_parser("check", help="run identity checks and write JSON/CSV reports")
    k.add_argument("--suite", default="all", help="'all' or comma-separated check ids")
    k.add_argument("--config", help="TOML run configuration")
    k.add_argument("--out", help="JSON report path")
    k.add_argument("--csv", help="CSV summary path")
    k.add_argument("--seed", type=int)
    k.add_argument("--m", type=int)
    k.add_argument("--n", type=int)
    k.add_argument("--nu", type=float)
    k.add_argument("--max-order", type=int, dest="max_order")
    k.add_argument("--workers", type=int)
    k.add_argument("--timing", action="store_true", help="record wall time (reports are then not byte-stable)")
    k.set_defaults(func=cmd_check)
    return p

def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check" and args.suite != "all":
        known = {c.value for c in ids.CheckId}
        bad = [s for s in args.suite.split(",") if s and s not in known]
        if bad:
            parser.error(f"unknown check id(s): {', '.join(bad)}")
    try:
        return args.func(args)
    except (ValueError, TypeError, OverflowError) as exc:
        # DomainError is a ValueError
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
