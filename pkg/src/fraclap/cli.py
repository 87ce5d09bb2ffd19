"""Command-line front end: rate tables, decay curves, fits and the verification suite."""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .errors import ConfigError, FraclapError, InvalidParameters
from .fit import (EXPONENTIAL, CurveQuery, fit_loglog, generate_curve, read_csv,
                  resolve_threads, write_csv)
from .rates import (PRESET_THETA, RateQuery, combined_rate, default_sigma, fmt,
                    preset, preset_symbol, table_json, table_text)
from .spectra import RadialProfile
from .symbols import (CanonicalParams, GeneralSymbol, SymbolTriple,
                      effective_canonical)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

EPILOG = """\
examples:
  fraclap rates --preset wave --theta 0 --n 3
  fraclap rates --preset plate --theta 1/2 --n 2 --json
  fraclap rates --delta 1 --alpha 2 --theta 0 --n 4 --target v
  fraclap rates --symbol-a 1:0,1:1 --symbol-b 1:0 --symbol-c 1:1,1:2 --n 3
  fraclap simulate --preset wave --theta 0 --n 3 --tmin 100 --tmax 10000 --points 24 --out curve.csv
  fraclap simulate --preset plate --theta 0 --n 2 --target energy --profile power_tail:3 --v1-profile power_tail:2 --tmin 100 --tmax 1000 --points 12
  fraclap fit --in curve.csv --expect 0.75 --tol 0.05
  fraclap verify --preset plate --theta 0.5 --n 2 --samples 10000 --seed 7
"""


def parse_number(text) -> Fraction:
    """Exact rational from '3/4', '0.5' or '2'."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {text!r}") from exc


def parse_profile(text) -> RadialProfile:
    """gaussian[:width] | annulus:r0,r1[,smoothness] | power_tail:decay[,cutoff] | table:path | zero"""
    kind, _, rest = str(text).partition(":")
    kind = kind.strip()
    try:
        if kind == "table":
            if not rest:
                raise ConfigError("table profile needs a path: table:FILE")
            return RadialProfile.from_csv(rest)
        nums = [float(x) for x in rest.split(",") if x.strip()] if rest else []
        if kind == "gaussian" and len(nums) <= 1:
            return RadialProfile.gaussian(*nums)
        if kind == "annulus" and len(nums) in (2, 3):
            return RadialProfile.annulus(*nums)
        if kind == "power_tail" and len(nums) in (1, 2):
            return RadialProfile.power_tail(*nums)
        if kind == "zero" and not nums:
            return RadialProfile.zero()
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad profile {text!r}: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read profile table: {exc}") from exc
    raise ConfigError(f"bad profile {text!r}; use gaussian[:w], annulus:r0,r1[,s], "
                      "power_tail:d[,cutoff], table:FILE or zero")


def resolve_symbol(args):
    """(SymbolTriple, description dict) from exactly one of the three symbol sources."""
    explicit = [x is not None for x in (args.delta, args.alpha)]
    general = [x is not None for x in (args.symbol_a, args.symbol_b, args.symbol_c)]
    sources = sum([args.preset is not None, any(explicit), any(general)])
    if sources != 1:
        raise ConfigError("give exactly one of --preset, --delta/--alpha/--theta, or --symbol-a/-b/-c")
    if args.preset is not None:
        if args.theta is None:
            raise ConfigError("--preset needs --theta")
        theta = parse_number(args.theta)
        sym = preset_symbol(args.preset, theta, args.literal_delta0)
        return sym, {"preset": args.preset, "theta": str(theta)}
    if args.literal_delta0:
        raise ConfigError("--literal-delta0 applies to presets only")
    if any(explicit):
        if not all(explicit) or args.theta is None:
            raise ConfigError("--delta, --alpha and --theta go together")
        d, al, th = (parse_number(x) for x in (args.delta, args.alpha, args.theta))
        p = CanonicalParams(d, al, th, args.n)
        return SymbolTriple.from_canonical(p), {"delta": str(d), "alpha": str(al), "theta": str(th)}
    if not all(general):
        raise ConfigError("--symbol-a, --symbol-b and --symbol-c go together")
    if args.theta is not None:
        raise ConfigError("--theta is implied by --symbol-b")
    sym = SymbolTriple(*(GeneralSymbol.parse(s) for s in (args.symbol_a, args.symbol_b, args.symbol_c)))
    return sym, {"a": args.symbol_a, "b": args.symbol_b, "c": args.symbol_c}


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def cmd_rates(args):
    sym, desc = resolve_symbol(args)
    beta = parse_number(args.beta) if args.beta is not None else None
    meta = {**desc, "n": args.n}
    if args.preset is not None and args.target is None:
        tab = preset(args.preset, parse_number(args.theta), args.n, args.literal_delta0, beta)
        rows = tab.rows
    else:
        targets = [args.target] if args.target else ["v", "vt"]
        if "energy" in targets:
            raise ConfigError("rates predicts norms; use --target v or vt")
        rows = [combined_rate(RateQuery(sym, t, args.gamma, beta, args.n)) for t in targets]
    text = table_json(rows, meta) if args.json else table_text(rows)
    _emit(text, args.out)
    return EXIT_OK


def build_query(args, sym):
    v0 = parse_profile(args.profile)
    v1 = parse_profile(args.v1_profile)
    if args.target == "energy":
        hp = effective_canonical(sym, "high", args.n)
        sigma = float(parse_number(args.sigma)) if args.sigma is not None \
            else float(default_sigma(hp, "v", args.gamma))
        return CurveQuery(sym, args.n, v0, v1, "hf_energy", p=hp, sigma=sigma, rtol=args.rtol)
    j = 1 if args.target == "vt" else 0
    return CurveQuery(sym, args.n, v0, v1, "norm", j=j, gamma=args.gamma,
                      region=args.region, rtol=args.rtol)


def cmd_simulate(args):
    sym, _ = resolve_symbol(args)
    if args.target is None:
        args.target = "v"
    query = build_query(args, sym)
    curve = generate_curve(query, args.tmin, args.tmax, args.points, threads=args.threads)
    if args.out in (None, "-"):
        write_csv(curve, sys.stdout)
    else:
        write_csv(curve, args.out)
    return EXIT_OK


def cmd_fit(args):
    if args.input is None:
        raise ConfigError("fit needs --in FILE")
    curve = read_csv(args.input)
    rf = fit_loglog(curve, args.tail)
    ok = True
    if args.expect is not None:
        if args.expect == EXPONENTIAL:
            ok = rf.classification == EXPONENTIAL
        else:
            try:
                want = float(parse_number(args.expect))
            except ConfigError:
                raise ConfigError("--expect takes a number or 'exponential'")
            ok = rf.classification != EXPONENTIAL and abs(rf.exponent - want) <= args.tol
    report = {"exponent": rf.exponent if math.isfinite(rf.exponent) else None,
              "slope": rf.slope if math.isfinite(rf.slope) else None,
              "r_squared": rf.r_squared, "classification": rf.classification,
              "tail_points": rf.tail_points, "expect": args.expect, "tol": args.tol,
              "pass": ok}
    if args.json:
        _emit(json.dumps(report, indent=2, sort_keys=True), args.out)
    else:
        lines = [f"exponent        {fmt(rf.exponent)}", f"r_squared       {rf.r_squared:.12g}",
                 f"classification  {rf.classification}", f"tail_points     {rf.tail_points}"]
        if args.expect is not None:
            lines.append(f"expect          {args.expect} +/- {args.tol}: {'PASS' if ok else 'FAIL'}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args):
    from .verify import run_suite
    sym, desc = resolve_symbol(args)
    if args.samples < 1:
        raise ConfigError("--samples must be positive")
    records = run_suite(sym, args.n, samples=args.samples, seed=args.seed,
                        params={**desc, "n": args.n}, quick=args.quick)
    ok = all(r.passed for r in records)
    report = {"pass": ok, "seed": args.seed, "samples": args.samples,
              "records": [r.as_dict() for r in records]}
    _emit(json.dumps(report, indent=2, sort_keys=True), args.out)
    if not ok:
        for r in records:
            if not r.passed:
                print(f"violation: {r.check} {r.violation:.3g} at {r.worst_point}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _symbol_flags(p):
    g = p.add_argument_group("equation")
    g.add_argument("--preset", choices=sorted(PRESET_THETA), help="application equation")
    g.add_argument("--theta", help="damping exponent (e.g. 0, 1/2, 0.75)")
    g.add_argument("--delta", help="rotational-inertia exponent of the canonical equation")
    g.add_argument("--alpha", help="elastic exponent of the canonical equation")
    g.add_argument("--symbol-a", help="coefficient of v_tt as weight:exponent pairs, e.g. 1:0,1:1")
    g.add_argument("--symbol-b", help="coefficient of v_t as weight:exponent pairs")
    g.add_argument("--symbol-c", help="coefficient of v as weight:exponent pairs")
    g.add_argument("--n", type=int, required=True, help="space dimension")
    g.add_argument("--literal-delta0", action="store_true",
                   help="use a = 2 (1 + r^0) for presets without rotational inertia")
    p.add_argument("--out", help="output file (default stdout)")


def build_parser():
    ap = argparse.ArgumentParser(prog="fraclap", description=__doc__, epilog=EPILOG,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", help="predicted decay exponents and data regularity")
    _symbol_flags(p)
    p.add_argument("--target", choices=("v", "vt"), help="norm of d^gamma v or d^gamma v_t")
    p.add_argument("--gamma", type=int, default=0)
    p.add_argument("--beta", help="regularity-loss parameter (default: matched to the low frequencies)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("simulate", help="write a decay curve as CSV")
    _symbol_flags(p)
    p.add_argument("--target", choices=("v", "vt", "energy"),
                   help="norm of v, of v_t, or high-frequency energy integral (default v)")
    p.add_argument("--gamma", type=int, default=0)
    p.add_argument("--sigma", help="energy weight (default 2|gamma| - 2 alpha)")
    p.add_argument("--region", choices=("low", "high", "full"), default="full")
    p.add_argument("--profile", default="gaussian", help="v0 profile (default gaussian)")
    p.add_argument("--v1-profile", default="gaussian", help="v1 profile (default gaussian)")
    p.add_argument("--tmin", type=float, default=1e2)
    p.add_argument("--tmax", type=float, default=1e4)
    p.add_argument("--points", type=int, default=24)
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--threads", type=int, help="parallel curve points (env FRACLAP_THREADS)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit a decay exponent to a curve CSV")
    p.add_argument("--in", dest="input", help="curve CSV with header t,value")
    p.add_argument("--expect", help="expected exponent, or 'exponential'")
    p.add_argument("--tol", type=float, default=0.05)
    p.add_argument("--tail", type=float, default=0.5, help="fraction of the grid used (default 0.5)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="run the inequality and identity suite; JSON report")
    _symbol_flags(p)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="smaller kernel grid")
    p.add_argument("--threads", type=int, help="accepted for symmetry; the suite is vectorised")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        if getattr(args, "threads", None) is not None:
            resolve_threads(args.threads)
        return args.func(args)
    except (ConfigError, InvalidParameters) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FraclapError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
