"""Command-line entry point.

JSON in, JSON out: every subcommand reads its inputs from JSON files,
runs one pipeline deterministically for a given (inputs, seed, prec),
and writes a report to stdout or --out.  Reports embed the tool version,
seed and precision; exact rationals are carried as strings next to float
renderings.  Exit codes: 0 success, 2 violated hypothesis, 3 precision
or genericity exhaustion, 4 parse/schema error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath as mp

from . import __version__
from .charpoly import (
    bounds_table,
    build_charpoly,
    charpoly_resultant_oracle,
    charpoly_to_json,
    growth_inclusion_check,
    ploski_delta,
)
from .errors import CnullError, SchemaError
from .gradexp import gradexp_report, validate_inequality
from .nullcert import (
    certificate_from_json,
    certificate_to_json,
    certify_general,
    certify_partial,
    certify_proper,
    certify_strictly_regular,
    cycle_degree,
    load_cycle_components,
    verify_certificate,
)
from .polycore import NEG_INF, poly_from_json, rat_to_str, total_degree
from .propermaps import geometric_degree, graph_degree, growth_exponent
from .variety import degree_by_slicing, load_map, load_variety

VALID_PREC = (128, 256, 512, 1024)


def _default_prec() -> int:
    raw = os.environ.get("CNULL_PREC")
    if raw is None:
        return 256
    try:
        value = int(raw)
    except ValueError:
        raise SchemaError(f"CNULL_PREC must be an integer, got {raw!r}")
    return value


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise SchemaError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}")


def _rat_view(q) -> dict:
    q = Fraction(q)
    return {"rational": rat_to_str(q), "float": float(q)}


def _complex_view(z) -> dict:
    z = mp.mpc(z)
    return {"re": float(mp.re(z)), "im": float(mp.im(z))}


def _deg_view(deg):
    return "-inf" if deg == NEG_INF else int(deg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnull",
        description="characteristic polynomials, Nullstellensatz certificates and growth exponents on parametrized algebraic sets",
    )
    parser.add_argument("--version", action="version", version=f"cnull {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_variety=True, need_f=False, need_g=False):
        if need_variety:
            p.add_argument("--variety", required=True, help="variety JSON file")
        if need_f:
            p.add_argument("--f", required=True, help="map JSON file for f")
        if need_g:
            p.add_argument("--g", required=True, help="map JSON file for g")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--prec", type=int, default=None, choices=VALID_PREC)
        p.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = sub.add_parser("charpoly", help="characteristic polynomial of g relative to f")
    common(p, need_f=True, need_g=True)
    p.add_argument("--oracle", action="store_true", help="also run the exact resultant oracle and compare")

    p = sub.add_parser("certify", help="extract a Nullstellensatz certificate")
    common(p, need_f=True, need_g=True)
    p.add_argument("--theorem", default="auto", choices=["auto", "proper", "partial", "general", "strictly-regular"])
    p.add_argument("--ell", type=int, default=None, help="use only the first ell components")
    p.add_argument("--L", action="append", default=None, help="affine form JSON file (repeatable)")
    p.add_argument("--cycle", default=None, help="cycle components JSON file")
    p.add_argument("--N", type=int, default=None, help="exponent cap for the fallback search")
    p.add_argument("--degree-cap", type=int, default=4, help="total degree cap for fallback h expressions")

    p = sub.add_parser("verify", help="re-verify a certificate exactly")
    common(p, need_f=True, need_g=True)
    p.add_argument("--cert", required=True, help="certificate JSON file")

    p = sub.add_parser("degree", help="degree of the variety by generic slicing")
    common(p)

    p = sub.add_parser("geomdeg", help="geometric degree of f")
    common(p, need_f=True)

    p = sub.add_parser("ploski", help="root-growth exponent of the characteristic polynomial")
    common(p, need_f=True, need_g=True)
    p.add_argument("--q", default=None, help="exponent to test (rational string); default is the computed delta")
    p.add_argument("--R", type=float, default=100.0)
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("gradexp", help="gradient growth exponent of a polynomial")
    p.add_argument("--poly", required=True, help="polynomial JSON file")
    p.add_argument("--theta", default=None, help="validate at this exponent instead of the computed one")
    p.add_argument("--shells", type=float, nargs="+", default=[10.0, 100.0, 1000.0, 10000.0])
    p.add_argument("--samples-per-shell", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prec", type=int, default=None, choices=VALID_PREC)
    p.add_argument("--out", default=None)

    p = sub.add_parser("cycle", help="degree of the cycle of zeroes of f")
    common(p, need_f=True)
    p.add_argument("--components", required=True, help="cycle components JSON file")
    p.add_argument("--L", action="append", required=True, help="affine form JSON file (repeatable)")

    p = sub.add_parser("check-bounds", help="coefficient degree bounds of the characteristic polynomial")
    common(p, need_f=True, need_g=True)
    return parser


def _load_forms(paths, domain):
    forms = []
    for path in paths:
        poly, _ = poly_from_json(_load_json(path), expected_vars=domain.ambient_vars)
        if total_degree(poly) > 1:
            raise SchemaError(f"form in {path} is not affine")
        forms.append(poly)
    return forms


def run(argv) -> tuple[int, dict | None]:
    parser = build_parser()
    args = parser.parse_args(argv)
    prec = args.prec if args.prec is not None else _default_prec()
    if prec not in VALID_PREC:
        raise SchemaError(f"precision must be one of {VALID_PREC}, got {prec}")
    seed = getattr(args, "seed", 0)
    result = _dispatch(args, seed, prec)
    report = {
        "tool": "cnull",
        "version": __version__,
        "command": args.command,
        "seed": seed,
        "prec": prec,
        "result": result,
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0, report


def _dispatch(args, seed: int, prec: int) -> dict:
    cmd = args.command
    if cmd == "gradexp":
        return _run_gradexp(args, seed, prec)
    variety = load_variety(_load_json(args.variety))
    if cmd == "degree":
        return {"degree": degree_by_slicing(variety, seed, prec)}
    f = load_map(variety, _load_json(args.f))
    if cmd == "geomdeg":
        return {"geometric_degree": geometric_degree(f, seed, prec)}
    if cmd == "cycle":
        forms = _load_forms(args.L, variety)
        comps = load_cycle_components(_load_json(args.components))
        data = cycle_degree(f, comps, forms, seed, prec)
        return {
            "total_degree": data.total_degree,
            "components": [
                {"multiplicity": mult, "degree": deg} for _, mult, deg in data.components
            ],
        }
    g = load_map(variety, _load_json(args.g))
    if cmd == "charpoly":
        P = build_charpoly(f, g, seed, prec)
        out = {"charpoly": charpoly_to_json(P)}
        if args.oracle:
            oracle = charpoly_resultant_oracle(f, g)
            out["oracle"] = charpoly_to_json(oracle)
            out["oracle_match"] = oracle.d == P.d and oracle.coeffs == P.coeffs
        return out
    if cmd == "certify":
        cert = _run_certify(args, variety, f, g, seed, prec)
        return {"certificate": certificate_to_json(cert, variety.ambient_vars)}
    if cmd == "verify":
        cert = certificate_from_json(_load_json(args.cert), variety.ambient_vars)
        return {"verified": verify_certificate(f, g, cert)}
    if cmd == "ploski":
        return _run_ploski(args, f, g, seed, prec)
    if cmd == "check-bounds":
        P = build_charpoly(f, g, seed, prec)
        rows = bounds_table(P, growth_exponent(g), graph_degree(f, seed, prec))
        return {
            "rows": [
                {"j": j, "deg": _deg_view(deg), "bound": bound, "ok": ok}
                for j, deg, bound, ok in rows
            ]
        }
    raise SchemaError(f"unknown command {cmd!r}")


def _run_certify(args, variety, f, g, seed: int, prec: int):
    theorem = args.theorem
    if theorem == "auto":
        if args.ell is not None:
            theorem = "partial"
        elif f.n == variety.k:
            theorem = "proper"
        elif f.n > variety.k:
            theorem = "general"
        else:
            theorem = "strictly-regular"
    if theorem == "proper":
        return certify_proper(f, g, seed, prec)
    if theorem == "partial":
        if args.ell is None:
            raise SchemaError("--ell is required for the partial route")
        return certify_partial(f, args.ell, g, seed, prec)
    if theorem == "general":
        return certify_general(f, g, seed, prec, degree_cap=args.degree_cap, exponent=args.N)
    forms = _load_forms(args.L, variety) if args.L else "auto"
    cycle = "estimate"
    if args.cycle:
        cycle = load_cycle_components(_load_json(args.cycle))
    return certify_strictly_regular(f, g, forms=forms, cycle=cycle, seed=seed, prec=prec)


def _run_ploski(args, f, g, seed: int, prec: int) -> dict:
    P = build_charpoly(f, g, seed, prec)
    delta = ploski_delta(P)
    q = Fraction(args.q) if args.q is not None else delta
    out = {
        "charpoly": charpoly_to_json(P),
        "delta": _rat_view(delta),
    }
    if q > 0:
        check = growth_inclusion_check(P, q, R=args.R, samples=args.samples, seed=seed, prec=prec)
        out["growth_check"] = {
            "q": _rat_view(q),
            "holds": check.holds,
            "witness_C": check.witness_C,
            "low_max": check.low_max,
            "high_max": check.high_max,
            "violation": None
            if check.violation is None
            else {
                "x": [_complex_view(c) for c in check.violation[0]],
                "t": _complex_view(check.violation[1]),
            },
        }
    else:
        out["growth_check"] = None
    return out


def _run_gradexp(args, seed: int, prec: int) -> dict:
    poly, _ = poly_from_json(_load_json(args.poly))
    if args.theta is not None:
        report = validate_inequality(
            poly,
            Fraction(args.theta),
            shells=tuple(args.shells),
            samples_per_shell=args.samples_per_shell,
            seed=seed,
        )
    else:
        report = gradexp_report(
            poly,
            seed=seed,
            prec=prec,
            shells=tuple(args.shells),
            samples_per_shell=args.samples_per_shell,
        )
    return {
        "d": report.d,
        "mu": report.mu,
        "D": report.D,
        "theta": _rat_view(report.theta),
        "validated": report.validated,
        "max_ratio_C": report.max_ratio_C,
        "shells": [{"scale": scale, "max_ratio": ratio} for scale, ratio in report.shells],
    }


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, _ = run(argv)
        return code
    except CnullError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; report those as parse errors
        if exc.code in (0, None):
            return 0
        return 4
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 4


if __name__ == "__main__":
    sys.exit(main())
