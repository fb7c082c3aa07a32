"""
Command-line front end.

    focalqed fig2      decay rate at the focus vs numerical aperture
    focalqed fig3      decay rate vs displacement from the focus (node)
    focalqed fig4      decay rate, excited shift, Casimir-Polder shift vs k0 R
    focalqed scaling   Casimir-Polder shift at a = n pi and the plane-mirror curve
    focalqed casimir   single Casimir-Polder shift, physical or dimensionless
    focalqed check     run the self-check suite

Exit codes: 0 success, 1 failed check, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .checks import CHECKS, run_check
from .observables import (BARIUM_CLAIMED_HZ, BARIUM_NOTE, DEFAULT_KAPPA,
                          CasimirParams, casimir_decomposition,
                          casimir_physical, casimir_polder_shift,
                          lamb_direct)
from .sweeps import execute, resolve_spec

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID = 0, 1, 2

SUBCOMMAND_KINDS = {
    "fig2": "fig2_na_sweep",
    "fig3": "fig3_displacement",
    "fig4": "fig4_distance",
    "scaling": "casimir_scaling",
}


def _vector(text):
    try:
        v = [float(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    if len(v) != 3:
        raise argparse.ArgumentTypeError(f"expected three components, got {text!r}")
    return v


def _int_list(text):
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_output(p):
    p.add_argument("--config", metavar="PATH", help="JSON file with sweep parameters; flags override it")
    p.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")


def _add_grid(p):
    p.add_argument("--grid-theta", type=int, help="polar quadrature nodes (default 160)")
    p.add_argument("--grid-phi", type=int, help="azimuthal quadrature nodes (default 320)")


def _add_dipole(p):
    p.add_argument("--dipole", type=_vector, metavar="X,Y,Z",
                   help="dipole direction, normalized on input (default 1,0,0)")


def build_parser():
    parser = argparse.ArgumentParser(prog="focalqed", description=__doc__.splitlines()[1].strip())
    parser.add_argument("--version", action="version", version=f"focalqed {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS

    p = sub.add_parser("fig2", help="decay rate at the focus vs NA", argument_default=S)
    p.add_argument("--na-steps", type=int, help="number of NA samples (>= 10, default 100)")
    p.add_argument("--na-min", type=float, help="smallest NA sampled (default 1e-3)")
    p.add_argument("--a", type=float, help="reference k0 R, snapped to n pi and (n+1/2) pi (default 20 pi)")
    p.add_argument("--rho", type=float, help="mirror reflectivity (default 1)")
    _add_dipole(p)
    _add_grid(p)
    _add_output(p)

    p = sub.add_parser("fig3", help="decay rate vs displacement, node configuration", argument_default=S)
    p.add_argument("--direction", choices=["axial", "transverse"])
    p.add_argument("--r-max", type=float, help="scan length in wavelengths (default 12)")
    p.add_argument("--steps", type=int, help="samples including r = 0 (default 241)")
    p.add_argument("--a", type=float, help="k0 R, snapped to the nearest n pi (default 20 pi)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha-deg", type=float, help="mirror half-aperture in degrees (default 90)")
    g.add_argument("--na", type=float, help="numerical aperture, alternative to --alpha-deg")
    p.add_argument("--rho", type=float, help="mirror reflectivity (default 1)")
    _add_dipole(p)
    _add_grid(p)
    _add_output(p)

    p = sub.add_parser("fig4", help="observables vs k0 R, full hemisphere", argument_default=S)
    p.add_argument("--a-min", type=float, help="first k0 R (>= 10 pi, default 10 pi)")
    p.add_argument("--a-max", type=float, help="last k0 R (default 14 pi)")
    p.add_argument("--steps", type=int, help="samples (default 401)")
    p.add_argument("--kappa", type=float, help="cutoff ratio K/k0 (default 1e3)")
    _add_dipole(p)
    _add_grid(p)
    _add_output(p)

    p = sub.add_parser("scaling", help="Casimir-Polder shift at a = n pi", argument_default=S)
    p.add_argument("--n-list", type=_int_list, metavar="N1,N2,...",
                   help="phase-aligned multiples of pi (default 10,20,50,100,200,500,1000)")
    p.add_argument("--kappa", type=float, help="cutoff ratio K/k0 (default 1e3)")
    _add_output(p)

    p = sub.add_parser("casimir", help="Casimir-Polder shift for one configuration")
    p.add_argument("--lambda-nm", type=float, help="transition wavelength in nm")
    p.add_argument("--gamma-hz", type=float, help="free-space decay rate in Hz")
    p.add_argument("--radius-m", type=float, help="mirror radius in m")
    p.add_argument("--a", type=float, help="dimensionless k0 R")
    p.add_argument("--kappa", type=float, help=f"cutoff ratio K/k0 (default {DEFAULT_KAPPA:g})")
    p.add_argument("--json", action="store_true")
    parser.casimir_usage = p.format_usage()

    p = sub.add_parser("check", help="run the self-check suite")
    p.add_argument("--only", action="append", choices=sorted(CHECKS), help="run only this check (repeatable)")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--output", metavar="PATH", help="also write the JSON report here")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of one line per check")
    return parser


def _load_config(path, kind):
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    if "kind" in cfg and cfg["kind"] != kind:
        raise ValueError(f"config is for {cfg['kind']!r}, not {kind!r}")
    params = cfg.get("parameters", {k: v for k, v in cfg.items() if k not in ("kind", "output_path")})
    return dict(params), cfg.get("output_path")


def spec_from_args(args):
    """Resolve the SweepSpec for a table-producing subcommand."""
    kind = SUBCOMMAND_KINDS[args.command]
    params, output_path = {}, None
    if getattr(args, "config", None):
        params, output_path = _load_config(args.config, kind)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "output", "json")}
    if "na" in flags:
        na = flags.pop("na")
        if not 0.0 < na <= 1.0:
            raise ValueError(f"NA must lie in (0, 1], got {na}")
        flags["alpha_deg"] = math.degrees(math.asin(na))
    params.update(flags)
    return resolve_spec(kind, params, getattr(args, "output", None) or output_path)


def _emit(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_table(args):
    spec = spec_from_args(args)
    result = execute(spec)
    text = result.to_json() + "\n" if getattr(args, "json", False) else result.to_csv()
    _emit(text, spec.output_path)
    return EXIT_OK


def run_casimir(args):
    dimensional = [args.lambda_nm, args.gamma_hz, args.radius_m]
    dimensionless = [args.a, args.kappa]
    if any(v is not None for v in dimensional) and any(v is not None for v in dimensionless):
        raise ValueError("give either --lambda-nm/--gamma-hz/--radius-m or --a/--kappa, not both")
    if any(v is not None for v in dimensional):
        if any(v is None for v in dimensional):
            raise ValueError("physical mode needs --lambda-nm, --gamma-hz and --radius-m")
        hz = casimir_physical(*dimensional)
        a = 2 * math.pi * args.radius_m / (args.lambda_nm * 1e-9)
        report = {"mode": "physical", "lambda_nm": args.lambda_nm, "gamma_hz": args.gamma_hz,
                  "radius_m": args.radius_m, "a": a, "delta_cp": float(casimir_polder_shift(a)), "shift_hz": hz,
                  "claimed_hz": BARIUM_CLAIMED_HZ, "note": BARIUM_NOTE}
    elif args.a is not None:
        p = CasimirParams(args.a, DEFAULT_KAPPA if args.kappa is None else args.kappa)
        parts = casimir_decomposition(p)
        report = {"mode": "dimensionless", "a": p.a, "kappa": p.kappa, "delta_se": parts.delta_se,
                  "delta_fs": parts.delta_fs, "delta_cp": parts.delta_cp, "lamb_direct": lamb_direct(p)}
    else:
        raise ValueError("casimir needs --lambda-nm/--gamma-hz/--radius-m or --a [--kappa]")
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for k, v in report.items():
            print(f"{k}: {format(v, '.17g') if isinstance(v, float) else v}")
    return EXIT_OK


def _run_check(args):
    report = run_check(verbosity=args.verbose, names=args.only)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        _emit(text + "\n", args.output)
    if args.json:
        print(text)
    else:
        for r in report["checks"]:
            status = "PASS" if r["passed"] else "FAIL"
            detail = r.get("error") or f"measured {r['measured']:.3e} (tol {r['tolerance']:.1e})"
            print(f"{status}  {r['name']}: {detail}")
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "casimir":
            return run_casimir(args)
        if args.command == "check":
            return _run_check(args)
        return _run_table(args)
    except (ValueError, OSError) as exc:
        if args.command == "casimir":
            sys.stderr.write(parser.casimir_usage)
        print(f"focalqed {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
