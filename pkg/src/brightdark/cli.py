"""Command-line interface.

Exit codes: 0 success, 1 failed verification, 2 invalid arguments,
3 output path not writable.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .correlations import CouplingConfig, correlate
from .correlations import g2 as closed_form_g2
from .geometry import SlitGeometry, beta_from_angle
from .modes import DEFAULT_N_MAX, dark_shares, decompose, pattern
from .montecarlo import SamplerConfig, estimate_g2, sample_pattern
from .records import FORMATS, OutputRecord, make_provenance, write_record
from .states import Coherent, bright_mode_population, format_source, mean_total_photons, parse_source
from .verify import LEVELS, run_checks

EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_UNWRITABLE = 3


class UsageError(Exception):
    pass


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--out", default="-", help="output file (default: stdout)")
    p.add_argument("--no-provenance", action="store_true",
                   help="omit the timestamp so repeated runs are byte-identical")


def _add_beta(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=float, help="dimensionless phase parameter")
    p.add_argument("--slit-width", type=float, help="slit width b in meters")
    p.add_argument("--wavelength", type=float, help="wavelength in meters")
    p.add_argument("--theta", type=float, help="detection angle in radians")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brightdark", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pattern", help="single-slit intensity |c_0|^2 on a uniform angle grid")
    p.add_argument("--slit-width", type=float, required=True)
    p.add_argument("--wavelength", type=float, required=True)
    p.add_argument("--theta-min", type=float, required=True)
    p.add_argument("--theta-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    _add_output(p)

    p = sub.add_parser("decompose", help="bright/dark coefficients c_n at one angle")
    _add_beta(p)
    p.add_argument("--nmax", type=int, default=DEFAULT_N_MAX)
    _add_output(p)

    p = sub.add_parser("correlate", help="G1 and G2 for a source at one angle")
    p.add_argument("--source", required=True, help="single | fock:N | coherent:RE,IM")
    _add_beta(p)
    p.add_argument("--coupling", type=float, default=1.0)
    _add_output(p)

    p = sub.add_parser("verify", help="run the invariant and oracle checks")
    p.add_argument("--level", choices=LEVELS, default="quick")
    _add_output(p)

    p = sub.add_parser("sample", help="Monte Carlo detection histogram or empirical G2")
    p.add_argument("--source", default="single")
    p.add_argument("--observable", choices=("pattern", "g2"), default="pattern")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bins", type=int, default=201)
    p.add_argument("--theta-min", type=float, default=-0.5)
    p.add_argument("--theta-max", type=float, default=0.5)
    _add_beta(p)
    _add_output(p)
    return parser


def _resolve_beta(args) -> tuple[float, SlitGeometry | None]:
    """Beta from --beta, or from the physical triple; never both."""
    physical = (args.slit_width, args.wavelength, args.theta)
    if args.beta is not None:
        if args.wavelength is not None or args.theta is not None:
            raise UsageError("give either --beta or --slit-width/--wavelength/--theta, not both")
        if not math.isfinite(args.beta):
            raise UsageError("--beta must be finite")
        geom = None
        if args.slit_width is not None:
            # --slit-width alone is allowed with --beta; coherent sources need b
            geom = SlitGeometry(args.slit_width, 1.0)
        return args.beta, geom
    if any(v is None for v in physical):
        raise UsageError("need --beta or all of --slit-width, --wavelength, --theta")
    geom = SlitGeometry(args.slit_width, args.wavelength)
    return beta_from_angle(geom, args.theta), geom


def _parameters(args, *names) -> dict:
    return {n: getattr(args, n) for n in names if getattr(args, n, None) is not None}


def cmd_pattern(args) -> OutputRecord:
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    if not args.theta_min < args.theta_max:
        raise UsageError("--theta-min must be below --theta-max")
    geom = SlitGeometry(args.slit_width, args.wavelength)
    rows = pattern(geom, np.linspace(args.theta_min, args.theta_max, args.points))
    return OutputRecord(
        command="pattern",
        parameters=_parameters(args, "slit_width", "wavelength", "theta_min", "theta_max", "points"),
        columns=["theta", "beta", "intensity"],
        rows=rows.tolist(),
        provenance=make_provenance(__version__, timestamp=not args.no_provenance),
    )


def cmd_decompose(args) -> OutputRecord:
    beta, _ = _resolve_beta(args)
    dec = decompose(beta, args.nmax)
    try:
        shares = dark_shares(dec)
    except ValueError:
        shares = {}
    rows = []
    for n, c in zip(dec.indices, dec.coefficients):
        n = int(n)
        rows.append([n, float(c.real), float(c.imag), float(abs(c) ** 2), shares.get(n)])
    params = _parameters(args, "beta", "slit_width", "wavelength", "theta", "nmax")
    params["beta_resolved"] = beta
    return OutputRecord(
        command="decompose",
        parameters=params,
        columns=["n", "re", "im", "weight", "dark_share"],
        rows=rows,
        footer={"captured_weight": dec.captured_weight, "tail_bound": dec.tail_bound},
        provenance=make_provenance(__version__, timestamp=not args.no_provenance),
    )


def _source(args):
    try:
        return parse_source(args.source)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _require_geometry(src, geom) -> None:
    if isinstance(src, Coherent) and geom is None:
        raise UsageError("coherent sources need --slit-width (|alpha|^2 b is the photon number)")


def cmd_correlate(args) -> OutputRecord:
    src = _source(args)
    beta, geom = _resolve_beta(args)
    _require_geometry(src, geom)
    if not args.coupling > 0:
        raise UsageError("--coupling must be > 0")
    res = correlate(src, beta, geom, CouplingConfig(args.coupling))
    params = _parameters(args, "beta", "slit_width", "wavelength", "theta", "coupling")
    params["source"] = format_source(src)
    params["beta_resolved"] = beta
    return OutputRecord(
        command="correlate",
        parameters=params,
        columns=["g1", "g2", "mean_total_photons", "bright_mode_population"],
        rows=[[res.g1, res.g2, mean_total_photons(src, geom), bright_mode_population(src, beta, geom)]],
        provenance=make_provenance(__version__, timestamp=not args.no_provenance),
    )


def cmd_sample(args) -> OutputRecord:
    src = _source(args)
    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    try:
        cfg = SamplerConfig(args.seed, args.shots, args.theta_min, args.theta_max, args.bins)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    params = _parameters(args, "observable", "shots", "bins", "theta_min", "theta_max",
                         "beta", "slit_width", "wavelength", "theta")
    params["source"] = format_source(src)
    prov = make_provenance(__version__, seed=args.seed, timestamp=not args.no_provenance)

    if args.observable == "pattern":
        if args.slit_width is None or args.wavelength is None:
            raise UsageError("pattern sampling needs --slit-width and --wavelength")
        hist = sample_pattern(SlitGeometry(args.slit_width, args.wavelength), cfg)
        rows = [[float(lo), float(hi), int(c)]
                for lo, hi, c in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts)]
        return OutputRecord("sample", params, ["theta_lo", "theta_hi", "count"], rows, prov,
                            footer={"total": hist.total})

    beta, geom = _resolve_beta(args)
    _require_geometry(src, geom)
    try:
        est = estimate_g2(src, beta, geom, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    params["beta_resolved"] = beta
    return OutputRecord("sample", params, ["g2", "stderr", "closed_form", "shots"],
                        [[est.value, est.stderr, closed_form_g2(src, beta), est.shots]], prov)


def cmd_verify(args) -> tuple[OutputRecord, bool]:
    checks = run_checks(args.level)
    ok = all(c.passed for c in checks)
    record = OutputRecord(
        command="verify",
        parameters={"level": args.level},
        columns=["check", "residual", "tolerance", "passed", "detail"],
        rows=[[c.name, c.residual, c.tolerance, c.passed, c.detail] for c in checks],
        footer={"passed": ok, "checks": len(checks), "failed": sum(not c.passed for c in checks)},
        provenance=make_provenance(__version__, timestamp=not args.no_provenance),
    )
    return record, ok


COMMANDS = {
    "pattern": cmd_pattern,
    "decompose": cmd_decompose,
    "correlate": cmd_correlate,
    "sample": cmd_sample,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    ok = True
    try:
        if args.command == "verify":
            record, ok = cmd_verify(args)
        else:
            record = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        write_record(record, args.out, args.format)
    except OSError as exc:
        print(f"{parser.prog}: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    return 0 if ok else EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
