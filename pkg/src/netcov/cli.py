"""Command-line front end.

Subcommands: net gen | net verify, scramble, psi profile | psi eval, covpoly,
qscan, figure-scan, simulate, verify.  Scan output is CSV (one float per
cell, repr-formatted so identical inputs give identical bytes); structured
reports are JSON with sorted keys.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .counting import joint_pdf, profile_bruteforce
from .covkernel import cov_polynomial, q_s
from .digits import AT_LEAST_P, ConfigurationError, DigitPoint, gamma_vector
from .estimators import ExperimentConfig, run_experiment
from .nets import faure_net, load_point_set, save_point_set, verify_net
from .scramble import ScrambleSeed, default_precision, owen_scramble
from . import checks

PRIMES_TO_53 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)
CRITICAL = "critical"  # marks a = (b-1)/b, resolved per swept base


@dataclass(frozen=True)
class ScanSpec:
    """One parameter sweep of the scaled covariance polynomial."""

    vary: str                      # "base" | "m" | "s" | "a"
    values: tuple
    base: int | None
    m: int | None
    s: int | None
    a: object                      # Fraction or CRITICAL
    grid: tuple[Fraction, ...]
    scale: bool

    def __post_init__(self):
        if self.vary not in ("base", "m", "s", "a"):
            raise ConfigurationError(f"cannot sweep {self.vary!r}")
        if not self.values:
            raise ConfigurationError("empty sweep")
        if not self.grid:
            raise ConfigurationError("empty x-grid")


def figure_scan(spec: ScanSpec) -> str:
    """CSV with one row per (swept value, grid x); fixed parameters recorded
    on the leading comment line."""
    fixed = []
    for name in ("base", "m", "s", "a"):
        if name != spec.vary:
            fixed.append(f"{name}={getattr(spec, name)}")
    fixed.append(f"scale={'1/(b^m-1)' if spec.scale else 'none'}")
    lines = ["# fixed: " + " ".join(fixed), f"{spec.vary},x,value"]
    for val in spec.values:
        b = val if spec.vary == "base" else spec.base
        m = val if spec.vary == "m" else spec.m
        s = val if spec.vary == "s" else spec.s
        a = val if spec.vary == "a" else spec.a
        if a == CRITICAL:
            a = Fraction(b - 1, b)
        poly = cov_polynomial(b, m, s, a)
        scale = Fraction(1, b ** m - 1) if spec.scale else Fraction(1)
        for x in spec.grid:
            value = poly.eval(x) * scale
            lines.append(f"{val},{float(x)!r},{float(value)!r}")
    return "\n".join(lines) + "\n"


FIGURE_PRESETS = {
    "3a": dict(vary="base", values=PRIMES_TO_53, m=3, s=3, a=CRITICAL),
    "3b": dict(vary="m", values=tuple(range(1, 17)), base=3, s=3,
               a=Fraction(2, 3)),
    "3c": dict(vary="s", values=tuple(range(1, 17)), base=3, m=3,
               a=Fraction(2, 3)),
    "4": dict(vary="a", values=tuple(Fraction(j, 16) for j in range(1, 17)),
              base=3, m=3, s=3),
    "5a": dict(vary="base", values=PRIMES_TO_53, m=3, s=3, a=Fraction(1)),
    "5b": dict(vary="m", values=tuple(range(1, 17)), base=3, s=3,
               a=Fraction(1)),
    "5c": dict(vary="s", values=tuple(range(1, 17)), base=3, m=3,
               a=Fraction(1)),
}


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _parse_grid(text: str) -> tuple[Fraction, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must be lo:hi:step, got {text!r}")
    lo, hi, step = (_parse_fraction(p) for p in parts)
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad grid bounds in {text!r}")
    out = []
    x = lo
    while x <= hi:
        out.append(x)
        x += step
    return tuple(out)


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_points(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return load_point_set(fh)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _cmd_net_gen(args) -> int:
    ps = faure_net(args.base, args.m, args.s, precision=args.precision)
    buf = io.StringIO()
    save_point_set(ps, buf)
    _write(buf.getvalue(), args.out)
    return 0


def _cmd_net_verify(args) -> int:
    ps = _load_points(args.file)
    t = ps.t if args.t is None else args.t
    report = verify_net(ps, t=t)
    _write(_json(report.to_dict()), None)
    return 0 if report.passed else 1


def _cmd_scramble(args) -> int:
    ps = _load_points(args.file)
    precision = args.precision
    if precision is None:
        precision = default_precision(ps.b, ps.m)
    for r in range(args.reps):
        out = owen_scramble(ps, ScrambleSeed(args.seed, r), precision=precision)
        buf = io.StringIO()
        save_point_set(out, buf)
        if args.out_prefix:
            _write(buf.getvalue(), f"{args.out_prefix}{r:03d}.txt")
        else:
            sys.stdout.write(buf.getvalue())
    return 0


def _cmd_psi_profile(args) -> int:
    profile = profile_bruteforce(_load_points(args.file))
    _write(_json(profile.to_dict()), args.out)
    return 0


def _parse_point(text: str, b: int, precision: int) -> DigitPoint:
    values = [_parse_fraction(v) for v in text.split(",")]
    return DigitPoint.from_fractions(values, base=b, precision=precision)


def _cmd_psi_eval(args) -> int:
    ps = _load_points(args.file)
    profile = profile_bruteforce(ps)
    x = _parse_point(args.x, ps.b, ps.precision)
    y = _parse_point(args.y, ps.b, ps.precision)
    parts, total = gamma_vector(x, y)
    density = joint_pdf(profile, x, y)
    doc = {
        "gamma": [str(p) if p is AT_LEAST_P else p for p in parts],
        "gamma_total": str(total) if total is AT_LEAST_P else total,
        "pdf": str(density),
        "pdf_float": float(density),
        "precision": ps.precision,
    }
    _write(_json(doc), args.out)
    return 0


def _cmd_covpoly(args) -> int:
    poly = cov_polynomial(args.base, args.m, args.s, args.a)
    if args.x_grid is None:
        _write(_json(poly.to_dict()), args.out)
        return 0
    scale = (Fraction(1, args.base ** args.m - 1)
             if args.scale == "inv-nm1" else Fraction(1))
    lines = ["x,value"]
    for x in args.x_grid:
        lines.append(f"{float(x)!r},{float(poly.eval(x) * scale)!r}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_qscan(args) -> int:
    lines = ["x,value"]
    for x in args.x_grid:
        lines.append(f"{float(x)!r},{float(q_s(args.base, args.m, args.s, x))!r}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_figure_scan(args) -> int:
    names = [args.preset] if args.preset else sorted(FIGURE_PRESETS)
    for name in names:
        preset = dict(FIGURE_PRESETS[name])
        spec = ScanSpec(
            vary=preset.pop("vary"), values=tuple(preset.pop("values")),
            base=preset.pop("base", None), m=preset.pop("m", None),
            s=preset.pop("s", None), a=preset.pop("a", CRITICAL),
            grid=args.x_grid, scale=True,
        )
        csv_text = figure_scan(spec)
        if args.out_dir:
            os.makedirs(args.out_dir, exist_ok=True)
            _write(csv_text, os.path.join(args.out_dir, f"fig{name}.csv"))
        else:
            sys.stdout.write(csv_text)
    return 0


def _cmd_simulate(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    doc.setdefault("seed", args.seed)
    doc.setdefault("threads", args.threads)
    cfg = ExperimentConfig.from_dict(doc)
    report = run_experiment(cfg)
    _write(_json(report.to_dict()), args.out)
    if args.trace:
        rows = ["r,est_re,est_im,pair_term"]
        rows.extend(f"{r},{re!r},{im!r},{t!r}"
                    for r, re, im, t in report.trace_rows())
        _write("\n".join(rows) + "\n", args.trace)
    return 0


def _cmd_verify(args) -> int:
    report = checks.verify_all()
    if args.format == "json":
        _write(_json(report), args.out)
    else:
        lines = []
        for entry in report["checks"]:
            tag = "PASS" if entry["passed"] else "FAIL"
            lines.append(f"{tag} {entry['name']} ({entry['seconds']:.2f}s): "
                         f"{entry['detail']}")
        lines.append("all checks passed" if report["passed"]
                     else "FAILED: " + ", ".join(
                         e["name"] for e in report["checks"] if not e["passed"]))
        _write("\n".join(lines) + "\n", args.out)
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netcov",
        description="Scrambled digital nets and their pair-covariance analysis",
    )
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed for all randomized subcommands")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for replication loops")
    parser.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output style for commands that support both")
    sub = parser.add_subparsers(dest="command", required=True)

    p_net = sub.add_parser("net", help="generate or verify digital nets")
    net_sub = p_net.add_subparsers(dest="net_command", required=True)
    p_gen = net_sub.add_parser("gen", help="generate a base-b net")
    p_gen.add_argument("--base", type=int, required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--s", type=int, required=True)
    p_gen.add_argument("--precision", type=int, default=None)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(fn=_cmd_net_gen)
    p_ver = net_sub.add_parser("verify", help="check net equidistribution")
    p_ver.add_argument("--t", type=int, default=None,
                       help="quality parameter to test (default: the file's)")
    p_ver.add_argument("file")
    p_ver.set_defaults(fn=_cmd_net_verify)

    p_scr = sub.add_parser("scramble", help="scramble a point-set file")
    p_scr.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                       help="overrides the global --seed")
    p_scr.add_argument("--reps", type=int, default=1)
    p_scr.add_argument("--precision", type=int, default=None)
    p_scr.add_argument("--out-prefix", default=None,
                       help="write one file per replication with this prefix")
    p_scr.add_argument("file")
    p_scr.set_defaults(fn=_cmd_scramble)

    p_psi = sub.add_parser("psi", help="pair-profile and density inspection")
    psi_sub = p_psi.add_subparsers(dest="psi_command", required=True)
    p_prof = psi_sub.add_parser("profile", help="brute-force pair profile")
    p_prof.add_argument("--out", default=None)
    p_prof.add_argument("file")
    p_prof.set_defaults(fn=_cmd_psi_profile)
    p_eval = psi_sub.add_parser("eval", help="density at a point pair")
    p_eval.add_argument("--x", required=True,
                        help="comma-separated rational coordinates")
    p_eval.add_argument("--y", required=True)
    p_eval.add_argument("--out", default=None)
    p_eval.add_argument("file")
    p_eval.set_defaults(fn=_cmd_psi_eval)

    p_cov = sub.add_parser("covpoly", help="covariance polynomial")
    p_cov.add_argument("--base", type=int, required=True)
    p_cov.add_argument("--m", type=int, required=True)
    p_cov.add_argument("--s", type=int, required=True)
    p_cov.add_argument("--a", type=_parse_fraction, required=True)
    p_cov.add_argument("--x-grid", type=_parse_grid, default=None,
                       help="lo:hi:step with rational entries")
    p_cov.add_argument("--scale", choices=("none", "inv-nm1"), default="none")
    p_cov.add_argument("--out", default=None)
    p_cov.set_defaults(fn=_cmd_covpoly)

    p_q = sub.add_parser("qscan", help="scan the beta-form witness")
    p_q.add_argument("--base", type=int, required=True)
    p_q.add_argument("--m", type=int, required=True)
    p_q.add_argument("--s", type=int, required=True)
    p_q.add_argument("--x-grid", type=_parse_grid, required=True)
    p_q.add_argument("--out", default=None)
    p_q.set_defaults(fn=_cmd_qscan)

    p_fig = sub.add_parser("figure-scan", help="preset parameter sweeps")
    p_fig.add_argument("--preset", choices=sorted(FIGURE_PRESETS),
                       default=None, help="default: emit every preset")
    p_fig.add_argument("--x-grid", type=_parse_grid,
                       default=_parse_grid("0:1:1/100"))
    p_fig.add_argument("--out-dir", default=None)
    p_fig.set_defaults(fn=_cmd_figure_scan)

    p_sim = sub.add_parser("simulate", help="replication experiment")
    p_sim.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                       help="overrides the global --seed")
    p_sim.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                       help="overrides the global --threads")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out", default=None)
    p_sim.add_argument("--trace", default=None,
                       help="CSV of per-replication estimates")
    p_sim.set_defaults(fn=_cmd_simulate)

    p_verify = sub.add_parser("verify", help="run the identity suite")
    p_verify.add_argument("what", nargs="?", default="identities",
                          choices=("identities",))
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(fn=_cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigurationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
