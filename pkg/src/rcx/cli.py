"""``rcx`` command line.

Exit codes: 0 success / Ramanujan, 1 pseudo-Ramanujan only, 2 not
Ramanujan (or point not in S_d for spectrum-check), 3 structural failure,
64 usage error, 65 domain error (bad input data, cap exceeded, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra.field import FieldError, get_field
from .building import DEFAULT_CAP, BallTooLargeError, BuildingParams, build_ball
from .complexes import (
    RcxFormatError,
    dumps,
    gen_cayley,
    gen_circulant,
    gen_complete,
    gen_voltage_cover,
    load,
    parse_perms,
    parse_voltages,
)
from .spectrum import (
    DEFAULT_TOL,
    RootFindingError,
    boundary_curve,
    gaussian_binomial,
    in_Sd,
    nontrivial_bound,
    trivial_tuples,
)
from .svg import plot_svg
from .verifier import DiagonalizationError, verify

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

EXIT_USAGE = 64
EXIT_DATA = 65

log = logging.getLogger("rcx")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numerical tolerance (default %(default)g)")
    g.add_argument("--seed", type=int, default=0, help="seed for all randomized steps (default 0)")
    g.add_argument("--cap", type=int, default=DEFAULT_CAP, help="ball vertex cap (default %(default)d)")
    g.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    return p


def _field_args(p):
    p.add_argument("--d", type=int, required=True, help="building rank d >= 2 (type A~_{d-1})")
    p.add_argument("--q", type=int, help="residue field size q (prime power)")
    p.add_argument(
        "--modulus",
        help="irreducible modulus for q = p^n, coefficients low degree first, e.g. 1,1,1 for x^2+x+1",
    )
    p.add_argument("--config", help="TOML file with keys q, modulus (and optionally d)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="rcx", description="Ramanujan complexes of type A~_{d-1} over F_q((t)).")
    parser.add_argument("--version", action="version", version=f"rcx {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser(
        "build-ball",
        parents=[common],
        help="build the radius-R ball of the building",
        description="Build the ball of radius R (graph distance) around the standard lattice and write it "
        "as JSON: params, vertex_count, vertices {index, color, type, distance, rep (polynomial strings, "
        "row-major)}, edges {k: [[source, target, multiplicity], ...]}.",
    )
    _field_args(p)
    p.add_argument("--radius", type=int, required=True, help="ball radius R >= 0")
    p.add_argument("--out", default="-", help="output JSON path ('-' for stdout)")

    p = sub.add_parser(
        "verify",
        parents=[common],
        help="decide Ramanujan / pseudo-Ramanujan for a .rcx complex",
        description="Verify a colored complex. Exit 0 Ramanujan, 1 pseudo-Ramanujan only, 2 neither, "
        "3 structural failure.",
    )
    p.add_argument("file", help=".rcx file, or '-' for stdin")
    p.add_argument("--t-index", type=int, default=1, help="[Gamma : Gamma cap PSL_d]; trivial tuples use zeta^(d/t)=1")
    p.add_argument("--strict", action="store_true", help="reject missing reverse edges instead of completing them")
    p.add_argument("--treat-trivial-as-nontrivial", action="store_true", help="test trivial tuples against S_d too")
    p.add_argument("--json", help="write the JSON report here")
    p.add_argument("--csv", help="write the spectrum CSV here (re/im per color, multiplicity, residual, class)")
    p.add_argument("--svg", help="scatter of lambda_1 over the S_{d,1} boundary")

    p = sub.add_parser(
        "curve",
        parents=[common],
        help="sample the boundary curve of S_{d,k}",
        description="Write M samples theta_j = 2 pi j / M of the boundary of S_{d,k} as CSV (theta, re, im); "
        "theta in radians.",
    )
    _field_args(p)
    p.add_argument("--k", type=int, required=True, help="color 1..d-1")
    p.add_argument("--samples", type=int, default=1024, help="number of samples M >= 16")
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    p.add_argument("--svg", help="also draw the curve as SVG")

    p = sub.add_parser(
        "bounds",
        parents=[common],
        help="per-color degree, nontrivial bound and trivial tuples",
        description="Print for each k: the Gaussian binomial degree [d,k]_q, the uniform bound on nontrivial "
        "|lambda_k| (d >= 3), and the trivial eigenvalue tuples.",
    )
    _field_args(p)

    p = sub.add_parser(
        "spectrum-check",
        parents=[common],
        help="test a tuple for membership in S_d",
        description="Recover the Satake parameters of (lambda_1..lambda_{d-1}) and test whether they lie on "
        "the unit circle. Exit 0 if in S_d, 2 otherwise.",
    )
    _field_args(p)
    p.add_argument("--lambda", dest="lam", required=True, help="re1,im1,re2,im2,... (d-1 complex values)")

    p = sub.add_parser("gen", help="generate sample complexes (.rcx)", description="Generate a .rcx complex.")
    gsub = p.add_subparsers(dest="variant", metavar="VARIANT")
    gsub.required = True
    g = gsub.add_parser("complete", parents=[common], help="complete graph K_m (d=2, q=m-2)")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--out", default="-")
    g = gsub.add_parser("circulant", parents=[common], help="circulant graph C_m(jumps) (d=2)")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--jumps", default="", help="comma separated jumps in 1..m/2")
    g.add_argument("--q", type=int, help="q (default: degree - 1)")
    g.add_argument("--out", default="-")
    g = gsub.add_parser(
        "cayley",
        parents=[common],
        help="complex from permutation generators",
        description="Each line of the perms file is '<k> <g(0)> <g(1)> ...'; g^-1 gets color d-k.",
    )
    g.add_argument("--perms", required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--m", type=int, help="vertex count (needed only if there are no generators)")
    g.add_argument("--out", default="-")
    g = gsub.add_parser(
        "cover",
        parents=[common],
        help="cyclic voltage cover of a d=2 complex",
        description="Voltages file lines are '<u> <v> <a>'; the reverse edge gets -a, unlisted edges 0.",
    )
    g.add_argument("--base", required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--voltages", help="voltages file (default: all zero)")
    g.add_argument("--out", default="-")
    return parser


def _field_from(args):
    q, modulus, d = args.q, None, args.d
    if args.config:
        cfg = tomllib.loads(Path(args.config).read_text())
        q = cfg.get("q", q)
        modulus = cfg.get("modulus")
        d = cfg.get("d", d)
    if args.modulus:
        modulus = [int(x) for x in args.modulus.split(",")]
    if q is None:
        raise UsageError("--q (or a config file with q) is required")
    return d, get_field(int(q), tuple(modulus) if modulus else None)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _cmd_build_ball(args):
    d, F = _field_from(args)
    ball = build_ball(BuildingParams(d, F), args.radius, cap=args.cap)
    _write(args.out, json.dumps(ball.to_json(), sort_keys=True) + "\n")
    if args.out not in (None, "-"):
        print(f"ball d={d} q={F.q} radius={args.radius}: {ball.n} vertices -> {args.out}")
    return 0


def _cmd_verify(args):
    report = verify(
        args.file,
        tol=args.tol,
        t_index=args.t_index,
        strict=args.strict,
        seed=args.seed,
        treat_trivial_as_nontrivial=args.treat_trivial_as_nontrivial,
    )
    if args.json:
        _write(args.json, json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n")
    if args.csv:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(report.csv_rows())
        _write(args.csv, buf.getvalue())
    if args.svg and report.d >= 2 and report.entries:
        from .spectrum import boundary_curve_array

        curves = []
        if report.d > 2:
            curves = [boundary_curve_array(report.d, report.q, 1, 1024)[1]]
        colors = {"trivial": "#7f7f7f", "nontrivial-in-Sd": "#2ca02c", "nontrivial-outside": "#d62728"}
        pts = [(e.tuple.values[0], colors[e.classification]) for e in report.entries]
        _write(args.svg, plot_svg(curves, pts, title="lambda_1"))
    print(f"{report.verdict} (d={report.d}, q={report.q}, n={report.n})")
    for k, v in report.flags.items():
        print(f"  {k}: {v}")
    if report.worst_offender is not None:
        w = report.worst_offender
        vals = ", ".join(f"{z.real:.10g}{z.imag:+.3g}i" for z in w.tuple.values)
        print(f"  worst offender: ({vals}) x{w.multiplicity}, root deviation {w.root_deviation:.3g}")
    for note in report.notes:
        print(f"  note: {note}")
    return report.exit_code


def _cmd_curve(args):
    d, F = _field_from(args)
    samples = boundary_curve(d, F.q, args.k, args.samples)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "re", "im"])
    for s in samples:
        w.writerow([repr(s.theta), repr(s.value.real), repr(s.value.imag)])
    _write(args.out, buf.getvalue())
    if args.svg:
        _write(args.svg, plot_svg([[s.value for s in samples]], title=f"boundary of S_{{{d},{args.k}}}, q={F.q}"))
    return 0


def _cmd_bounds(args):
    d, F = _field_from(args)
    q = F.q
    triv = trivial_tuples(d, q)
    print(f"d={d} q={q}")
    for k in range(1, d):
        deg = gaussian_binomial(d, k, q)
        line = f"k={k}: degree [{d},{k}]_{q} = {deg}"
        if d >= 3:
            line += f", nontrivial bound = {nontrivial_bound(d, q, k):.6f}"
        else:
            line += ", nontrivial bound: none (no uniform gap for d=2)"
        print(line)
    for zeta, t in triv:
        vals = ", ".join(_cfmt(z) for z in t.values)
        print(f"trivial zeta={_cfmt(zeta)}: ({vals})")
    return 0


def _cfmt(z):
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _cmd_spectrum_check(args):
    d, F = _field_from(args)
    try:
        parts = [float(x) for x in args.lam.split(",")]
    except ValueError:
        raise UsageError("--lambda must be comma separated numbers") from None
    if len(parts) != 2 * (d - 1):
        raise UsageError(f"--lambda needs {2 * (d - 1)} numbers (re, im per color)")
    lam = [complex(parts[2 * i], parts[2 * i + 1]) for i in range(d - 1)]
    v = in_Sd(d, F.q, lam, args.tol)
    roots = sorted(v.roots, key=lambda z: (-abs(z), np.angle(z)))
    rs = ", ".join(_rfmt(z) for z in roots)
    print(f"{'in' if v.member else 'NOT in'} S_{d}; roots {rs}; max | |z|-1 | = {v.max_modulus_deviation:.3g}")
    return 0 if v.member else 2


def _rfmt(z):
    z = complex(z)
    if abs(z.imag) < 1e-9:
        return f"{z.real:.3f}"
    return f"{z.real:.3f}{z.imag:+.3f}i"


def _cmd_gen(args):
    if args.variant == "complete":
        cx = gen_complete(args.m)
    elif args.variant == "circulant":
        jumps = [int(x) for x in args.jumps.split(",") if x.strip()]
        cx = gen_circulant(args.m, jumps, args.q)
    elif args.variant == "cayley":
        cx = gen_cayley(args.d, args.q, parse_perms(Path(args.perms).read_text()), args.m)
    else:
        base = load(args.base)
        volts = parse_voltages(Path(args.voltages).read_text()) if args.voltages else {}
        cx = gen_voltage_cover(base, args.m, volts)
    _write(args.out, dumps(cx))
    return 0


COMMANDS = {
    "build-ball": _cmd_build_ball,
    "verify": _cmd_verify,
    "curve": _cmd_curve,
    "bounds": _cmd_bounds,
    "spectrum-check": _cmd_spectrum_check,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING, format="%(levelname)s: %(message)s")
    threads = os.environ.get("RCX_THREADS")
    try:
        if threads:
            from threadpoolctl import threadpool_limits

            with threadpool_limits(int(threads)):
                return COMMANDS[args.command](args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rcx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        RcxFormatError,
        FieldError,
        BallTooLargeError,
        RootFindingError,
        DiagonalizationError,
        ValueError,
        OSError,
    ) as exc:
        print(f"rcx: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
