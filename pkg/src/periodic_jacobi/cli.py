"""Command-line front end.

Subcommands: bands, measure, gram, spectral, phi, verify.  Every command
writes one table (CSV with a header row, or JSON with "meta" and "data").

Exit codes: 0 success, 1 check failure, 2 usage error, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .bands import band_grid, turning_points, zero_sets
from .errors import ConsistencyError, DomainError, ExtrapolationError, QuadratureError
from .measure import gram_matrix, masses, orthogonality_measure, total_mass, weight, MAX_GRAM_DEGREE
from .recurrence import RecurrenceSpec
from .spectral import phi_cf, phi_closed, spectral_densities
from .suite import default_tolerance, run_suite
from .tableio import Table, emit

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _coupling(text: str):
    try:
        return Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")


def _n_range(text: str) -> list[int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or invalid range {text!r}")
    return list(range(lo, hi + 1))


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _meta(args, **extra) -> dict:
    meta = {"command": args.command, "tool": "periodic-jacobi", "version": __version__,
            "a": float(args.a)}
    if getattr(args, "N_range", None):
        meta["N"] = args.N_range
    else:
        meta["N"] = args.N
    for key in ("points", "max_deg", "depth"):
        if getattr(args, key, None) is not None:
            meta[key] = getattr(args, key)
    meta.update(extra)
    return meta


def _spec(args, N=None) -> RecurrenceSpec:
    N = args.N if N is None else N
    if N is None:
        raise UsageError("--N is required")
    if N < 1:
        raise UsageError("--N must be >= 1")
    return RecurrenceSpec(args.a, N)


# -- commands ----------------------------------------------------------------

def cmd_bands(args) -> Table:
    Ns = args.N_range or [args.N]
    if Ns == [None]:
        raise UsageError("give --N or --N-range")
    t = Table(["kind", "N", "k", "lo", "hi", "x", "m", "positive", "double"], meta=_meta(args))
    for N in Ns:
        spec = _spec(args, N)
        bs = turning_points(spec)
        for k, (lo, hi) in enumerate(bs.bands, start=1):
            t.add(kind="band", N=N, k=k, lo=lo, hi=hi, double=k in bs.double_roots)
        for k, (lo, hi) in enumerate(bs.merged_support(), start=1):
            t.add(kind="support", N=N, k=k, lo=lo, hi=hi)
        for k in bs.double_roots:
            t.add(kind="double_root", N=N, k=k, x=float(bs.xi[2 * k - 1]))
        for k, (y, m) in enumerate(masses(spec, bs.zeros), start=1):
            t.add(kind="mass", N=N, k=k, x=y, m=m, positive=bool(m > 0))
        zs = zero_sets(spec)
        for name, arr in (("zero_P_N", zs.x), ("zero_P_N-1", zs.y), ("zero_P*_N", zs.z)):
            for k, v in enumerate(arr, start=1):
                t.add(kind=name, N=N, k=k, x=float(v))
    return t


def cmd_measure(args) -> Table:
    spec = _spec(args)
    mu = orthogonality_measure(spec)
    t = Table(["kind", "k", "x", "value"], meta=_meta(args))
    for k, xs in enumerate(band_grid(mu.bands, args.points), start=1):
        for x, w in zip(xs, weight(spec, mu.bands, xs)):
            t.add(kind="weight", k=k, x=float(x), value=float(w))
    for k, (y, m) in enumerate(mu.masses, start=1):
        t.add(kind="mass", k=k, x=y, value=m)
    tm = total_mass(spec)
    t.add(kind="total_mass", value=tm)
    tol = default_tolerance()
    if not abs(tm - 1) <= tol:
        args._failure = f"total mass {tm!r} differs from 1 by more than {tol:g}"
    return t


def cmd_gram(args) -> Table:
    spec = _spec(args)
    if not 0 <= args.max_deg <= MAX_GRAM_DEGREE:
        raise UsageError(f"--max-deg must lie in [0, {MAX_GRAM_DEGREE}]")
    G = gram_matrix(spec, args.max_deg, include_masses=not args.no_masses)
    t = Table(["kind", "m", "n", "value"], meta=_meta(args, include_masses=not args.no_masses))
    for m in range(G.shape[0]):
        for n in range(G.shape[1]):
            t.add(kind="entry", m=m, n=n, value=float(G[m, n]))
    off = G - np.diag(np.diag(G))
    t.add(kind="max_offdiagonal", value=float(np.max(np.abs(off))) if G.shape[0] > 1 else 0.0)
    t.add(kind="min_diagonal", value=float(np.min(np.diag(G))))
    return t


def cmd_spectral(args) -> Table:
    spec = _spec(args)
    sd = spectral_densities(spec)
    t = Table(["kind", "k", "x", "d00", "d01", "d11"], meta=_meta(args))
    for k, xs in enumerate(band_grid(sd.bands, args.points), start=1):
        d00, d01, d11 = sd._direct(xs)
        for row in zip(xs, d00, d01, d11):
            t.add(kind="density", k=k, x=float(row[0]), d00=float(row[1]), d01=float(row[2]), d11=float(row[3]))
    return t


def cmd_phi(args) -> Table:
    spec = _spec(args)
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    t = Table(["kind", "re", "im", "closed_re", "closed_im", "cf_re", "cf_im", "abs_diff"], meta=_meta(args, im=args.im))
    for v in args.im:
        if v == 0:
            raise UsageError("--im values must be nonzero")
        for u in np.linspace(args.re_min, args.re_max, args.points):
            z = complex(u, v)
            c = complex(phi_closed(spec, z))
            f = complex(phi_cf(spec, z, args.depth))
            t.add(kind="phi", re=float(u), im=float(v), closed_re=c.real, closed_im=c.imag,
                  cf_re=f.real, cf_im=f.imag, abs_diff=abs(c - f))
    return t


def cmd_verify(args) -> Table:
    spec = _spec(args)
    tol = default_tolerance()
    t = Table(["check_name", "status", "max_residual", "detail"], meta=_meta(args, tolerance=tol))
    entries = run_suite(spec, tol=tol)
    for e in entries:
        t.add(check_name=e.check_name, status=e.status, max_residual=e.max_residual, detail=e.detail)
    failed = [e for e in entries if e.status == "fail"]
    if failed:
        args._failure = f"check {failed[0].check_name} failed (residual {failed[0].max_residual:.3g})"
    return t


COMMANDS = {
    "bands": cmd_bands,
    "measure": cmd_measure,
    "gram": cmd_gram,
    "spectral": cmd_spectral,
    "phi": cmd_phi,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="periodic-jacobi",
        description="Bands, orthogonality measure and spectral data for the period-N cosine recurrence.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_range=False):
        p.add_argument("--a", type=_coupling, required=True, help="coupling a (float or p/q)")
        p.add_argument("--N", type=int, help="period N >= 1")
        if n_range:
            p.add_argument("--N-range", dest="N_range", type=_n_range, help="inclusive range LO..HI of periods")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", help="output file (default: stdout)")

    common(sub.add_parser("bands", help="turning points, bands, mass points and zeros"), n_range=True)
    p = sub.add_parser("measure", help="weight on band grids, point masses and total mass")
    common(p)
    p.add_argument("--points", type=_positive_int, default=50, help="grid points per band")
    p = sub.add_parser("gram", help="Gram matrix of P_0..P_max-deg")
    common(p)
    p.add_argument("--max-deg", dest="max_deg", type=int, default=10)
    p.add_argument("--no-masses", action="store_true", help="drop the point masses (negative control)")
    p = sub.add_parser("spectral", help="densities of mu_00, mu_01, mu_11 on band grids")
    common(p)
    p.add_argument("--points", type=_positive_int, default=50, help="grid points per band")
    p = sub.add_parser("phi", help="closed form against continued fraction on a complex grid")
    common(p)
    p.add_argument("--points", type=_positive_int, default=5, help="points along the real axis")
    p.add_argument("--re-min", dest="re_min", type=float, default=-2.0)
    p.add_argument("--re-max", dest="re_max", type=float, default=2.0)
    p.add_argument("--im", type=lambda s: [float(v) for v in s.split(",")], default=[0.25, 0.5, 1.0],
                   help="comma-separated imaginary parts")
    p.add_argument("--depth", type=_positive_int, default=400)
    common(sub.add_parser("verify", help="run the invariant suite"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad usage
    if args.command in ("measure", "spectral") and args.points < 2:
        parser.error("--points must be >= 2")
    args._failure = None
    try:
        table = COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"periodic-jacobi {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # e.g. a malformed PJ_TOLERANCE
        print(f"periodic-jacobi {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, ExtrapolationError) as exc:
        print(f"periodic-jacobi {args.command}: numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConsistencyError as exc:
        # includes TurningPointError: the solver could not account for all 2N roots
        print(f"periodic-jacobi {args.command}: solver failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = emit(table, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args._failure:
        print(f"periodic-jacobi {args.command}: {args._failure}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
