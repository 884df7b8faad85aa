"""Command-line interface: ``raux zeros | verify | xray | asym | residual``.

Exit codes: 0 success, 1 verification mismatch, 2 convergence failure,
3 sampling exhausted, 64 usage, 65 bad data, 74 I/O.
"""

from __future__ import annotations

import argparse
import logging
import os
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .auxiliary import siegel_residual
from .errors import InvalidArgument, PoleError, RauxError
from .numerics import PrecisionContext, ctx_new
from .table import TableFormatError, ZeroTable, agree, format_sig, load_any, record_json
from .xray import FUNCS, eta_markers, image_write, xray_render
from .zeros import rho_asymptotic, zero_solve

EX_OK = 0
EX_MISMATCH = 1
EX_CONVERGENCE = 2
EX_EXHAUSTED = 3
EX_USAGE = 64
EX_DATAERR = 65
EX_IOERR = 74

# Knuth's MMIX multiplier and increment for the 64-bit LCG
LCG_A = 6364136223846793005
LCG_C = 1442695040888963407
LCG_MASK = (1 << 64) - 1

POLE_RADIUS = 1e-2

log = logging.getLogger("raux")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


class Lcg64:
    """x <- (a x + c) mod 2^64; uniforms take the top 53 bits."""

    def __init__(self, seed: int):
        self.state = seed & LCG_MASK

    def next_u64(self) -> int:
        self.state = (LCG_A * self.state + LCG_C) & LCG_MASK
        return self.state

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * ((self.next_u64() >> 11) / float(1 << 53))


def _context(digits: int, bits: int | None) -> PrecisionContext:
    if bits is None and os.environ.get("RAUX_BITS"):
        try:
            bits = int(os.environ["RAUX_BITS"])
        except ValueError:
            raise UsageError(f"RAUX_BITS={os.environ['RAUX_BITS']!r} is not an integer") from None
    try:
        return ctx_new(digits, bits)
    except InvalidArgument as exc:
        raise UsageError(str(exc)) from None


def _floats(text: str, count: int):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers") from None
    if len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers")
    return tuple(vals)


def _window(text):
    return _floats(text, 4)


# -- zeros ------------------------------------------------------------------

def _solve_one(args):
    n, digits, bits, validate = args
    try:
        return n, zero_solve(n, ctx_new(digits, bits), validate=validate), None
    except RauxError as exc:
        return n, None, str(exc)


def solve_range(lo: int, hi: int, ctx: PrecisionContext, validate: bool = True, jobs: int = 1):
    """``[(n, record or None, error or None)]`` in index order."""
    tasks = [(n, ctx.digits, ctx.bits, validate) for n in range(lo, hi + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_solve_one, tasks))
    return [_solve_one(t) for t in tasks]


def cmd_zeros(lo, hi, digits, out, fmt="tsv", bits=None, validate=True, jobs=1) -> int:
    if not (1 <= lo <= hi):
        raise UsageError(f"need 1 <= from <= to, got {lo}..{hi}")
    if digits < 10:
        raise UsageError("digits must be at least 10")
    ctx = _context(digits, bits)
    results = solve_range(lo, hi, ctx, validate, jobs)
    good = [rec for _, rec, _ in results if rec is not None]
    failed = [(n, err) for n, rec, err in results if rec is None]
    for rec in good:
        if rec.digits < digits:
            log.warning("n=%d: only %d digits survive doubled precision", rec.n, rec.digits)
    if fmt == "jsonl":
        text = "".join(record_json(rec, digits) + "\n" for rec in good)
    else:
        # rows after the first failure would leave a gap
        prefix = []
        for n, rec, _ in results:
            if rec is None:
                break
            prefix.append(rec)
        text = ZeroTable.from_records(prefix, digits).to_tsv()
    try:
        if out in (None, "-"):
            sys.stdout.write(text)
        else:
            Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"raux: cannot write {out}: {exc.strerror}", file=sys.stderr)
        return EX_IOERR
    for n, err in failed:
        print(f"raux: n={n} failed: {err}", file=sys.stderr)
    return EX_CONVERGENCE if failed else EX_OK


# -- verify -----------------------------------------------------------------

def cmd_verify(table, digits, bits=None, jobs=1) -> int:
    if digits < 1:
        raise UsageError("digits must be positive")
    try:
        tab = load_any(table)
    except FileNotFoundError:
        print(f"raux: no such file: {table}", file=sys.stderr)
        return EX_IOERR
    except OSError as exc:
        print(f"raux: cannot read {table}: {exc.strerror}", file=sys.stderr)
        return EX_IOERR
    except TableFormatError as exc:
        print(f"raux: {table}: {exc}", file=sys.stderr)
        return EX_DATAERR
    print(f"raux: {table}: layout '{tab.layout}', {len(tab.records)} rows, digits={tab.digits}",
          file=sys.stderr)
    compare = min(digits, tab.digits)
    ctx = _context(max(10, digits), bits)
    rows = {r.n: r for r in tab.records}
    lo, hi = tab.records[0].n, tab.records[-1].n
    bad = 0
    failed = False
    for n, rec, err in solve_range(lo, hi, ctx, validate=False, jobs=jobs):
        row = rows[n]
        if rec is None:
            print(f"raux: n={n} failed: {err}", file=sys.stderr)
            failed = True
            continue
        ok_b = agree(row.beta, rec.beta, compare)
        ok_g = agree(row.gamma, rec.gamma, compare)
        if not (ok_b and ok_g):
            bad += 1
            print(
                f"mismatch n={n}: table {row.beta} {row.gamma}; "
                f"computed {format_sig(rec.beta, compare)} {format_sig(rec.gamma, compare)}",
                file=sys.stderr,
            )
    if bad:
        return EX_MISMATCH
    if failed:
        return EX_CONVERGENCE
    print(f"verified {len(rows)} rows to {compare} significant digits")
    return EX_OK


# -- xray -------------------------------------------------------------------

def cmd_xray(func, window, res, out, markers=0, fmt=None) -> int:
    if func not in FUNCS:
        raise UsageError(f"unknown function {func!r}")
    x0, x1, y0, y1 = window
    if not (x0 < x1 and y0 < y1):
        raise UsageError(f"degenerate window {window}")
    width = res
    height = max(1, round(res * (y1 - y0) / (x1 - x0)))
    if min(width, height) < 16:
        raise UsageError(f"resolution {width}x{height} is below the 16-pixel minimum")
    if markers < 0:
        raise UsageError("markers must be >= 0")
    if fmt is None:
        fmt = "svg" if str(out).lower().endswith(".svg") else "portable-pixmap"
    img = xray_render(func, window, width, height)
    if markers:
        try:
            img = img.with_markers(eta_markers(markers))
        except RauxError as exc:
            print(f"raux: markers: {exc}", file=sys.stderr)
            return EX_CONVERGENCE
    try:
        image_write(img, out, fmt)
    except OSError as exc:
        print(f"raux: cannot write {out}: {exc.strerror}", file=sys.stderr)
        return EX_IOERR
    return EX_OK


# -- asym -------------------------------------------------------------------

def cmd_asym(n, digits=25, bits=None) -> int:
    if n < 3:
        raise UsageError("n must be >= 3")
    ctx = _context(digits, bits)
    try:
        rho = zero_solve(n, ctx).rho
    except RauxError as exc:
        print(f"raux: {exc}", file=sys.stderr)
        return EX_CONVERGENCE
    approx = rho_asymptotic(n, ctx)
    mp = ctx.mp
    err = abs(approx / rho - 1)
    print(f"{mp.nstr(approx, 15)}\t{mp.nstr(rho, 15)}\t{mp.nstr(err, 6)}")
    return EX_OK


# -- residual ---------------------------------------------------------------

def near_pole(s: complex) -> bool:
    """Within POLE_RADIUS of s = 1 (zeta) or an odd positive integer (chi)."""
    if abs(s.imag) >= POLE_RADIUS or s.real < 1 - POLE_RADIUS:
        return False
    k = 2 * round((s.real - 1) / 2) + 1
    return abs(s - k) < POLE_RADIUS


def draw_points(samples: int, seed: int, box, oversample: int = 10):
    """``samples`` pole-avoiding points of the box, or None when too many draws fall near poles."""
    x0, x1, y0, y1 = box
    rng = Lcg64(seed)
    pts = []
    for _ in range(oversample * samples):
        s = complex(rng.uniform(x0, x1), rng.uniform(y0, y1))
        if near_pole(s):
            continue
        pts.append(s)
        if len(pts) == samples:
            return pts
    return None


def cmd_residual(samples, seed, box, digits=25, bits=None) -> int:
    if samples < 1:
        raise UsageError("samples must be >= 1")
    x0, x1, y0, y1 = box
    if x0 > x1 or y0 > y1:
        raise UsageError(f"bad box {box}")
    ctx = _context(digits, bits)
    pts = draw_points(samples, seed, box)
    if pts is None:
        print("raux: too many draws landed on poles", file=sys.stderr)
        return EX_EXHAUSTED
    try:
        res = [siegel_residual(s, ctx) for s in pts]
    except PoleError as exc:
        print(f"raux: {exc}", file=sys.stderr)
        return EX_EXHAUSTED
    except RauxError as exc:
        print(f"raux: {exc}", file=sys.stderr)
        return EX_CONVERGENCE
    mp = ctx.mp
    worst = max(res)
    print(f"max\t{mp.nstr(worst, 6)}\nmedian\t{mp.nstr(statistics.median(res), 6)}")
    return EX_OK if worst < mp.mpf(10) ** (-(digits - 5)) else EX_MISMATCH


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="raux", description="Zeros of Riemann's auxiliary function R(s).")
    p.add_argument("-v", "--verbose", action="store_true", help="log advisories")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def precision(sp, default):
        sp.add_argument("--digits", type=int, default=default)
        sp.add_argument("--bits", type=int, default=None, help="working bits (overrides RAUX_BITS)")

    z = sub.add_parser("zeros", help="compute rho_{-n} for a range of n")
    z.add_argument("--from", dest="lo", type=int, required=True)
    z.add_argument("--to", dest="hi", type=int, required=True)
    precision(z, 25)
    z.add_argument("--out", default="-")
    z.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    z.add_argument("--no-validate", action="store_true", help="skip the doubled-precision check")
    z.add_argument("--jobs", type=int, default=1)

    v = sub.add_parser("verify", help="recompute a table and compare")
    v.add_argument("table")
    precision(v, 25)
    v.add_argument("--jobs", type=int, default=1)

    x = sub.add_parser("xray", help="render an X-ray image")
    x.add_argument("func", choices=FUNCS)
    x.add_argument("--window", type=_window, default=(0.0, 5.0, 0.0, 5.0), help="x0,x1,y0,y1")
    x.add_argument("--res", type=int, default=800, help="width in pixels")
    x.add_argument("--out", required=True)
    x.add_argument("--markers", type=int, default=0, help="overlay eta_1..eta_M")
    x.add_argument("--format", choices=("portable-pixmap", "svg"), default=None)

    a = sub.add_parser("asym", help="asymptotic expansion against the computed zero")
    a.add_argument("n", type=int)
    precision(a, 25)

    r = sub.add_parser("residual", help="Siegel-identity residual sweep")
    r.add_argument("--samples", type=int, default=100)
    r.add_argument("--seed", type=int, default=42)
    r.add_argument("--box", type=_window, default=(-6.0, 7.0, -15.0, 15.0), help="x0,x1,y0,y1")
    precision(r, 25)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="raux: %(message)s")
    try:
        if args.cmd == "zeros":
            return cmd_zeros(args.lo, args.hi, args.digits, args.out, args.format, args.bits,
                             not args.no_validate, args.jobs)
        if args.cmd == "verify":
            return cmd_verify(args.table, args.digits, args.bits, args.jobs)
        if args.cmd == "xray":
            return cmd_xray(args.func, args.window, args.res, args.out, args.markers, args.format)
        if args.cmd == "asym":
            return cmd_asym(args.n, args.digits, args.bits)
        return cmd_residual(args.samples, args.seed, args.box, args.digits, args.bits)
    except UsageError as exc:
        print(f"raux: {exc}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
