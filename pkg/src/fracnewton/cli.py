"""Command line front end: ``fracnewton {solve,sweep,basin}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from pathlib import Path
from typing import Sequence

import numpy as np

from .dsl import parse_function
from .errors import ConstructionError, FracNewtonError, ParseError, PreconditionError
from .solver import SolverConfig, Status, iterate
from .sweep import (SENTINEL, BasinGrid, RootRecord, RootTable, SweepConfig, basin_scan,
                    conjugate_closure, dedup_filter, run_sweep)

HEADERS = ("alpha", "Re(x*)", "Im(x*)", "||f(x*)||_2", "Iter")
CSV_FIELDS = ("alpha", "re", "im", "residual", "iterations")

# index i of the reference table gets PALETTE[i % len(PALETTE)]; sentinel is black
PALETTE = (
    (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200), (245, 130, 48),
    (145, 30, 180), (70, 240, 240), (240, 50, 230), (210, 245, 60), (250, 190, 212),
    (0, 128, 128), (220, 190, 255), (170, 110, 40), (255, 250, 200), (128, 0, 0),
    (170, 255, 195), (128, 128, 0), (255, 215, 180), (0, 0, 128), (128, 128, 128),
)
BLACK = (0, 0, 0)


class UsageError(Exception):
    pass


def _fmt_alpha(a: float) -> str:
    s = f"{a:.3f}"
    if float(s) == a:
        return s
    return f"{a:.12f}".rstrip("0")


def format_row(rec) -> tuple[str, ...]:
    return (
        _fmt_alpha(rec.alpha),
        f"{rec.root.real:.11f}",
        f"{rec.root.imag:.11f}",
        f"{rec.residual:.6e}",
        str(rec.iterations),
    )


def render_table(records: Sequence) -> str:
    rows = [HEADERS] + [format_row(r) for r in records]
    widths = [max(len(r[k]) for r in rows) for k in range(len(HEADERS))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows]
    return "\n".join(lines) + "\n"


def _nz(v: float) -> float:
    return 0.0 if v == 0 else v


def record_dict(rec) -> dict:
    return {
        "alpha": _nz(rec.alpha),
        "re": _nz(rec.root.real),
        "im": _nz(rec.root.imag),
        "residual": rec.residual,
        "iterations": rec.iterations,
    }


def render_csv(records: Sequence) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for rec in records:
        d = record_dict(rec)
        w.writerow([repr(d[k]) if isinstance(d[k], float) else d[k] for k in CSV_FIELDS])
    return buf.getvalue()


def render_json(records: Sequence) -> str:
    return json.dumps([record_dict(r) for r in records], indent=2) + "\n"


RENDERERS = {"table": render_table, "csv": render_csv, "json": render_json}


def parse_x0(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"--x0 expects RE or RE,IM, got {text!r}")


def _function(args):
    if args.function_file:
        src = Path(args.function_file).read_text()
    elif args.function:
        src = args.function
    else:
        raise UsageError("one of --function / --function-file is required")
    return parse_function(src)


def _solver(args) -> SolverConfig:
    return SolverConfig(tol_residual=args.tol, max_iter=args.max_iter)


def cmd_solve(args, out, err) -> int:
    f = _function(args)
    x0 = parse_x0(args.x0)
    res = iterate(f, args.alpha, x0, _solver(args))
    rec = RootRecord(res.alpha, res.root, res.residual, res.iterations)
    out.write(RENDERERS[args.format]([rec]))
    if res.status is not Status.CONVERGED:
        err.write(f"{res.status.value}\n")
        return 1
    return 0


def cmd_sweep(args, out, err) -> int:
    f = _function(args)
    solver = _solver(args)
    cfg = SweepConfig(x0=parse_x0(args.x0), alpha_min=args.alpha_min,
                      alpha_max=args.alpha_max, alpha_step=args.alpha_step, solver=solver)
    diag: Counter = Counter()
    records = run_sweep(f, cfg, workers=args.threads, diagnostics=diag)
    table = dedup_filter(records, args.cluster_tol)
    if args.conjugate_closure:
        table = conjugate_closure(table, f, solver=solver)
    out.write(RENDERERS[args.format](table.records))
    if not table.records:
        err.write("empty table: no run converged\n")
    if args.verbose:
        err.write(" ".join(f"{k}={v}" for k, v in sorted(diag.items())) + "\n")
    return 0


def _axis(lo: float, hi: float, n: int, name: str) -> np.ndarray:
    if n < 1:
        raise UsageError(f"--{name}-n must be >= 1")
    if n == 1:
        return np.array([lo])
    return np.linspace(lo, hi, n)


def write_ppm(grid: BasinGrid, path: Path):
    """Plain PPM (P3); top row is the largest x0, left column the smallest α."""
    h, w = grid.cells.shape
    lines = ["P3", f"{w} {h}", "255"]
    for i in range(h - 1, -1, -1):
        px = []
        for idx in grid.cells[i]:
            r, g, b = BLACK if idx == SENTINEL else PALETTE[idx % len(PALETTE)]
            px.append(f"{r} {g} {b}")
        lines.append(" ".join(px))
    path.write_text("\n".join(lines) + "\n")


def write_basin_csv(grid: BasinGrid, reference: RootTable, path: Path):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("alpha", "x0", "root_index", "re", "im"))
        for i, x0 in enumerate(grid.x0_axis):
            for j, a in enumerate(grid.alpha_axis):
                idx = int(grid.cells[i, j])
                if idx == SENTINEL:
                    w.writerow((repr(float(a)), repr(float(x0)), idx, "", ""))
                else:
                    z = reference.records[idx].root
                    w.writerow((repr(float(a)), repr(float(x0)), idx,
                                repr(_nz(z.real)), repr(_nz(z.imag))))


def cmd_basin(args, out, err) -> int:
    f = _function(args)
    solver = _solver(args)
    alpha_axis = _axis(args.alpha_min, args.alpha_max, args.alpha_n, "alpha")
    x0_axis = _axis(args.x0_min, args.x0_max, args.x0_n, "x0")
    grid = basin_scan(f, alpha_axis, x0_axis, solver, cluster_tol=args.cluster_tol,
                      workers=args.threads)
    reference = grid.reference
    path = Path(args.out)
    try:
        write_ppm(grid, path)
        write_basin_csv(grid, reference, path.with_suffix(path.suffix + ".csv"))
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 1
    for k, rec in enumerate(reference.records):
        out.write(f"{k} {rec.root.real:.11f} {rec.root.imag:.11f} rgb{PALETTE[k % len(PALETTE)]}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--function", "-f", help="function in the term DSL, e.g. 'x^2 - 1'")
    src.add_argument("--function-file", help="file holding the function text")
    common.add_argument("--tol", type=float, default=1e-8, help="residual tolerance")
    common.add_argument("--max-iter", type=int, default=300)
    common.add_argument("--threads", type=int, default=1, help="worker processes")

    p = argparse.ArgumentParser(prog="fracnewton",
                                description="Fractional Newton-Raphson root finder")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="single run at one order")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--x0", required=True, help="RE or RE,IM")
    s.add_argument("--format", choices=RENDERERS, default="table")
    s.set_defaults(handler=cmd_solve)

    w = sub.add_parser("sweep", parents=[common], help="sweep alpha from a fixed x0")
    w.add_argument("--x0", required=True, help="RE or RE,IM")
    w.add_argument("--alpha-min", type=float, default=-2.0)
    w.add_argument("--alpha-max", type=float, default=2.0)
    w.add_argument("--alpha-step", type=float, default=0.001)
    w.add_argument("--cluster-tol", type=float, default=1e-4)
    w.add_argument("--conjugate-closure", action="store_true")
    w.add_argument("--format", choices=RENDERERS, default="table")
    w.add_argument("--verbose", "-v", action="store_true", help="status counts on stderr")
    w.set_defaults(handler=cmd_sweep)

    b = sub.add_parser("basin", parents=[common], help="(alpha, x0) basin raster")
    b.add_argument("--alpha-min", type=float, required=True)
    b.add_argument("--alpha-max", type=float, required=True)
    b.add_argument("--alpha-n", type=int, default=64)
    b.add_argument("--x0-min", type=float, required=True)
    b.add_argument("--x0-max", type=float, required=True)
    b.add_argument("--x0-n", type=int, default=64)
    b.add_argument("--cluster-tol", type=float, default=1e-4)
    b.add_argument("--out", required=True, help="PPM path; grid CSV goes to <out>.csv")
    b.set_defaults(handler=cmd_basin)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, out, err)
    except (UsageError, ParseError, ConstructionError, PreconditionError) as exc:
        err.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return 2
    except FracNewtonError as exc:
        err.write(f"{parser.prog} {args.command}: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
