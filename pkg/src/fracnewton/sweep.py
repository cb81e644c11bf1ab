"""α sweeps from a fixed start, root tables, and (α, x0) basin grids."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import ConjugateResidualError, PreconditionError
from .funcmodel import FunctionExpr, evaluate
from .solver import ALPHA_MAX, ALPHA_MIN, SolverConfig, Status, iterate

DEFAULT_CLUSTER_TOL = 1e-4
SENTINEL = -1

# grid values are rounded so that e.g. -2 + 2865*0.001 lands on 0.865 exactly
_GRID_DECIMALS = 12


@dataclass(frozen=True)
class SweepConfig:
    x0: complex
    alpha_min: float = ALPHA_MIN
    alpha_max: float = ALPHA_MAX
    alpha_step: float = 0.001
    solver: SolverConfig = field(default_factory=SolverConfig)
    exclusions: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "x0", complex(self.x0))
        object.__setattr__(self, "exclusions", tuple(float(a) for a in self.exclusions))
        if not self.alpha_min < self.alpha_max:
            raise PreconditionError("alpha_min must be < alpha_max")
        if not self.alpha_step > 0:
            raise PreconditionError("alpha_step must be positive")
        if self.alpha_min < ALPHA_MIN or self.alpha_max > ALPHA_MAX:
            raise PreconditionError("alpha range must lie within [-2, 2]")
        if self.x0 == 0:
            raise PreconditionError("initial condition must be nonzero")


@dataclass(frozen=True)
class RootRecord:
    alpha: float
    root: complex
    residual: float
    iterations: int
    #: True for entries added by conjugate_closure
    synthetic: bool = False


@dataclass(frozen=True)
class RootTable:
    records: tuple[RootRecord, ...] = ()
    cluster_tol: float = DEFAULT_CLUSTER_TOL

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def roots(self) -> list[complex]:
        return [r.root for r in self.records]

    def nearest(self, z: complex) -> int:
        """Index of the closest root within ``cluster_tol``, else ``SENTINEL``."""
        if not self.records or not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return SENTINEL
        d = np.abs(np.asarray(self.roots) - z)
        i = int(np.argmin(d))
        return i if d[i] < self.cluster_tol else SENTINEL


@dataclass(frozen=True)
class BasinGrid:
    """Root index per cell; ``cells[i, j]`` is for ``x0_axis[i]``, ``alpha_axis[j]``."""

    alpha_axis: np.ndarray
    x0_axis: np.ndarray
    cells: np.ndarray
    reference: RootTable = RootTable()

    def __post_init__(self):
        if self.cells.shape != (len(self.x0_axis), len(self.alpha_axis)):
            raise ValueError("cells shape does not match axes")

    def cell_at(self, alpha: float, x0: float) -> int:
        """Value of the cell whose axis points are nearest ``(alpha, x0)``."""
        j = int(np.argmin(np.abs(self.alpha_axis - alpha)))
        i = int(np.argmin(np.abs(self.x0_axis - x0)))
        return int(self.cells[i, j])


def alpha_grid(cfg: SweepConfig) -> list[float]:
    """``alpha_min + k*alpha_step`` strictly inside ``(alpha_min, alpha_max)``."""
    out = []
    k = 1
    while True:
        a = round(cfg.alpha_min + k * cfg.alpha_step, _GRID_DECIMALS)
        if a >= cfg.alpha_max:
            break
        if a > cfg.alpha_min and not any(abs(a - e) < 1e-12 for e in cfg.exclusions):
            out.append(a + 0.0)  # normalize -0.0
        k += 1
    return out


def _solve_one(args):
    f, alpha, x0, solver = args
    return iterate(f, alpha, x0, solver)


def _map(fn, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    chunk = max(1, len(jobs) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs, chunksize=chunk))


def run_sweep(f: FunctionExpr, cfg: SweepConfig, *, alphas: Iterable[float] | None = None,
              workers: int = 1, diagnostics: Counter | None = None) -> list[RootRecord]:
    """Run the solver at every grid α and keep the converged runs.

    ``alphas`` overrides the grid built from ``cfg``.  Failed runs are dropped;
    pass a ``Counter`` as ``diagnostics`` to get per-status counts.
    """
    grid = alpha_grid(cfg) if alphas is None else [float(a) for a in alphas]
    outcomes = _map(_solve_one, [(f, a, cfg.x0, cfg.solver) for a in grid], workers)
    records = []
    for out in outcomes:
        if diagnostics is not None:
            diagnostics[out.status.value] += 1
        if out.status is Status.CONVERGED:
            records.append(RootRecord(out.alpha, out.root, out.residual, out.iterations))
    records.sort(key=lambda r: r.alpha)
    return records


def _rank(r: RootRecord):
    return (r.iterations, r.residual, r.alpha)


def dedup_filter(records: Sequence[RootRecord],
                 cluster_tol: float = DEFAULT_CLUSTER_TOL) -> RootTable:
    """Cluster records by root proximity and keep one per cluster.

    Clusters are single-linkage: two records share a cluster when a chain of
    records, each within ``cluster_tol`` of the next, joins them.  The kept
    record has the fewest iterations, then the smallest residual, then the
    smallest α.  Conjugate roots are separate clusters.
    """
    if not cluster_tol > 0:
        raise PreconditionError("cluster_tol must be positive")
    records = list(records)
    n = len(records)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    roots = np.array([r.root for r in records], dtype=complex)
    for i in range(n - 1):
        close = np.nonzero(np.abs(roots[i + 1:] - roots[i]) < cluster_tol)[0]
        for j in close:
            a, b = find(i), find(i + 1 + int(j))
            if a != b:
                parent[b] = a
    best: dict[int, RootRecord] = {}
    for i, rec in enumerate(records):
        c = find(i)
        if c not in best or _rank(rec) < _rank(best[c]):
            best[c] = rec
    kept = sorted(best.values(), key=lambda r: (r.alpha, r.root.real, r.root.imag))
    return RootTable(tuple(kept), cluster_tol)


def conjugate_closure(table: RootTable, f: FunctionExpr, *, tol_residual: float = 1e-8,
                      solver: SolverConfig | None = None) -> RootTable:
    """Add the missing complex conjugate of every non-real root.

    Only valid for real-coefficient ``f``.  A synthesized conjugate inherits α
    and the iteration count; its residual is recomputed and must stay below
    ``10 * tol_residual``.
    """
    if solver is not None:
        tol_residual = solver.tol_residual
    prec = (solver or SolverConfig()).precision_for(f)
    tol = table.cluster_tol
    roots = table.roots
    added = []
    for rec in table.records:
        if abs(rec.root.imag) <= tol:
            continue
        conj = rec.root.conjugate()
        if any(abs(conj - r) < tol for r in roots):
            continue
        residual = abs(evaluate(f, conj, prec))
        if not residual <= 10 * tol_residual:
            raise ConjugateResidualError(
                f"|f({conj})| = {residual:.3e} exceeds 10 x {tol_residual:g}")
        added.append(replace(rec, root=conj, residual=residual, synthetic=True))
        roots.append(conj)
    if not added:
        return table
    merged = sorted(table.records + tuple(added),
                    key=lambda r: (r.alpha, r.synthetic, r.root.real, r.root.imag))
    return RootTable(tuple(merged), tol)


def _basin_cell(args):
    f, alpha, x0, solver = args
    if x0 == 0:
        return None
    return iterate(f, alpha, x0, solver)


def basin_scan(f: FunctionExpr, alpha_axis: Sequence[float], x0_axis: Sequence[float],
               solver: SolverConfig, reference: RootTable | None = None, *,
               cluster_tol: float = DEFAULT_CLUSTER_TOL, workers: int = 1) -> BasinGrid:
    """Which reference root each (α, x0) start converges to.

    Without a ``reference`` the distinct roots reached on the grid itself are
    used, ordered by real then imaginary part.
    """
    alpha_axis = np.asarray(alpha_axis, dtype=float)
    x0_axis = np.asarray(x0_axis, dtype=float)
    if alpha_axis.size == 0 or x0_axis.size == 0:
        raise PreconditionError("basin axes must be non-empty")
    if reference is not None and len(reference) == 0:
        raise PreconditionError("reference table is empty")
    jobs = [(f, float(a), float(x), solver) for x in x0_axis for a in alpha_axis]
    outcomes = _map(_basin_cell, jobs, workers)
    if reference is None:
        found = [RootRecord(o.alpha, o.root, o.residual, o.iterations) for o in outcomes
                 if o is not None and o.status is Status.CONVERGED]
        table = dedup_filter(found, cluster_tol)
        reference = RootTable(tuple(sorted(table.records, key=_root_order)), cluster_tol)
    cells = np.full(len(jobs), SENTINEL, dtype=int)
    for k, out in enumerate(outcomes):
        if out is not None and out.status is Status.CONVERGED:
            cells[k] = reference.nearest(out.root)
    return BasinGrid(alpha_axis, x0_axis, cells.reshape(len(x0_axis), len(alpha_axis)),
                     reference)


def _root_order(r: RootRecord):
    return (round(r.root.real, 8), round(r.root.imag, 8))
