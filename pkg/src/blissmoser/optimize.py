"""Lower estimates of ``sup_{E_N}`` of a weighted functional.

Two searches: a scan over the one-parameter broken-line family, and a
projected gradient ascent over nonnegative slope vectors on a grid that is
geometric toward the origin, where all concentration happens.

Supercritical suprema grow only like a power of ``log(1/a)`` as the
concentration abscissa ``a`` shrinks, so a numeric cap on the value is
rarely reached in double precision.  When the ascent ends concentrated on
the finest grid cell, a probe continues the broken-line family below the
grid at ``log(e/a) = L0, 2 L0, 4 L0, 8 L0``: increments that do not shrink
under doubling of ``log(e/a)`` are reported as divergence.
"""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .functionals import eval_functional, grad_slopes
from .gridfn import GridFn, _check_N, from_slopes, geometric_grid, max_ratio, normalize
from .quad import QuadConfig
from .sequences import broken_line
from .weights import WeightSpec

__all__ = [
    "ScanResult",
    "scan_broken_line",
    "OptimizeReport",
    "maximize_gridfn",
    "STATUSES",
]

STATUSES = ("converged", "budget_exhausted", "divergence_detected")
_MAX_HALVINGS = 60


@dataclass(frozen=True)
class ScanResult:
    best_a: float
    best_value: float
    table: list[tuple[float, float, bool]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("a,value,converged\n")
        for a, v, c in self.table:
            buf.write(f"{a:.17g},{v:.17g},{'true' if c else 'false'}\n")
        return buf.getvalue()


def scan_broken_line(W: WeightSpec, N: int, a_grid, cfg: QuadConfig | None = None,
                     workers: int = 1) -> ScanResult:
    """Evaluate the functional on ``broken_line(a)`` for every ``a`` in ``a_grid``.

    With ``workers > 1`` points run on a thread pool; the table keeps grid order.
    """
    N = _check_N(N)
    grid = [float(a) for a in a_grid]
    if not grid:
        raise ValueError("empty scan grid")
    for a in grid:
        if not 0.0 < a <= 1.0:
            raise ValueError(f"scan abscissa {a} outside (0, 1]")

    def one(a):
        res = eval_functional(broken_line(a, N), W, N, cfg)
        return (a, res.value, res.converged)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            table = list(pool.map(one, grid))
    else:
        table = [one(a) for a in grid]
    i = int(np.argmax([row[1] for row in table]))
    return ScanResult(best_a=table[i][0], best_value=table[i][1], table=table)


@dataclass
class OptimizeReport:
    best_fn: GridFn
    best_value: float
    iterations: int
    status: str
    trace: list[float] = field(default_factory=list)
    concentration: float = 1.0
    probe: list[tuple[float, float]] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({
            "status": self.status,
            "best_value": self.best_value,
            "iterations": self.iterations,
            "concentration": self.concentration,
            "probe": [list(p) for p in self.probe],
            "nodes": [list(p) for p in self.best_fn.nodes],
        })

    def trace_csv(self) -> str:
        buf = io.StringIO()
        buf.write("iteration,value\n")
        for i, v in enumerate(self.trace):
            buf.write(f"{i},{v:.17g}\n")
        return buf.getvalue()


def _value(f, W, N, cfg) -> float:
    return eval_functional(f, W, N, cfg).value


def _initial(W, N, x, init, cfg) -> GridFn:
    if isinstance(init, GridFn):
        if init.x.shape != x.shape or not np.allclose(init.x, x, rtol=1e-15, atol=0.0):
            raise ValueError("initial function does not live on the optimization grid")
        if not init.is_monotone():
            raise ValueError("initial function must have nonnegative slopes")
        if not np.any(init.v != 0.0):
            return normalize(from_slopes(x, np.ones(len(x) - 1)), N)
        return normalize(init, N)
    if init is None:
        # warm start: best broken line with kink on a grid node
        best, best_val = None, -math.inf
        for a in x[1:]:
            f = from_slopes(x, np.where(x[1:] <= a, a ** (-1.0 / N), 0.0))
            val = _value(f, W, N, cfg)
            if val > best_val:
                best, best_val = f, val
        return normalize(best, N)
    rng = np.random.default_rng(init)
    return normalize(from_slopes(x, rng.lognormal(0.0, 1.0, len(x) - 1)), N)


def _probe(W, N, a0, cfg) -> list[tuple[float, float]]:
    L0 = 1.0 - math.log(a0)
    out = []
    for k in range(4):
        a = math.exp(1.0 - L0 * 2 ** k)
        out.append((a, eval_functional(broken_line(a, N), W, N, cfg).log_value))
    return [(a, math.exp(lv) if lv < 709 else math.inf) for a, lv in out]


def _diverging(probe) -> bool:
    vals = np.array([v for _, v in probe])
    if not np.all(np.isfinite(vals)):
        return True
    inc = np.diff(vals)
    return bool(np.all(inc > 0.0) and np.all(inc[1:] >= inc[:-1]))


def maximize_gridfn(W: WeightSpec, N: int, segments: int = 64, init=None, iters: int = 200,
                    cfg: QuadConfig | None = None, finest: float = 1e-9,
                    divergence_cap: float = 1e6, rel_improve: float = 1e-8,
                    grid=None) -> OptimizeReport:
    """Projected gradient ascent of the functional over slope vectors.

    The grid is ``geometric_grid(segments, finest)`` unless ``grid`` (or a
    GridFn ``init``) fixes it.  ``init`` may be a GridFn, an integer seed
    (random lognormal slopes), or None (best broken line with its kink on a
    grid node).  Each step moves along ``grad / widths`` (the gradient in
    the metric ``sum dg_i^2 dx_i``), clips negative slopes, rescales to
    energy 1, and backtracks by halving until the value increases.
    """
    N = _check_N(N)
    cfg = cfg or QuadConfig()
    if grid is not None:
        x = np.asarray(grid, dtype=float)
    elif isinstance(init, GridFn):
        x = init.x.copy()
    else:
        if segments < 2:
            raise ValueError("need at least 2 segments")
        x = geometric_grid(segments, finest)
    if len(x) < 3:
        raise ValueError("need at least 2 segments")
    widths = np.diff(x)

    f = _initial(W, N, x, init, cfg)
    val = _value(f, W, N, cfg)
    trace = [val]
    status = "budget_exhausted"
    step = None
    it = 0
    while it < iters:
        if val > divergence_cap:
            status = "divergence_detected"
            break
        grad = grad_slopes(f, W, N, cfg)
        direction = grad / widths
        if not np.all(np.isfinite(direction)):
            status = "divergence_detected"
            break
        norm = float(np.linalg.norm(direction * np.sqrt(widths)))
        if norm == 0.0:
            status = "converged"
            break
        step = 1.0 / (1.0 + norm) if step is None else 2.0 * step
        accepted = None
        for _ in range(_MAX_HALVINGS):
            trial = np.clip(f.slopes + step * direction, 0.0, None)
            if np.any(trial > 0.0):
                g = normalize(from_slopes(x, trial), N)
                gv = _value(g, W, N, cfg)
                if gv > val:
                    accepted = (g, gv)
                    break
            step *= 0.5
        if accepted is None:
            status = "converged"
            break
        it += 1
        gain = (accepted[1] - val) / val
        f, val = accepted
        trace.append(val)
        if val > divergence_cap:
            status = "divergence_detected"
            break
        if gain < rel_improve:
            status = "converged"
            break

    conc = max_ratio(f, N).a
    probe = []
    if status != "divergence_detected" and conc <= x[1] * (1.0 + 1e-12):
        probe = _probe(W, N, x[1], cfg)
        if _diverging(probe):
            status = "divergence_detected"
    return OptimizeReport(best_fn=f, best_value=val, iterations=it, status=status,
                          trace=trace, concentration=conc, probe=probe)
