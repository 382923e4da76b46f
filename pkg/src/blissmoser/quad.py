"""Adaptive quadrature for ``int_0^1 exp(W(s) |v(s)|^N / s^(N-1)) ds``.

Breakpoints of ``v`` are always panel boundaries.  Each panel is integrated
with the 15-point Gauss-Kronrod rule, the embedded 7-point Gauss rule giving
the error estimate ``|K15 - G7|``.  A panel stores ``m`` (the largest
exponent among its nodes) and the integral of ``exp(phi - m)``, so panels
with enormous integrands are combined in log space and never overflow.

Panels touching ``s = 0`` start geometrically graded (ratio
``QuadConfig.origin_refinement``), and so do panels of a segment spanning
several octaves, e.g. the plateau ``[1/j, 1]`` of a Moser function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gridfn import GridFn, _check_N
from .weights import WeightSpec, _weight_from_log

__all__ = [
    "QuadConfig",
    "QuadResult",
    "QuadratureError",
    "integrate_exp",
    "exponent",
]

# Gauss-Kronrod 7/15 on [-1, 1] (QUADPACK qk15 constants)
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
KRONROD_WEIGHTS = np.concatenate((_WGK[:-1], _WGK[::-1]))
_GAUSS_IDX = np.array([1, 3, 5, 7, 9, 11, 13])
GAUSS_WEIGHTS = np.concatenate((_WG[:-1], _WG[::-1]))

# deepest geometric level next to the origin, relative to the segment length
_ORIGIN_DEPTH = 1e-18
_MAX_ROUNDS = 400


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_panels: int = 100_000
    origin_refinement: float = 2.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_panels < 8:
            raise ValueError("max_panels must be >= 8")
        if not self.origin_refinement > 1.0:
            raise ValueError("origin_refinement must exceed 1")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    panels_used: int
    converged: bool
    log_value: float


class QuadratureError(ArithmeticError):
    """Raised when the exponent is not finite at some abscissa."""

    def __init__(self, s: float, detail: str = "non-finite exponent"):
        super().__init__(f"{detail} at s={s!r}")
        self.s = s


@dataclass
class _Panels:
    lo: np.ndarray
    hi: np.ndarray
    seg: np.ndarray
    m: np.ndarray        # per-panel exponent shift
    k: np.ndarray        # (P, C) Kronrod integral of exp(phi - m) * mult
    err: np.ndarray      # (P,) sum over components of |K - G|, same shift
    converged: bool

    def shift(self) -> float:
        return float(self.m.max())

    def scaled(self, M: float):
        """Panel integrals and errors multiplied by ``exp(m - M)``, ascending in s."""
        order = np.argsort(self.lo, kind="stable")
        sc = np.exp(self.m[order] - M)
        return self.seg[order], self.k[order] * sc[:, None], self.err[order] * sc


def _initial_panels(a: float, b: float, ratio: float) -> np.ndarray:
    if a == 0.0:
        depth = int(math.ceil(math.log(1.0 / _ORIGIN_DEPTH) / math.log(ratio)))
        pts = b * ratio ** -np.arange(depth, -1, -1, dtype=float)
        return np.concatenate(([0.0], pts[:-1], [b]))
    if b / a > 2.0 * ratio:
        n = int(math.floor(math.log(b / a) / math.log(ratio)))
        pts = a * ratio ** np.arange(0, n + 1, dtype=float)
        if b / pts[-1] < math.sqrt(ratio):
            pts = pts[:-1]
        return np.concatenate(([a], pts[1:], [b]))
    return np.array([a, b])


def _evaluate(lo, hi, seg, phi, mult):
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    s = c[:, None] + h[:, None] * NODES[None, :]
    ph = phi(s, seg[:, None])
    if not np.all(np.isfinite(ph)):
        bad = np.argwhere(~np.isfinite(ph))[0]
        raise QuadratureError(float(s[bad[0], bad[1]]))
    m = ph.max(axis=1)
    e = np.exp(ph - m[:, None])
    if mult is None:
        e = e[:, :, None]
    else:
        e = e[:, :, None] * mult(s, seg[:, None])
    k = h[:, None] * np.einsum("pnc,n->pc", e, KRONROD_WEIGHTS)
    g = h[:, None] * np.einsum("pnc,n->pc", e[:, _GAUSS_IDX, :], GAUSS_WEIGHTS)
    err = np.abs(k - g).sum(axis=1)
    return m, k, err


def adaptive(bounds, phi: Callable, cfg: QuadConfig, mult: Callable | None = None) -> _Panels:
    """Globally adaptive GK15 over the segments ``bounds[i] = (a_i, b_i)``.

    ``phi(s, seg)`` returns the exponent, ``mult(s, seg)`` an optional
    ``(..., C)`` array of multipliers; the C integrals of ``exp(phi)*mult``
    share one panel partition.  The loop stops once the summed error is
    within ``max(rel_tol * sum_c |I_c|, abs_tol)`` or no panel may be split.
    """
    los, his, segs = [], [], []
    for i, (a, b) in enumerate(bounds):
        pts = _initial_panels(float(a), float(b), cfg.origin_refinement)
        los.append(pts[:-1])
        his.append(pts[1:])
        segs.append(np.full(len(pts) - 1, i))
    lo = np.concatenate(los)
    hi = np.concatenate(his)
    seg = np.concatenate(segs)
    m, k, err = _evaluate(lo, hi, seg, phi, mult)
    nseg = len(bounds)
    converged = False
    for _ in range(_MAX_ROUNDS):
        M = m.max()
        sc = np.exp(m - M)
        total = np.abs((k * sc[:, None]).sum(axis=0)).sum()
        err_s = err * sc
        tol = max(cfg.rel_tol * total, cfg.abs_tol * math.exp(-M) if M < 700 else 0.0)
        if err_s.sum() <= tol:
            converged = True
            break
        cand = np.nonzero(err_s > tol / len(lo))[0]
        width_ok = (hi[cand] - lo[cand]) > 8.0 * np.finfo(float).eps * np.maximum(
            np.abs(lo[cand]), np.abs(hi[cand]))
        cand = cand[width_ok]
        if cand.size == 0:
            break
        cand = cand[np.argsort(-err_s[cand], kind="stable")]
        counts = np.bincount(seg, minlength=nseg)
        by_seg = np.argsort(seg[cand], kind="stable")
        sorted_seg = seg[cand][by_seg]
        first = np.searchsorted(sorted_seg, sorted_seg, side="left")
        rank = np.empty(cand.size, dtype=int)
        rank[by_seg] = np.arange(cand.size) - first
        cand = cand[rank < cfg.max_panels - counts[seg[cand]]]
        if cand.size == 0:
            break
        mid = 0.5 * (lo[cand] + hi[cand])
        new_lo = np.concatenate((lo[cand], mid))
        new_hi = np.concatenate((mid, hi[cand]))
        new_seg = np.concatenate((seg[cand], seg[cand]))
        nm, nk, nerr = _evaluate(new_lo, new_hi, new_seg, phi, mult)
        keep = np.ones(len(lo), dtype=bool)
        keep[cand] = False
        lo = np.concatenate((lo[keep], new_lo))
        hi = np.concatenate((hi[keep], new_hi))
        seg = np.concatenate((seg[keep], new_seg))
        m = np.concatenate((m[keep], nm))
        k = np.concatenate((k[keep], nk))
        err = np.concatenate((err[keep], nerr))
    return _Panels(lo, hi, seg, m, k, err, converged)


def _local_values(f: GridFn, s, seg):
    """``v(s)`` from the node on the left of each point's segment."""
    x0 = f.x[seg]
    return f.v[seg] + f.slopes[seg] * (s - x0)


def exponent(f: GridFn, W: WeightSpec, N: int):
    """Vectorized exponent ``phi(s, seg)`` for the panel engine."""
    N = _check_N(N)
    if W.is_zero:
        return lambda s, seg: np.zeros(np.broadcast(s, seg).shape)

    def phi(s, seg):
        v = _local_values(f, s, seg)
        av = np.abs(v)
        r = av * (av / s) ** (N - 1)
        return _weight_from_log(W, 1.0 - np.log(s)) * r

    return phi


def _segments(f: GridFn):
    return list(zip(f.x[:-1], f.x[1:]))


def integrate_exp(f: GridFn, W: WeightSpec, N: int, cfg: QuadConfig | None = None) -> QuadResult:
    """``int_0^1 exp(W(s) |v(s)|^N / s^(N-1)) ds`` for a piecewise-linear ``v``.

    ``value`` may be ``inf`` when the integral exceeds double range;
    ``log_value`` stays finite in that case.
    """
    cfg = cfg or QuadConfig()
    panels = adaptive(_segments(f), exponent(f, W, N), cfg)
    M = panels.shift()
    _, k, err = panels.scaled(M)
    scaled = math.fsum(k[:, 0])
    scaled_err = math.fsum(err)
    log_value = M + math.log(scaled)
    if M < 700.0:
        value, error = scaled * math.exp(M), scaled_err * math.exp(M)
    else:
        value = math.exp(log_value) if log_value < 709.0 else math.inf
        error = scaled_err * value / scaled
    return QuadResult(
        value=value,
        error_estimate=error,
        panels_used=len(panels.lo),
        converged=panels.converged,
        log_value=log_value,
    )
