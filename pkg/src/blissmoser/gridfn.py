"""Piecewise-linear functions on [0, 1] pinned at the origin.

A :class:`GridFn` is the discrete stand-in for an element of the energy
sphere ``E_N = {v : v(0) = 0, int_0^1 |v'|^N = 1}``.  Everything that is
piecewise polynomial in ``v`` (energy, ratio maximum, the pointwise bound
``|v(s)| <= s^{(N-1)/N}``) is computed exactly from the nodes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GridFn",
    "MaxRatioResult",
    "make_grid_fn",
    "from_slopes",
    "energy",
    "normalize",
    "eval_fn",
    "ratio",
    "max_ratio",
    "basic_bound_check",
    "geometric_grid",
    "random_monotone",
    "dumps",
    "loads",
]

# relative slack under which two ratio candidates count as a tie
_TIE_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class GridFn:
    """Validated piecewise-linear function; build with :func:`make_grid_fn`."""

    x: np.ndarray
    v: np.ndarray
    slopes: np.ndarray

    @property
    def nodes(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.x, self.v)]

    @property
    def n_segments(self) -> int:
        return len(self.x) - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.x)

    def is_monotone(self) -> bool:
        return bool(np.all(self.slopes >= 0.0))

    def __eq__(self, other):
        if not isinstance(other, GridFn):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.v, other.v)

    def __repr__(self):
        return f"GridFn(n_segments={self.n_segments}, nodes={self.nodes!r})"


@dataclass(frozen=True)
class MaxRatioResult:
    """Location ``a`` and value ``1 - delta`` of ``max |v(s)|^N / s^(N-1)``."""

    a: float
    max_value: float
    delta: float
    degenerate: bool = False


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _build(x: np.ndarray, v: np.ndarray) -> GridFn:
    if x.ndim != 1 or v.shape != x.shape:
        raise ValueError("abscissas and values must be 1-d arrays of equal length")
    if len(x) < 2:
        raise ValueError("a GridFn needs at least 2 nodes")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
        raise ValueError("node coordinates must be finite")
    if x[0] != 0.0 or v[0] != 0.0:
        raise ValueError(f"first node must be (0, 0), got ({x[0]}, {v[0]})")
    if x[-1] != 1.0:
        raise ValueError(f"last abscissa must be 1, got {x[-1]}")
    dx = np.diff(x)
    if np.any(dx <= 0.0):
        i = int(np.argmax(dx <= 0.0))
        raise ValueError(
            f"abscissas must be strictly increasing (x[{i}]={x[i]}, x[{i + 1}]={x[i + 1]})"
        )
    slopes = np.diff(v) / dx
    return GridFn(_frozen(x), _frozen(v), _frozen(slopes))


def make_grid_fn(nodes: Iterable[Sequence[float]]) -> GridFn:
    """Validate ``[(x0, v0), (x1, v1), ...]`` and return a :class:`GridFn`.

    Raises ``ValueError`` unless the nodes start at ``(0, 0)``, end at
    abscissa 1, are finite and strictly increasing in ``x``.
    """
    pts = np.asarray([tuple(p) for p in nodes], dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("nodes must be a sequence of (abscissa, value) pairs")
    return _build(pts[:, 0].copy(), pts[:, 1].copy())


def from_slopes(x, slopes) -> GridFn:
    """GridFn on abscissas ``x`` whose segment derivatives are ``slopes``."""
    x = np.asarray(x, dtype=float)
    slopes = np.asarray(slopes, dtype=float)
    if slopes.shape != (len(x) - 1,):
        raise ValueError("need exactly one slope per segment")
    v = np.concatenate(([0.0], np.cumsum(slopes * np.diff(x))))
    return _build(x.copy(), v)


def _check_N(N) -> int:
    if int(N) != N or N < 2:
        raise ValueError(f"N must be ≥ 2 (an integer), got {N}")
    return int(N)


def energy(f: GridFn, N: int) -> float:
    """``int_0^1 |v'|^N``, exact for piecewise-linear ``v``."""
    N = _check_N(N)
    return math.fsum(np.abs(f.slopes) ** N * f.widths)


def normalize(f: GridFn, N: int) -> GridFn:
    """Scale ``f`` onto the energy sphere."""
    e = energy(f, N)
    if e <= 0.0:
        raise ValueError("cannot normalize a function with zero energy")
    c = e ** (-1.0 / N)
    return _build(f.x.copy(), f.v * c)


def eval_fn(f: GridFn, s):
    """Linear interpolation of ``f`` at ``s`` (scalar or array) in [0, 1]."""
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise ValueError("evaluation points must lie in [0, 1]")
    out = np.interp(arr, f.x, f.v)
    return float(out) if out.ndim == 0 else out


def ratio(v, s, N: int):
    """``|v|^N / s^(N-1)`` written to stay finite for tiny ``s``."""
    av = np.abs(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = av * (av / s) ** (N - 1)
    return np.where(av == 0.0, 0.0, r)


def max_ratio(f: GridFn, N: int) -> MaxRatioResult:
    """Global maximum of ``|v(s)|^N / s^(N-1)`` over (0, 1].

    On a segment where ``v(s) = alpha + beta*s`` the ratio has a single
    interior critical point ``s* = (N-1) alpha / beta``; the maximum is
    therefore attained at a node or at one of those points.  Near-ties
    resolve to the smallest abscissa.  The zero function yields
    ``a = 1, max_value = 0`` with ``degenerate=True``.
    """
    N = _check_N(N)
    x, v, g = f.x, f.v, f.slopes
    if not np.any(v != 0.0):
        return MaxRatioResult(a=1.0, max_value=0.0, delta=1.0, degenerate=True)

    cand_s = [x[1:]]
    cand_v = [v[1:]]
    alpha = v[:-1] - g * x[:-1]
    nz = g != 0.0
    for point in ((N - 1) * alpha, -alpha):
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(nz, point / np.where(nz, g, 1.0), np.nan)
        inside = nz & (s > x[:-1]) & (s < x[1:])
        if np.any(inside):
            idx = np.nonzero(inside)[0]
            cand_s.append(s[idx])
            cand_v.append(v[idx] + g[idx] * (s[idx] - x[idx]))
    cs = np.concatenate(cand_s)
    cv = np.concatenate(cand_v)
    order = np.argsort(cs, kind="stable")
    cs, cv = cs[order], cv[order]
    r = ratio(cv, cs, N)
    top = r.max()
    i = int(np.argmax(r >= top * (1.0 - _TIE_RTOL)))
    return MaxRatioResult(a=float(cs[i]), max_value=float(r[i]), delta=1.0 - float(r[i]))


def basic_bound_check(f: GridFn, N: int) -> float:
    """Worst signed violation of ``|v(s)| <= s^((N-1)/N) * energy^(1/N)``.

    ``|v(s)| - c*s^p`` is convex on every segment (``|v|`` is the modulus
    of an affine map, ``s^p`` is concave), so its maximum over (0, 1] sits
    at a node; the node scan is exact.  Nonpositive on all of ``E_N``.
    """
    N = _check_N(N)
    c = energy(f, N) ** (1.0 / N)
    s = f.x[1:]
    return float(np.max(np.abs(f.v[1:]) - s ** ((N - 1) / N) * c))


def geometric_grid(segments: int, finest: float = 1e-9) -> np.ndarray:
    """Abscissas ``0, finest, ..., 1`` geometric on ``[finest, 1]``."""
    if segments < 1:
        raise ValueError("segments must be >= 1")
    if segments == 1:
        return np.array([0.0, 1.0])
    if not 0.0 < finest < 1.0:
        raise ValueError("finest must lie in (0, 1)")
    x = np.concatenate(([0.0], np.geomspace(finest, 1.0, segments)))
    x[-1] = 1.0
    return x


def random_monotone(seed, segments: int, N: int, geometric: bool = False,
                    finest: float | None = None) -> GridFn:
    """Random nondecreasing member of ``E_N``; deterministic per seed.

    Slopes are lognormal.  With ``geometric=True`` the abscissas cluster
    geometrically toward the origin (finest cell drawn from
    ``[1e-8, 1e-1]`` unless ``finest`` is given); otherwise they are sorted
    uniform draws.
    """
    N = _check_N(N)
    if segments < 1:
        raise ValueError("segments must be >= 1")
    rng = np.random.default_rng(seed)
    if geometric and segments > 1:
        if finest is None:
            finest = 10.0 ** -rng.uniform(1.0, 8.0)
        x = geometric_grid(segments, finest)
    else:
        while True:
            inner = np.sort(rng.uniform(0.0, 1.0, segments - 1))
            x = np.concatenate(([0.0], inner, [1.0]))
            if np.all(np.diff(x) > 0.0):
                break
    slopes = rng.lognormal(0.0, 1.0, segments)
    return normalize(from_slopes(x, slopes), N)


def dumps(f: GridFn) -> str:
    """JSON text ``{"nodes": [[x, v], ...]}``; floats round-trip exactly."""
    return json.dumps({"nodes": [[a, b] for a, b in f.nodes]})


def loads(text: str) -> GridFn:
    try:
        data = json.loads(text)
        nodes = data["nodes"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ValueError(f"not a GridFn document: {exc}") from exc
    return make_grid_fn(nodes)
