"""Concentrating families, asymptotic sweeps, and approximate-Moser checks.

``moser_w(j, N)`` is the broken line rising with slope ``j^(1/N)`` on
``[0, 1/j]`` and flat afterwards: energy 1, sup norm ``j^(-(N-1)/N)`` -> 0,
yet its derivative concentrates at the origin.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .functionals import eval_functional, gamma_growth_model, prop24_lower_bound
from .gridfn import GridFn, _build, _check_N, energy, max_ratio
from .quad import QuadConfig, QuadratureError
from .weights import WeightSpec

__all__ = [
    "moser_w",
    "broken_line",
    "parse_schedule",
    "geometric_schedule",
    "SweepRow",
    "SweepTable",
    "sweep",
    "LemmaReport",
    "diagnostics",
    "SAFE_J_MAX",
]

# beyond this the sweep still runs but the row is flagged
SAFE_J_MAX = 1e8


def broken_line(a: float, N: int) -> GridFn:
    """``a^(-1/N) s`` on ``[0, a]``, constant ``a^((N-1)/N)`` on ``[a, 1]``."""
    N = _check_N(N)
    if not 0.0 < a <= 1.0:
        raise ValueError(f"kink abscissa must lie in (0, 1], got {a}")
    top = a ** ((N - 1) / N)
    if a == 1.0:
        return _build(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    return _build(np.array([0.0, a, 1.0]), np.array([0.0, top, top]))


def moser_w(j: float, N: int) -> GridFn:
    """Infinitesimal Moser function ``w_j`` (kink at ``1/j``)."""
    if not j > 1.0:
        raise ValueError(f"j must exceed 1, got {j}")
    N = _check_N(N)
    top = j ** (-(N - 1) / N)
    return _build(np.array([0.0, 1.0 / j, 1.0]), np.array([0.0, top, top]))


def geometric_schedule(start: float, stop: float, ratio: float) -> list[float]:
    if not (start > 0 and stop >= start and ratio > 1):
        raise ValueError("need 0 < start <= stop and ratio > 1")
    out = []
    i = 0
    while True:
        j = start * ratio ** i
        if j > stop * (1.0 + 1e-12):
            break
        out.append(j)
        i += 1
    return out


def parse_schedule(text: str) -> list[float]:
    """``"1e2:1e8:x10"`` -> ``[1e2, 1e3, ..., 1e8]``; a lone number or a
    comma list is taken literally."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3 or not parts[2].startswith("x"):
            raise ValueError(f"bad geometric range {text!r}; expected start:stop:xRATIO")
        return geometric_schedule(float(parts[0]), float(parts[1]), float(parts[2][1:]))
    return [float(t) for t in text.split(",") if t.strip()]


@dataclass(frozen=True)
class SweepRow:
    j: float
    value: float
    converged: bool
    model: float | None = None
    error_estimate: float = math.nan
    flagged: bool = False


@dataclass
class SweepTable:
    N: int
    weight: WeightSpec
    cfg: QuadConfig
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def js(self) -> np.ndarray:
        return np.array([r.j for r in self.rows])

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("j,value,converged,model\n")
        for r in self.rows:
            model = "" if r.model is None else f"{r.model:.17g}"
            buf.write(f"{r.j:.17g},{r.value:.17g},{'true' if r.converged else 'false'},{model}\n")
        return buf.getvalue()


def _model(W: WeightSpec, j: float) -> float | None:
    if W.perturbation != "none":
        return None
    if W.gamma > 1.0 and W.beta == 1.0:
        return gamma_growth_model(W.gamma, j)
    if W.gamma == 0.0 and W.beta > 1.0:
        return prop24_lower_bound(j, W.beta - 1.0)
    return None


def sweep(W: WeightSpec, N: int, j_schedule, cfg: QuadConfig | None = None) -> SweepTable:
    """Evaluate the functional along ``w_j`` for each ``j`` of the schedule.

    The model column holds ``e (log ej)^(gamma-1)`` for ``J_gamma`` with
    ``gamma > 1`` and the closed-form lower bound for ``I_beta`` with
    ``beta > 1``.  A row whose quadrature fails is kept with value NaN.
    """
    cfg = cfg or QuadConfig()
    js = [float(j) for j in j_schedule]
    if any(b <= a for a, b in zip(js, js[1:])):
        raise ValueError("j schedule must be strictly increasing")
    table = SweepTable(N=_check_N(N), weight=W, cfg=cfg)
    for j in js:
        flagged = j > SAFE_J_MAX
        if flagged:
            warnings.warn(f"j={j:g} exceeds {SAFE_J_MAX:g}; double-precision accuracy not vetted",
                          stacklevel=2)
        try:
            res = eval_functional(moser_w(j, N), W, N, cfg)
            row = SweepRow(j, res.value, res.converged, _model(W, j), res.error_estimate, flagged)
        except QuadratureError:
            row = SweepRow(j, math.nan, False, _model(W, j), math.nan, True)
        table.rows.append(row)
    return table


@dataclass(frozen=True)
class LemmaReport:
    """Approximate-Moser diagnostics; a margin ``<= 0`` means the bound holds.

    ``lemma34_margin`` is ``None`` when ``delta >= 1/2``.
    """

    a: float
    delta: float
    defect: float
    lemma31_margin: float
    lemma32_margin: float
    lemma33_margin: float
    lemma34_margin: float | None


def _defect(f: GridFn, N: int, a: float, A: float) -> float:
    x, g = f.x, f.slopes
    left = np.clip(np.minimum(x[1:], a) - x[:-1], 0.0, None)
    right = np.clip(x[1:] - np.maximum(x[:-1], a), 0.0, None)
    inner = math.fsum((g - A) ** 2 * left)
    outer = math.fsum(np.abs(g) ** N * right)
    return A ** (N - 2) * inner + outer


def diagnostics(f: GridFn, N: int, samples: int = 200) -> LemmaReport:
    """Check how close ``f`` is to a Moser broken line.

    With ``1 - delta = max v^N/s^(N-1)`` attained at ``a`` and ``A = v(a)/a``:

    * defect ``A^(N-2) int_0^a |v' - A|^2 + int_a^1 |v'|^N`` (exact) vs ``delta``;
    * ``v(s) <= v(a) + (s-a)^(1-1/N) delta^(1/N)`` on ``[a, 1]``;
    * ``v(s) <= s A + (a-s)^(1/2) delta^(1/2) A^(-(N-2)/2)`` on ``[0, a]``;
    * ``v(s) <= s a^(-1/N) + s^((N-1)/N) (2 delta)^(1/N)`` on ``[0, a]``
      when ``delta < 1/2``.

    Pointwise bounds are sampled at ``samples`` uniform points per side plus
    every node.  Input must be nonzero with nonnegative slopes.
    """
    N = _check_N(N)
    if not f.is_monotone():
        raise ValueError("diagnostics are defined for nondecreasing functions only")
    if not np.any(f.v != 0.0):
        raise ValueError("diagnostics need a nonzero function")
    if abs(energy(f, N) - 1.0) > 1e-9:
        raise ValueError("diagnostics need a member of E_N (energy 1)")
    mr = max_ratio(f, N)
    a = mr.a
    d = max(mr.delta, 0.0)
    va = float(np.interp(a, f.x, f.v))
    A = va / a
    defect = _defect(f, N, a, A)

    right = np.unique(np.concatenate((np.linspace(a, 1.0, samples), f.x[f.x >= a])))
    left = np.unique(np.concatenate((np.linspace(0.0, a, samples), f.x[f.x <= a])))
    vr = np.interp(right, f.x, f.v)
    vl = np.interp(left, f.x, f.v)

    m32 = np.max(vr - va - (right - a) ** (1.0 - 1.0 / N) * d ** (1.0 / N))
    m33 = np.max(vl - left * A - np.sqrt(np.clip(a - left, 0.0, None) * d) * A ** (-(N - 2) / 2))
    m34 = None
    if d < 0.5:
        m34 = float(np.max(vl - left * a ** (-1.0 / N) - left ** ((N - 1) / N) * (2 * d) ** (1.0 / N)))
    return LemmaReport(a=a, delta=mr.delta, defect=defect, lemma31_margin=defect - d,
                       lemma32_margin=float(m32), lemma33_margin=float(m33), lemma34_margin=m34)
