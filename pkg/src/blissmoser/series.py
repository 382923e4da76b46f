"""Taylor-series upper bound for ``sup_{E_N} I_beta`` when ``beta < 1``.

Expanding the exponential and applying the Bliss inequality termwise gives

    I_beta(v) <= 1 + sum_{k>=1} e * k^(k-1)/k! * (beta/e)^k * k C_{N,k},

using ``max_{s>0} s^(1/k) log(e/s) = k e^(1/k - 1)`` to pull the weight out.
Consecutive terms have ratio ``(beta/e)(1 + 1/k)^(k-1) * ((k+1) C_{N,k+1}) / (k C_{N,k})``,
which tends to ``beta``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .special import bliss_log_constant

__all__ = [
    "weight_power_max",
    "log_series_term",
    "series_term",
    "term_ratio",
    "SeriesBound",
    "series_bound",
    "divergence_witness",
    "series_csv",
]

_CHUNK = 4096
_RATIO_WINDOW = 64
_SAFETY = 0.05


def weight_power_max(k: float) -> float:
    """``max_{s>0} s^(1/k) log(e/s)``, attained at ``s = e^(1-k)``."""
    if k <= 0:
        raise ValueError("k must be positive")
    return k * math.exp(1.0 / k - 1.0)


def log_series_term(N: int, beta: float, k):
    """Log of the k-th series term (``-inf`` when ``beta == 0``)."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 1):
        raise ValueError("terms are indexed from k = 1")
    with np.errstate(divide="ignore"):
        lb = math.log(beta) if beta > 0 else -math.inf
    out = (1.0 + (k_arr - 1.0) * np.log(k_arr) - sp.gammaln(k_arr + 1.0)
           + k_arr * (lb - 1.0) + np.log(k_arr) + bliss_log_constant(N, k_arr))
    return float(out) if out.ndim == 0 else out


def series_term(N: int, beta: float, k):
    """``e * k^(k-1)/k! * (beta/e)^k * k C_{N,k}``; exactly 0 for ``beta = 0``."""
    if beta == 0:
        z = np.zeros(np.shape(k))
        return 0.0 if z.ndim == 0 else z
    return np.exp(log_series_term(N, beta, k))


def term_ratio(N: int, beta: float, k):
    """``term_{k+1} / term_k`` computed in log space."""
    k_arr = np.asarray(k, dtype=float)
    out = np.exp(log_series_term(N, beta, k_arr + 1.0) - log_series_term(N, beta, k_arr))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SeriesBound:
    value: float
    terms_used: int
    tail_bound: float
    tail_ratio: float
    converged: bool


def _tail_ratio(beta: float, observed: float) -> float:
    r = max(beta, observed)
    return r + min(_SAFETY * r, 0.5 * (1.0 - r))


def series_bound(N: int, beta: float, max_terms: int = 100_000,
                 tail_tol: float = 1e-14) -> SeriesBound:
    """``1 + sum_{k<=K} term_k`` with ``K`` the first index whose tail passes
    ``term_K * r/(1 - r) <= tail_tol``.

    ``r`` is the larger of ``beta`` and the largest consecutive-term ratio
    seen over the last 64 terms, inflated by 5% (capped halfway to 1).
    ``converged`` is False when ``max_terms`` runs out first.
    """
    if not 0.0 <= beta < 1.0:
        raise ValueError("the Taylor series bound needs 0 <= beta < 1; it diverges beyond")
    if beta == 0.0:
        return SeriesBound(1.0, 0, 0.0, 0.0, True)
    pieces = []
    start = 1
    while start <= max_terms:
        stop = min(start + _CHUNK, max_terms + 1)
        ks = np.arange(start, stop + 1, dtype=float)
        logs = log_series_term(N, beta, ks)
        terms = np.exp(logs[:-1])
        ratios = np.exp(np.diff(logs))
        prev = pieces[-1][1] if pieces else np.empty(0)
        all_ratios = np.concatenate((prev[-_RATIO_WINDOW:], ratios))
        window = np.lib.stride_tricks.sliding_window_view(
            np.concatenate((np.full(_RATIO_WINDOW - 1, -np.inf), all_ratios)), _RATIO_WINDOW
        ).max(axis=1)[-len(ratios):]
        r = np.maximum(beta, window)
        r = r + np.minimum(_SAFETY * r, 0.5 * (1.0 - r))
        tails = terms * r / (1.0 - r)
        pieces.append((terms, ratios))
        hit = np.nonzero(tails <= tail_tol)[0]
        if hit.size:
            i = int(hit[0])
            all_terms = np.concatenate([p[0] for p in pieces[:-1]] + [terms[: i + 1]])
            return SeriesBound(1.0 + math.fsum(all_terms), len(all_terms),
                               float(tails[i]), float(r[i]), True)
        start = stop
    all_terms = np.concatenate([p[0] for p in pieces])
    last = all_terms[-1]
    r = _tail_ratio(beta, float(pieces[-1][1][-_RATIO_WINDOW:].max()))
    return SeriesBound(1.0 + math.fsum(all_terms), len(all_terms), last * r / (1.0 - r), r, False)


def divergence_witness(N: int, beta: float, K: int) -> np.ndarray:
    """Partial sums ``1 + sum_{k<=n} term_k`` for ``n = 1..K`` at ``beta >= 1``."""
    if beta < 1.0:
        raise ValueError("use series_bound for beta < 1")
    ks = np.arange(1, K + 1, dtype=float)
    return 1.0 + np.cumsum(series_term(N, beta, ks))


def series_csv(N: int, beta: float, K: int) -> str:
    """Rows ``k,term,partial_sum,ratio`` for ``k = 1..K``."""
    ks = np.arange(1, K + 1, dtype=float)
    terms = series_term(N, beta, ks)
    partial = 1.0 + np.cumsum(terms)
    ratios = term_ratio(N, beta, ks) if beta > 0 else np.zeros(K)
    buf = io.StringIO()
    buf.write("k,term,partial_sum,ratio\n")
    for k, t, p, r in zip(ks, terms, partial, ratios):
        buf.write(f"{int(k)},{t:.17g},{p:.17g},{r:.17g}\n")
    return buf.getvalue()
