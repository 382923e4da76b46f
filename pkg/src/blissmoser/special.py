"""Log-Gamma, harmonic numbers and the Bliss embedding constants.

The Bliss constant for exponent ``k > 1`` is

    C_{N,k} = 1/((N-1)k) * [ (k-1) G(Nk/(k-1)) / (G(1/(k-1)) G((Nk-1)/(k-1))) ]^(k-1)

whose Gamma factors overflow long before the bracket does.  With
``m = k - 1`` the bracket's logarithm splits as

    sum_{i=1}^{N-1} log1p(1 / (i*m + N - 1))
      + lg1p(N/m) - lg1p(1/m) - lg1p((N-1)/m),      lg1p(x) = log G(1 + x)

and every piece is O(1/m), so multiplying by ``m`` loses nothing even for
``k`` around 1e9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

__all__ = [
    "log_gamma",
    "log_gamma1p",
    "harmonic",
    "bliss_log_constant",
    "bliss_constant",
    "hardy_constant",
    "bliss_limit",
    "carleson_chang_threshold",
    "BlissConstantRow",
    "bliss_table",
]

_SERIES_CUTOFF = 0.2
# (-1)^k zeta(k)/k for k = 2..40; 0.2^40 is far below double resolution
_K = np.arange(2, 41)
_LG1P_COEF = (-1.0) ** _K * sp.zeta(_K.astype(float)) / _K


def log_gamma(x):
    """Natural log of Gamma for ``x > 0`` (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0.0)):
        raise ValueError("log_gamma is defined here for positive arguments only")
    out = sp.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def log_gamma1p(x):
    """``log Gamma(1 + x)`` accurate to full relative precision as x -> 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > -1.0)):
        raise ValueError("log_gamma1p needs x > -1")
    small = np.abs(arr) < _SERIES_CUTOFF
    out = np.empty_like(arr)
    xs = arr[small]
    if xs.size:
        # Horner on x * (-euler_gamma + sum_k c_k x^(k-1))
        acc = np.zeros_like(xs)
        for c in _LG1P_COEF[::-1]:
            acc = acc * xs + c
        out[small] = xs * (-np.euler_gamma + xs * acc)
    out[~small] = sp.gammaln(1.0 + arr[~small])
    return float(out) if out.ndim == 0 else out


def harmonic(n: int) -> float:
    """``1 + 1/2 + ... + 1/n``; 0 for ``n = 0``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return math.fsum(1.0 / i for i in range(1, n + 1))


def _check_N(N) -> int:
    if int(N) != N or N < 2:
        raise ValueError(f"N must be ≥ 2 (an integer), got {N}")
    return int(N)


def hardy_constant(N: int) -> float:
    """Sharp constant ``(N/(N-1))^N`` of the Hardy inequality (the k = 1 case)."""
    N = _check_N(N)
    return (N / (N - 1)) ** N


def bliss_log_constant(N: int, k):
    """``log C_{N,k}`` for real ``k >= 1`` (scalar or array)."""
    N = _check_N(N)
    k_arr = np.asarray(k, dtype=float)
    if np.any(~(k_arr >= 1.0)) or np.any(~np.isfinite(k_arr)):
        raise ValueError("Bliss exponent k must be finite and >= 1")
    out = np.full(k_arr.shape, N * math.log(N / (N - 1)))
    gt = k_arr > 1.0
    if np.any(gt):
        kk = k_arr[gt]
        m = kk - 1.0
        bracket = (log_gamma1p(N / m) - log_gamma1p(1.0 / m)
                   - log_gamma1p((N - 1) / m))
        for i in range(1, N):
            bracket = bracket + np.log1p(1.0 / (i * m + (N - 1)))
        out[gt] = m * bracket - np.log((N - 1) * kk)
    return float(out) if out.ndim == 0 else out


def bliss_constant(N: int, k):
    """Sharp Bliss constant ``C_{N,k}``; ``k = 1`` gives the Hardy constant."""
    lc = bliss_log_constant(N, k)
    if np.any(lc > 709.0):
        raise OverflowError(f"C_(N,k) overflows double range for N={N}, k={k}")
    out = np.exp(lc)
    return float(out) if np.ndim(out) == 0 else out


def bliss_limit(N: int) -> float:
    """``lim_{k->inf} k C_{N,k} = exp(H_{N-1}) / (N-1)``."""
    N = _check_N(N)
    return math.exp(harmonic(N - 1)) / (N - 1)


def carleson_chang_threshold(N: int) -> float:
    """Energy threshold ``1 + exp(1 + 1/2 + ... + 1/(N-1))``."""
    N = _check_N(N)
    return 1.0 + math.exp(harmonic(N - 1))


@dataclass(frozen=True)
class BlissConstantRow:
    N: int
    k: float
    c_value: float
    k_times_c: float
    limit: float


def bliss_table(N: int, ks) -> list[BlissConstantRow]:
    limit = bliss_limit(N)
    rows = []
    for k in ks:
        c = bliss_constant(N, float(k))
        rows.append(BlissConstantRow(N=int(N), k=float(k), c_value=c,
                                     k_times_c=float(k) * c, limit=limit))
    return rows
