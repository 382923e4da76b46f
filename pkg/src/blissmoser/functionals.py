"""The functionals I_beta, J_gamma, J_{1,h}, their slope gradients, and
closed-form comparison rates along the infinitesimal Moser sequence."""

from __future__ import annotations

import math

import numpy as np

from .gridfn import GridFn, _check_N
from .quad import QuadConfig, QuadResult, adaptive, exponent, integrate_exp, _local_values
from .weights import WeightSpec, _weight_from_log, i_beta_spec, j1h_spec, j_gamma_spec

__all__ = [
    "eval_functional",
    "I_beta",
    "J_gamma",
    "J_1h",
    "grad_slopes",
    "prop24_lower_bound",
    "gamma_growth_model",
]


def eval_functional(f: GridFn, W: WeightSpec, N: int, cfg: QuadConfig | None = None) -> QuadResult:
    """``int_0^1 exp(W(s) |f(s)|^N / s^(N-1)) ds``."""
    return integrate_exp(f, W, N, cfg)


def I_beta(f: GridFn, beta: float, N: int, cfg: QuadConfig | None = None) -> float:
    return eval_functional(f, i_beta_spec(beta), N, cfg).value


def J_gamma(f: GridFn, gamma: float, N: int, cfg: QuadConfig | None = None) -> float:
    return eval_functional(f, j_gamma_spec(gamma), N, cfg).value


def J_1h(f: GridFn, N: int, cfg: QuadConfig | None = None) -> float:
    return eval_functional(f, j1h_spec(), N, cfg).value


def grad_slopes(f: GridFn, W: WeightSpec, N: int, cfg: QuadConfig | None = None) -> np.ndarray:
    """Derivative of the functional with respect to each segment slope.

    With ``q(s) = exp(phi) * W(s) * N * sign(v) * (|v|/s)^(N-1)`` and
    ``dv(s)/dg_i = clip(s - x_i, 0, x_{i+1} - x_i)``, component ``i`` is

        int_{seg i} q(s) (s - x_i) ds + (x_{i+1} - x_i) * sum_{k > i} int_{seg k} q,

    so two panel integrals per segment suffice.
    """
    N = _check_N(N)
    cfg = cfg or QuadConfig()
    nseg = f.n_segments
    if W.is_zero or not np.any(f.v != 0.0):
        return np.zeros(nseg)
    phi = exponent(f, W, N)

    def mult(s, seg):
        v = _local_values(f, s, seg)
        q = _weight_from_log(W, 1.0 - np.log(s)) * N * np.sign(v) * (np.abs(v) / s) ** (N - 1)
        return np.stack((q, q * (s - f.x[seg])), axis=-1)

    panels = adaptive(list(zip(f.x[:-1], f.x[1:])), phi, cfg, mult)
    M = panels.shift()
    seg, k, _ = panels.scaled(M)
    Q = np.zeros(nseg)
    R = np.zeros(nseg)
    np.add.at(Q, seg, k[:, 0])
    np.add.at(R, seg, k[:, 1])
    tail = np.concatenate((np.cumsum(Q[::-1])[::-1][1:], [0.0]))
    grad = R + f.widths * tail
    with np.errstate(over="ignore"):
        return grad * math.exp(min(M, 709.0)) if M < 709.0 else grad * np.inf


def prop24_lower_bound(j: float, delta: float) -> float:
    """Closed-form lower bound for ``I_{1+delta}(w_j)`` (any N >= 2).

    ``e^(1+d)/(1+d) * j^d / log(ej) - 1/(j (1+d) log(ej))``, obtained by
    keeping only ``[0, 1/j]`` and bounding ``log(e/s) >= log(ej)`` there.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    if delta <= 0:
        raise ValueError("delta must be positive")
    b = 1.0 + delta
    lej = math.log(math.e * j)
    return math.exp(b) / b * j ** delta / lej - 1.0 / (j * b * lej)


def gamma_growth_model(gamma: float, j: float) -> float:
    """Divergence rate ``e (log(ej))^(gamma - 1)`` of ``J_gamma(w_j)``, gamma > 1."""
    if gamma <= 1:
        raise ValueError("the growth model applies to gamma > 1 only")
    if j < 1:
        raise ValueError("j must be >= 1")
    return math.e * math.log(math.e * j) ** (gamma - 1.0)
