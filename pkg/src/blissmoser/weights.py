"""Exponent weights ``W(s) = beta*log(e/s) + gamma*log log(e/s) + h(1/s)``.

The three functionals of interest are the rows

    I_beta   -> (beta, 0, none)
    J_gamma  -> (1, gamma, none)
    J_{1,h}  -> (1, 1, triple_log),   h(1/s) = log log log(e^e / s)

Everything is written in terms of ``L = log(e/s) = 1 - log s >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PERTURBATIONS",
    "WeightSpec",
    "weight_eval",
    "i_beta_spec",
    "j_gamma_spec",
    "j1h_spec",
    "triple_log",
]

PERTURBATIONS = ("none", "triple_log")


@dataclass(frozen=True)
class WeightSpec:
    beta: float = 1.0
    gamma: float = 0.0
    perturbation: str = "none"

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta >= 0.0):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta}")
        if not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma}")
        if self.perturbation not in PERTURBATIONS:
            raise ValueError(
                f"unknown perturbation {self.perturbation!r}; choose from {PERTURBATIONS}"
            )

    @property
    def is_zero(self) -> bool:
        return self.beta == 0.0 and self.gamma == 0.0 and self.perturbation == "none"

    def label(self) -> str:
        if self.perturbation == "triple_log":
            return f"J_1h(beta={self.beta:g}, gamma={self.gamma:g})"
        if self.gamma == 0.0:
            return f"I_beta(beta={self.beta:g})"
        return f"J_gamma(beta={self.beta:g}, gamma={self.gamma:g})"


def triple_log(L):
    """``h`` as a function of ``L = log(e/s)``: log(log(L + e - 1))."""
    return np.log(np.log(L + (math.e - 1.0)))


def _weight_from_log(W: WeightSpec, L):
    out = W.beta * L
    if W.gamma != 0.0:
        out = out + W.gamma * np.log(L)
    if W.perturbation == "triple_log":
        out = out + triple_log(L)
    return out


def weight_eval(W: WeightSpec, s):
    """``W(s)`` for ``s`` (scalar or array) in (0, 1]."""
    arr = np.asarray(s, dtype=float)
    if np.any(~(arr > 0.0)) or np.any(arr > 1.0):
        raise ValueError("weights are evaluated on (0, 1] only")
    out = _weight_from_log(W, 1.0 - np.log(arr))
    return float(out) if out.ndim == 0 else out


def i_beta_spec(beta: float) -> WeightSpec:
    return WeightSpec(beta=float(beta), gamma=0.0)


def j_gamma_spec(gamma: float) -> WeightSpec:
    return WeightSpec(beta=1.0, gamma=float(gamma))


def j1h_spec() -> WeightSpec:
    return WeightSpec(beta=1.0, gamma=1.0, perturbation="triple_log")
