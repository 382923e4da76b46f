"""Property suites behind ``verify``.

Each suite returns a list of :class:`Check` rows; a check passes when its
violation count is zero.  Corpora are seeded, so reruns are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import special
from .functionals import eval_functional, gamma_growth_model, grad_slopes, prop24_lower_bound
from .gridfn import (GridFn, energy, from_slopes, geometric_grid, make_grid_fn, max_ratio,
                     normalize, random_monotone)
from .optimize import maximize_gridfn, scan_broken_line
from .quad import QuadConfig, adaptive, exponent, _local_values
from .sequences import diagnostics, geometric_schedule, moser_w, sweep
from .series import divergence_witness, series_bound, term_ratio
from .weights import WeightSpec, _weight_from_log, i_beta_spec, j1h_spec, j_gamma_spec

__all__ = [
    "Check",
    "SUITES",
    "lemma_corpus",
    "fd_slopes",
    "run_suite",
    "run",
]

LEMMA_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    violations: int
    detail: str

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _perturbed_broken_line(rng, N: int) -> GridFn:
    a = 10.0 ** -rng.uniform(0.3, 6.0)
    left = np.sort(rng.uniform(0.0, a, rng.integers(0, 6)))
    right = np.sort(rng.uniform(a, 1.0, rng.integers(1, 6)))
    x = np.unique(np.concatenate(([0.0], left, [a], right, [1.0])))
    base = np.where(x[1:] <= a, a ** (-1.0 / N), 0.0)
    sigma = 10.0 ** -rng.uniform(0.0, 3.0)
    slopes = base * rng.lognormal(0.0, sigma, len(base)) + sigma * rng.exponential(1.0, len(base))
    return normalize(from_slopes(x, slopes), N)


def lemma_corpus(N: int, count: int = 1000, seed: int = 0) -> list[GridFn]:
    """Random nondecreasing members of E_N: uniform grids, geometric grids,
    and jittered broken lines (the last keep ``delta`` small)."""
    rng = np.random.default_rng([seed, N])
    out = []
    for i in range(count):
        kind = i % 3
        sub = int(rng.integers(2**62))
        if kind == 0:
            out.append(random_monotone(sub, int(rng.integers(1, 13)), N))
        elif kind == 1:
            out.append(random_monotone(sub, int(rng.integers(4, 41)), N, geometric=True))
        else:
            out.append(_perturbed_broken_line(np.random.default_rng(sub), N))
    return out


def fd_slopes(f: GridFn, W: WeightSpec, N: int, h: float, cfg: QuadConfig | None = None) -> np.ndarray:
    """Central difference ``(F(g + h e_i) - F(g - h e_i)) / 2h`` per slope.

    The difference is integrated as one quantity,
    ``exp(phi_-) expm1(phi_+ - phi_-)``, with ``phi_+ - phi_-`` factored so
    that no cancellation occurs; only the O(h^2) truncation remains.
    """
    cfg = cfg or QuadConfig(rel_tol=1e-12, abs_tol=1e-15)
    out = np.empty(f.n_segments)
    for i in range(f.n_segments):
        gp = f.slopes.copy()
        gm = f.slopes.copy()
        gp[i] += h
        gm[i] -= h
        fp, fm = from_slopes(f.x, gp), from_slopes(f.x, gm)
        lo, width = f.x[i], f.x[i + 1] - f.x[i]

        def mult(s, seg, fp=fp, fm=fm, lo=lo, width=width):
            vp = _local_values(fp, s, seg)
            vm = _local_values(fm, s, seg)
            dv = 2.0 * h * np.clip(s - lo, 0.0, width)
            acc = np.zeros_like(vp)
            for k in range(N):
                acc = acc + vp ** (N - 1 - k) * vm ** k
            dphi = _weight_from_log(W, 1.0 - np.log(s)) * dv * acc / s ** (N - 1)
            return np.expm1(dphi)[..., None] / (2.0 * h)

        panels = adaptive(list(zip(f.x[:-1], f.x[1:])), exponent(fm, W, N), cfg, mult)
        M = panels.shift()
        _, k, _ = panels.scaled(M)
        out[i] = math.fsum(k[:, 0]) * math.exp(M)
    return out


def _lemmas(quick: bool):
    count = 100 if quick else 1000
    checks = []
    for N in (2, 3, 4):
        bad = [0, 0, 0, 0]
        worst = [-math.inf] * 4
        small = 0
        for f in lemma_corpus(N, count):
            rep = diagnostics(f, N)
            margins = [rep.lemma31_margin, rep.lemma32_margin, rep.lemma33_margin,
                       rep.lemma34_margin]
            for idx, m in enumerate(margins):
                if m is None:
                    continue
                if idx == 3:
                    small += 1
                worst[idx] = max(worst[idx], m)
                if m > LEMMA_TOL:
                    bad[idx] += 1
        names = ["defect", "right_profile", "left_profile", "small_delta_profile"]
        for idx, name in enumerate(names):
            extra = f" over {small} small-delta cases" if idx == 3 else ""
            checks.append(Check("lemmas", f"N={N} {name}", bad[idx],
                                f"worst margin {worst[idx]:.3e}{extra}"))
    return checks


def _constants(quick: bool):
    checks = []
    ks = [1e2, 1e3, 1e4, 1e5, 1e6]
    for N in (2, 3):
        lim = special.bliss_limit(N)
        gaps = [abs(k * special.bliss_constant(N, k) - lim) for k in ks]
        bad = int(gaps[-1] > 1e-2) + sum(b >= a for a, b in zip(gaps, gaps[1:]))
        checks.append(Check("constants", f"N={N} kC -> C_N", bad,
                            f"gap at 1e6 {gaps[-1]:.3e}, limit {lim:.15g}"))
    bad = sum(abs(special.bliss_constant(N, 1) - special.hardy_constant(N)) > 1e-13
              * special.hardy_constant(N) for N in range(2, 9))
    checks.append(Check("constants", "k=1 is Hardy", bad, "N = 2..8"))
    return checks


def _strict(vals, sign):
    return sum(sign * (b - a) <= 0 for a, b in zip(vals, vals[1:]))


def _trichotomy(quick: bool):
    js = geometric_schedule(1e2, 1e8, 10.0)
    checks = []
    t05 = sweep(j_gamma_spec(0.5), 2, js).values
    checks.append(Check("trichotomy", "gamma=0.5 strictly decreasing", _strict(t05, -1),
                        f"{t05[0]:.6g} -> {t05[-1]:.6g}"))
    checks.append(Check("trichotomy", "gamma=0.5 final within 0.05 of 1",
                        int(abs(t05[-1] - 1.0) > 0.05), f"final {t05[-1]:.6g}"))
    t1 = sweep(j_gamma_spec(1.0), 2, js).values
    band = [v for j, v in zip(js, t1) if j >= 1e5]
    floor = math.e + 1.0 - 0.05
    checks.append(Check("trichotomy", "gamma=1 at least e+1-0.05 for j>=1e5",
                        sum(v < floor for v in band), f"min {min(band):.6g}"))
    t15 = sweep(j_gamma_spec(1.5), 2, js).values
    growth = t15[-1] / t15[js.index(1e4)]
    ratios = [v / gamma_growth_model(1.5, j) for j, v in zip(js, t15)]
    checks.append(Check("trichotomy", "gamma=1.5 strictly increasing", _strict(t15, 1),
                        f"{t15[0]:.6g} -> {t15[-1]:.6g}"))
    checks.append(Check("trichotomy", "gamma=1.5 J(1e8)/J(1e4) >= 1.3", int(growth < 1.3),
                        f"ratio {growth:.4f}"))
    checks.append(Check("trichotomy", "gamma=1.5 model ratio in [0.5, 5]",
                        sum(not 0.5 <= r <= 5 for r in ratios),
                        f"range [{min(ratios):.3f}, {max(ratios):.3f}]"))

    i1 = sweep(i_beta_spec(1.0), 2, js).values
    halving = []
    for j in (1e3, 1e4):
        a = eval_functional(moser_w(j, 2), i_beta_spec(1.0), 2).value
        b = eval_functional(moser_w(j * j, 2), i_beta_spec(1.0), 2).value
        halving.append((b - 1.0) / (a - 1.0))
    checks.append(Check("trichotomy", "beta=1 strictly decreasing", _strict(i1, -1),
                        f"{i1[0]:.6g} -> {i1[-1]:.6g}"))
    checks.append(Check("trichotomy", "beta=1 halving ratio in [0.35, 0.65]",
                        sum(not 0.35 <= h <= 0.65 for h in halving),
                        ", ".join(f"{h:.4f}" for h in halving)))
    tight = QuadConfig(rel_tol=1e-9)
    bad = 0
    for j in (1e1, 1e2, 1e3, 1e4):
        v = eval_functional(moser_w(j, 2), i_beta_spec(1.2), 2, tight).value
        bad += v < prop24_lower_bound(j, 0.2)
    checks.append(Check("trichotomy", "beta=1.2 above closed-form bound", bad, "j = 1e1..1e4"))

    h = sweep(j1h_spec(), 2, js).values
    margin = h - t1
    checks.append(Check("trichotomy", "J_1h strictly increasing", _strict(h, 1),
                        f"{h[0]:.6g} -> {h[-1]:.6g}"))
    checks.append(Check("trichotomy", "J_1h exceeds J_1 by a growing margin",
                        int(margin[0] <= 0) + _strict(margin, 1),
                        f"margin {margin[0]:.4g} -> {margin[-1]:.4g}"))
    return checks


def _series(quick: bool):
    checks = []
    per_pair = 20 if quick else 100
    for N in (2, 3):
        for beta in (0.3, 0.6, 0.9):
            sb = series_bound(N, beta)
            r = term_ratio(N, beta, 1e4)
            checks.append(Check("series", f"N={N} beta={beta} tail rule", int(not sb.converged),
                                f"bound {sb.value:.10g} after {sb.terms_used} terms"))
            checks.append(Check("series", f"N={N} beta={beta} ratio at 1e4",
                                int(abs(r - beta) > 1e-3), f"ratio {r:.6g}"))
            rng = np.random.default_rng([7, N, int(beta * 10)])
            bad = 0
            for _ in range(per_pair):
                f = random_monotone(int(rng.integers(2**62)), int(rng.integers(1, 30)), N,
                                    geometric=bool(rng.integers(2)))
                bad += eval_functional(f, i_beta_spec(beta), N).value > sb.value
            checks.append(Check("series", f"N={N} beta={beta} dominates", bad,
                                f"{per_pair} random functions"))
    partial = divergence_witness(2, 1.0, 10_000)
    growth = partial[-1] / partial[99]
    checks.append(Check("series", "beta=1 partial sums: K=1e4 >= 5x K=1e2", int(growth < 5.0),
                        f"{partial[99]:.6g} -> {partial[-1]:.6g} (x{growth:.4f})"))
    return checks


def _gradient(quick: bool):
    count = 10 if quick else 50
    rng = np.random.default_rng(11)
    weights = [i_beta_spec(0.7), i_beta_spec(1.0), j_gamma_spec(1.0), j_gamma_spec(1.5), j1h_spec()]
    bad = 0
    worst = 0.0
    for i in range(count):
        N = int(rng.integers(2, 5))
        f = random_monotone(int(rng.integers(2**62)), int(rng.integers(2, 9)), N,
                            geometric=bool(i % 2), finest=1e-4 if i % 2 else None)
        W = weights[i % len(weights)]
        g = grad_slopes(f, W, N, QuadConfig(rel_tol=1e-12, abs_tol=1e-15))
        fd = fd_slopes(f, W, N, 1e-6 * float(np.max(np.abs(f.slopes))))
        rel = np.abs(g - fd) / np.maximum(np.abs(fd), 1e-300)
        worst = max(worst, float(rel.max()))
        bad += int(np.any(rel > 1e-5))
    return [Check("gradient", "grad_slopes vs central differences", bad,
                  f"{count} instances, worst rel err {worst:.2e}")]


def _optimizer(quick: bool):
    W = i_beta_spec(0.9)
    x = geometric_grid(64, 1e-9)
    scan = scan_broken_line(W, 2, x[1:])
    rep = maximize_gridfn(W, 2, 64)
    bound = series_bound(2, 0.9).value
    checks = [Check("optimizer", "beta=0.9 scan <= ascent <= series",
                    int(not scan.best_value <= rep.best_value <= bound),
                    f"{scan.best_value:.6g} <= {rep.best_value:.6g} <= {bound:.6g}")]
    rep = maximize_gridfn(j_gamma_spec(1.5), 2, 64)
    a = max_ratio(rep.best_fn, 2).a
    checks.append(Check("optimizer", "gamma=1.5 divergence detected",
                        int(rep.status != "divergence_detected") + int(not a < 1e-3),
                        f"status {rep.status}, concentration {a:.3g}"))
    return checks


def _exactness(quick: bool):
    zero = make_grid_fn([[0.0, 0.0], [1.0, 0.0]])
    bad = 0
    for W in (i_beta_spec(1.0), i_beta_spec(3.0), j_gamma_spec(1.0), j_gamma_spec(2.0), j1h_spec()):
        bad += abs(eval_functional(zero, W, 2).value - 1.0) > 1e-12
    checks = [Check("exactness", "functionals at 0 equal 1", bad, "5 weights")]
    bad = 0
    worst = 0.0
    for N in (2, 3, 4):
        for j in (2.0, 10.0, 1e4):
            w = moser_w(j, N)
            mr = max_ratio(w, N)
            errs = [abs(energy(w, N) - 1.0), abs(mr.a - 1.0 / j) * j, abs(mr.max_value - 1.0)]
            worst = max(worst, *errs)
            bad += any(e > 4 * np.finfo(float).eps for e in errs)
    checks.append(Check("exactness", "w_j energy and max ratio", bad,
                        f"worst deviation {worst:.2e} (limit 4 ulp)"))
    return checks


SUITES = {
    "constants": _constants,
    "exactness": _exactness,
    "lemmas": _lemmas,
    "gradient": _gradient,
    "series": _series,
    "trichotomy": _trichotomy,
    "optimizer": _optimizer,
}


def run_suite(name: str, quick: bool = False) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return SUITES[name](quick)


def run(selector: str = "all", quick: bool = False) -> list[Check]:
    names = list(SUITES) if selector == "all" else [s.strip() for s in selector.split(",")]
    out = []
    for name in names:
        out.extend(run_suite(name, quick))
    return out
