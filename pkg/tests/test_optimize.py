import json

import numpy as np
import pytest

from blissmoser.gridfn import energy, geometric_grid, make_grid_fn, max_ratio
from blissmoser.optimize import maximize_gridfn, scan_broken_line
from blissmoser.functionals import eval_functional
from blissmoser.sequences import broken_line
from blissmoser.series import series_bound
from blissmoser.weights import i_beta_spec, j_gamma_spec

A_GRID = 10.0 ** -np.arange(1, 9)


def test_scan_beta_zero_is_flat():
    res = scan_broken_line(i_beta_spec(0.0), 2, A_GRID)
    assert all(v == pytest.approx(1.0, abs=1e-15) for _, v, _ in res.table)


def test_scan_critical_stays_bounded():
    res = scan_broken_line(j_gamma_spec(1.0), 2, A_GRID)
    vals = [v for _, v, _ in res.table]
    assert max(vals) < 7.0 and min(vals) > np.e + 1.0


def test_scan_supercritical_increases():
    vals = [v for _, v, _ in scan_broken_line(j_gamma_spec(1.2), 2, A_GRID).table]
    assert np.all(np.diff(vals) > 0)


def test_scan_threads_keep_order():
    a = scan_broken_line(j_gamma_spec(1.0), 2, A_GRID)
    b = scan_broken_line(j_gamma_spec(1.0), 2, A_GRID, workers=4)
    assert a == b
    assert a.to_csv().splitlines()[0] == "a,value,converged"


def test_scan_rejects_bad_abscissa():
    with pytest.raises(ValueError):
        scan_broken_line(i_beta_spec(1.0), 2, [0.5, 1.5])


def test_subcritical_sandwich():
    W = i_beta_spec(0.9)
    scan = scan_broken_line(W, 2, geometric_grid(64, 1e-9)[1:])
    rep = maximize_gridfn(W, 2, 64)
    assert rep.status == "converged"
    assert scan.best_value <= rep.best_value <= series_bound(2, 0.9).value


def test_trace_monotone_and_energy_preserved():
    rep = maximize_gridfn(j_gamma_spec(1.0), 3, 24, init=4, iters=25)
    assert np.all(np.diff(rep.trace) > 0)
    assert abs(energy(rep.best_fn, 3) - 1.0) <= 1e-12
    assert rep.best_value == pytest.approx(eval_functional(rep.best_fn, j_gamma_spec(1.0), 3).value,
                                           rel=1e-9)


def test_ascent_from_scan_argmax_never_loses():
    for W in (i_beta_spec(0.7), j_gamma_spec(1.0)):
        scan = scan_broken_line(W, 2, A_GRID)
        rep = maximize_gridfn(W, 2, init=broken_line(scan.best_a, 2), iters=30)
        assert rep.best_value >= scan.best_value


def test_supercritical_divergence():
    rep = maximize_gridfn(j_gamma_spec(1.5), 2, 64)
    assert rep.status == "divergence_detected"
    assert max_ratio(rep.best_fn, 2).a < 1e-3
    vals = [v for _, v in rep.probe]
    assert np.all(np.diff(vals) > 0)


def test_critical_is_not_flagged():
    rep = maximize_gridfn(i_beta_spec(1.0), 2, 32)
    assert rep.status == "converged"


def test_divergence_cap():
    rep = maximize_gridfn(i_beta_spec(1.5), 2, 16, divergence_cap=50.0)
    assert rep.status == "divergence_detected" and rep.best_value > 50.0


def test_budget():
    rep = maximize_gridfn(j_gamma_spec(1.0), 2, 32, init=1, iters=2)
    assert rep.status == "budget_exhausted" and rep.iterations == 2


def test_zero_init_gets_a_kick():
    x = geometric_grid(8, 1e-3)
    zero = make_grid_fn([[a, 0.0] for a in x])
    rep = maximize_gridfn(i_beta_spec(0.5), 2, init=zero, iters=5)
    assert rep.best_value > 1.0 and rep.trace[0] > 1.0


def test_wrong_grid_is_rejected():
    with pytest.raises(ValueError):
        maximize_gridfn(i_beta_spec(0.5), 2, init=broken_line(0.1, 2), grid=geometric_grid(8))
    with pytest.raises(ValueError):
        maximize_gridfn(i_beta_spec(0.5), 2, segments=1)


def test_deterministic_reports():
    a = maximize_gridfn(j_gamma_spec(1.0), 2, 16, init=7, iters=10)
    b = maximize_gridfn(j_gamma_spec(1.0), 2, 16, init=7, iters=10)
    assert a.to_json() == b.to_json() and a.trace_csv() == b.trace_csv()
    doc = json.loads(a.to_json())
    assert set(doc) >= {"status", "best_value", "iterations", "nodes"}
