import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blissmoser.gridfn import (GridFn, basic_bound_check, dumps, energy, eval_fn, from_slopes,
                               geometric_grid, loads, make_grid_fn, max_ratio, normalize,
                               random_monotone)
from blissmoser.sequences import broken_line, moser_w


def test_make_grid_fn_rejects_bad_nodes():
    with pytest.raises(ValueError):
        make_grid_fn([[0.0, 0.1], [1.0, 1.0]])          # v(0) != 0
    with pytest.raises(ValueError):
        make_grid_fn([[0.0, 0.0], [0.5, 1.0]])          # does not reach 1
    with pytest.raises(ValueError):
        make_grid_fn([[0.0, 0.0], [0.6, 1.0], [0.4, 1.0], [1.0, 1.0]])
    with pytest.raises(ValueError):
        make_grid_fn([[0.0, 0.0], [1.0, float("nan")]])


def test_arrays_are_read_only():
    f = broken_line(0.25, 2)
    with pytest.raises(ValueError):
        f.v[1] = 3.0


def test_energy_of_identity_and_scaling():
    f = make_grid_fn([[0.0, 0.0], [1.0, 1.0]])
    assert energy(f, 3) == 1.0
    g = make_grid_fn([[0.0, 0.0], [0.5, 2.0], [1.0, 2.0]])
    assert energy(g, 2) == pytest.approx(8.0, rel=1e-15)
    assert energy(normalize(g, 2), 2) == pytest.approx(1.0, abs=1e-15)


def test_normalize_zero_function_fails():
    with pytest.raises(ValueError):
        normalize(make_grid_fn([[0.0, 0.0], [1.0, 0.0]]), 2)


def test_eval_fn_domain():
    f = broken_line(0.5, 2)
    assert eval_fn(f, 0.25) == pytest.approx(0.25 * 0.5 ** -0.5)
    with pytest.raises(ValueError):
        eval_fn(f, 1.5)


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("j", [2.0, 10.0, 1e4])
def test_moser_energy_and_ratio(N, j):
    w = moser_w(j, N)
    mr = max_ratio(w, N)
    ulp = np.finfo(float).eps
    assert abs(energy(w, N) - 1.0) <= 4 * ulp
    assert abs(mr.a * j - 1.0) <= 4 * ulp
    assert abs(mr.max_value - 1.0) <= 4 * ulp


def test_max_ratio_zero_function():
    mr = max_ratio(make_grid_fn([[0.0, 0.0], [1.0, 0.0]]), 2)
    assert mr.degenerate and mr.a == 1.0 and mr.max_value == 0.0 and mr.delta == 1.0


def test_max_ratio_ties_go_to_smallest_abscissa():
    # v^2/s equals 1 at both kinks
    f = make_grid_fn([[0.0, 0.0], [0.25, 0.5], [1.0, 1.0]])
    mr = max_ratio(f, 2)
    assert mr.a == 0.25 and mr.max_value == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), segments=st.integers(1, 12), N=st.integers(2, 5),
       geometric=st.booleans())
def test_max_ratio_dominates_dense_sampling(seed, segments, N, geometric):
    f = random_monotone(seed, segments, N, geometric=geometric)
    mr = max_ratio(f, N)
    s = np.concatenate((np.geomspace(1e-9, 1.0, 4000), f.x[1:]))
    vs = np.interp(s, f.x, f.v)
    dense = np.max(vs ** N / s ** (N - 1))
    assert mr.max_value >= dense * (1 - 1e-12)
    assert mr.delta == pytest.approx(1.0 - mr.max_value, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), segments=st.integers(1, 12), N=st.integers(2, 5))
def test_basic_bound_holds_in_E_N(seed, segments, N):
    f = random_monotone(seed, segments, N)
    assert basic_bound_check(f, N) <= 1e-12
    assert max_ratio(f, N).max_value <= 1.0 + 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), segments=st.integers(1, 20))
def test_json_round_trip_is_exact(seed, segments):
    f = random_monotone(seed, segments, 3, geometric=True)
    assert loads(dumps(f)) == f


def test_loads_rejects_garbage():
    with pytest.raises(ValueError):
        loads("not json")
    with pytest.raises(ValueError):
        loads('{"points": []}')


def test_geometric_grid():
    x = geometric_grid(64, 1e-9)
    assert x[0] == 0.0 and x[-1] == 1.0 and len(x) == 65
    assert x[1] == pytest.approx(1e-9)
    r = x[2:] / x[1:-1]
    assert np.allclose(r, r[0])


def test_from_slopes_and_monotone():
    f = from_slopes(np.array([0.0, 0.5, 1.0]), np.array([1.0, -1.0]))
    assert not f.is_monotone()
    assert f.v[-1] == 0.0
    assert isinstance(f, GridFn)
    assert math.isclose(energy(f, 2), 1.0)


def test_small_examples():
    w4 = make_grid_fn([[0.0, 0.0], [0.25, 0.5], [1.0, 0.5]])
    assert w4.slopes.tolist() == [2.0, 0.0]
    assert eval_fn(w4, 0.125) == 0.25 and eval_fn(w4, 0.7) == 0.5 and eval_fn(w4, 0.0) == 0.0
    two = make_grid_fn([[0.0, 0.0], [0.5, 1.0], [1.0, 1.0]])
    assert energy(two, 2) == 2.0
    assert normalize(make_grid_fn([[0.0, 0.0], [1.0, 2.0]]), 2) == make_grid_fn([[0, 0], [1, 1]])
    ident = make_grid_fn([[0.0, 0.0], [1.0, 1.0]])
    mr = max_ratio(ident, 2)
    assert mr.a == 1.0 and mr.max_value == 1.0
    assert random_monotone(1, 1, 2) == ident


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), segments=st.integers(1, 15), N=st.integers(2, 5))
def test_normalize_idempotent_and_monotone_eval(seed, segments, N):
    f = random_monotone(seed, segments, N)
    g = normalize(f, N)
    assert np.allclose(g.v, f.v, rtol=1e-15, atol=0)
    assert abs(energy(f, N) - 1.0) <= 1e-14
    s = np.linspace(0.0, 1.0, 1001)
    assert np.all(np.diff(eval_fn(f, s)) >= 0)


@pytest.mark.parametrize("seed", range(5))
def test_max_ratio_matches_million_samples(seed):
    f = random_monotone(seed, 8, 3)
    s = np.linspace(1e-6, 1.0, 1_000_000)
    r = np.interp(s, f.x, f.v) ** 3 / s ** 2
    mr = max_ratio(f, 3)
    assert mr.max_value >= r.max() * (1 - 1e-12)
    assert abs(mr.a - s[np.argmax(r)]) <= s[1] - s[0]
    assert mr.max_value == pytest.approx(float(np.interp(mr.a, f.x, f.v)) ** 3 / mr.a ** 2, rel=1e-14)


def test_ratio_scales_with_energy():
    for seed in range(20):
        f = random_monotone(seed, 6, 2)
        g = make_grid_fn([[a, 3.0 * b] for a, b in f.nodes])
        assert max_ratio(g, 2).max_value <= energy(g, 2) * (1 + 1e-12)


@pytest.mark.parametrize("a", [1e-6, 0.01, 0.3, 1.0])
def test_basic_bound_equality_at_kink(a):
    f = broken_line(a, 3)
    assert abs(basic_bound_check(f, 3)) <= 1e-15
