import math
import warnings

import numpy as np
import pytest

from blissmoser.gridfn import energy, make_grid_fn, random_monotone
from blissmoser.sequences import (SAFE_J_MAX, broken_line, diagnostics, geometric_schedule,
                                  moser_w, parse_schedule, sweep)
from blissmoser.suites import lemma_corpus
from blissmoser.weights import i_beta_spec, j_gamma_spec


def test_moser_shape():
    w = moser_w(100.0, 2)
    assert w.x.tolist() == [0.0, 0.01, 1.0]
    assert w.v[1] == pytest.approx(0.1) and w.v[2] == w.v[1]
    assert w.slopes[-1] == 0.0
    with pytest.raises(ValueError):
        moser_w(1.0, 2)


def test_broken_line_family():
    assert broken_line(0.01, 3) == moser_w(100.0, 3)
    full = broken_line(1.0, 2)
    assert full.x.tolist() == [0.0, 1.0] and energy(full, 2) == 1.0
    with pytest.raises(ValueError):
        broken_line(0.0, 2)


def test_sup_norm_vanishes():
    tops = [moser_w(j, 3).v.max() for j in (1e2, 1e4, 1e8)]
    assert tops == pytest.approx([1e2 ** (-2 / 3), 1e4 ** (-2 / 3), 1e8 ** (-2 / 3)], rel=1e-14)


def test_schedules():
    assert parse_schedule("1e2:1e8:x10") == pytest.approx([10.0 ** p for p in range(2, 9)], rel=1e-14)
    assert parse_schedule("10,100") == [10.0, 100.0]
    assert len(geometric_schedule(1, 64, 2)) == 7
    with pytest.raises(ValueError):
        parse_schedule("1:2:3")


def test_sweep_csv_and_decay():
    t = sweep(i_beta_spec(1.0), 2, [1e2, 1e3, 1e4])
    assert t.to_csv().splitlines()[0] == "j,value,converged,model"
    assert np.all(np.diff(t.values) < 0)
    assert all(r.converged for r in t.rows)


def test_sweep_model_columns():
    t = sweep(j_gamma_spec(1.5), 2, [1e2])
    assert t.rows[0].model == pytest.approx(math.e * math.log(math.e * 100) ** 0.5)
    t = sweep(i_beta_spec(1.5), 2, [10.0])
    assert t.rows[0].value > t.rows[0].model
    assert sweep(j_gamma_spec(0.5), 2, [10.0]).rows[0].model is None


def test_sweep_rejects_unsorted_and_warns_above_safe_range():
    with pytest.raises(ValueError):
        sweep(i_beta_spec(1.0), 2, [1e3, 1e2])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        t = sweep(i_beta_spec(1.0), 2, [SAFE_J_MAX * 10])
    assert caught and t.rows[0].flagged


@pytest.mark.parametrize("N", [2, 3, 4])
def test_diagnostics_vanish_on_moser(N):
    rep = diagnostics(moser_w(1e3, N), N)
    assert abs(rep.delta) < 1e-15 and rep.defect < 1e-13
    for m in (rep.lemma31_margin, rep.lemma32_margin, rep.lemma33_margin, rep.lemma34_margin):
        assert m <= 1e-12


@pytest.mark.parametrize("N", [2, 3, 4])
def test_lemma_bounds_on_corpus(N):
    for f in lemma_corpus(N, 150, seed=5):
        rep = diagnostics(f, N)
        assert rep.lemma31_margin <= 1e-9
        assert rep.lemma32_margin <= 1e-9
        assert rep.lemma33_margin <= 1e-9
        if rep.delta < 0.5:
            assert rep.lemma34_margin is not None and rep.lemma34_margin <= 1e-9
        else:
            assert rep.lemma34_margin is None


def test_diagnostics_input_checks():
    with pytest.raises(ValueError):
        diagnostics(make_grid_fn([[0.0, 0.0], [1.0, 0.0]]), 2)
    with pytest.raises(ValueError):
        diagnostics(make_grid_fn([[0.0, 0.0], [0.5, 2.0], [1.0, 2.0]]), 2)
    with pytest.raises(ValueError):
        diagnostics(make_grid_fn([[0.0, 0.0], [0.5, 1.0], [1.0, 0.5]]), 2)


def test_corpus_is_deterministic():
    a = lemma_corpus(3, 20, seed=1)
    b = lemma_corpus(3, 20, seed=1)
    assert all(f == g for f, g in zip(a, b))
    assert all(abs(energy(f, 3) - 1.0) < 1e-13 for f in a)
    assert random_monotone(9, 5, 2) == random_monotone(9, 5, 2)


def test_moser_examples():
    assert moser_w(4.0, 2).nodes == [(0.0, 0.0), (0.25, 0.5), (1.0, 0.5)]
    assert moser_w(8.0, 3).v[-1] == pytest.approx(0.25, rel=1e-15)
    assert broken_line(1.0, 2) == make_grid_fn([[0.0, 0.0], [1.0, 1.0]])
    assert broken_line(0.25, 2) == moser_w(4.0, 2)


def test_beta_one_gaps_shrink():
    gaps = sweep(i_beta_spec(1.0), 2, geometric_schedule(1e2, 1e8, 10.0)).values - 1.0
    assert np.all(np.diff(gaps) < 0)
    # (value - 1) log j stays within a narrow band
    scaled = gaps * np.log(geometric_schedule(1e2, 1e8, 10.0))
    assert scaled.max() / scaled.min() < 2.5


def test_diagnostics_identity():
    rep = diagnostics(make_grid_fn([[0.0, 0.0], [1.0, 1.0]]), 2)
    assert rep.a == 1.0 and rep.delta == 0.0 and rep.defect == 0.0
