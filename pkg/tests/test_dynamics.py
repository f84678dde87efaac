import numpy as np
import pytest

from oracles import brute_recurrence
from cqca.automaton import apply, parse_operator, power, trace
from cqca.dynamics import (RecurrenceResult, default_budget, detect_gliders, dyadic_pattern,
                           evolve_operator, fractal_dimension, recurrence_time, spread_counts,
                           trace_footprint, trace_series)
from cqca.lattice import build, preset
from cqca.polyring import LaurentPoly


def ntp_tau(m):
    if m % 6 == 0:
        return m
    if m % 2 == 0:
        return 3 * m // 2
    if m % 3 == 0:
        return 2 * m
    return 3 * m


@pytest.mark.parametrize("name", ["bare-iswap", "dense", "df19", "sdki", "nonzero-trace-poor",
                                  "traceless-glider", "kagome-t1", "kagome-t3", "cnot"])
def test_recurrence_matches_dense_matrix_powers(name):
    M = build(preset(name))
    for m in range(1, 8):
        r = recurrence_time(M, m)
        assert r.tau == brute_recurrence(M, m, r.tau)
        assert not r.lower_bound


def test_recurrence_shift_is_reported():
    M = build(preset("bare-iswap"))
    for m in range(2, 9):
        r = recurrence_time(M, m)
        assert r.shift_d in range(m)


def test_closed_form_recurrences():
    for m in range(1, 37):
        assert recurrence_time(build(preset("nonzero-trace-poor")), m).tau == ntp_tau(m)
    for m in range(1, 33):
        assert recurrence_time(build(preset("traceless-glider")), m).tau == (m if m % 2 == 0 else 2 * m)
        assert recurrence_time(build(preset("kagome-t1")), m).tau == 2 * m
        assert recurrence_time(build(preset("bare-iswap")), m).tau == m


def test_budget_gives_lower_bound(monkeypatch):
    M = build(preset("dense"))
    r = recurrence_time(M, 7, budget=50)
    assert r.lower_bound and str(r) == ">50"
    assert str(RecurrenceResult(7, 126, 0)) == "126"
    monkeypatch.setenv("CQCA_BUDGET", "40")
    assert default_budget() == 40
    assert recurrence_time(M, 7).lower_bound
    with pytest.raises(ValueError):
        recurrence_time(M, 0)


def test_dyadic_pattern():
    # 24/4 = 6 = 2^2+2, 16/8 = 2 = 2^2-2, 126 = 2^7-2, 40/8 = 5 fits neither form
    rows = dyadic_pattern({12: 24, 8: 16, 7: 126, 24: 40})
    assert rows == [(7, 7, 0, "2^7-2"), (8, 1, 3, "2^2-2"), (12, 3, 2, "2^2+2")]


def test_gliders():
    bare = detect_gliders(build(preset("bare-iswap")))
    assert sorted(n for _, n in bare) == [-1, 1]
    glider = detect_gliders(build(preset("traceless-glider")))
    assert [(xi.support(), n) for xi, n in glider] == [({0: "Z"}, 1)]
    assert detect_gliders(build(preset("dense"))) == []
    M = build(preset("kagome-t1"))
    for xi, n in detect_gliders(M):
        assert apply(M, xi) == xi.scale(LaurentPoly.monomial(n))


def test_trace_series_matches_powers():
    for name in ("dense", "df19", "kagome-t3"):
        M = build(preset(name))
        series = trace_series(M, 20)
        assert series == [trace(power(M, t)) for t in range(21)]


def test_trace_footprint_grid():
    tf = trace_footprint(build(preset("dense")), 8)
    g, lo = tf.grid()
    assert g.shape[0] == 9 and lo <= 0
    assert np.array_equal(g.sum(axis=1), tf.counts())
    assert tf.to_pbm().startswith(b"P1\n")
    assert trace_footprint(build(preset("kagome-t2")), 8).counts().sum() == 0


def test_footprint_and_counts_agree():
    M = build(preset("df19"))
    xi = parse_operator("Z1", 2)
    fp = evolve_operator(M, xi, 40)
    st = spread_counts(M, xi, 40)
    assert np.array_equal(fp.stats().counts, st.counts)
    assert fp.grid.shape[0] == 41
    assert fp.to_ppm().startswith(b"P6\n")
    assert fp.to_text().splitlines()[0].startswith("0: ")
    assert st.to_csv().splitlines()[0] == "t,N_I,N_X,N_Y,N_Z,cumulative"


def test_glider_spread_stays_single_site():
    st = spread_counts(build(preset("bare-iswap")), parse_operator("Z1", 2), 30)
    assert np.all(st.nontrivial == 1)


def test_fractal_dimension_fit():
    t = np.arange(1025)
    dim, err = fractal_dimension(t.astype(float) ** 1.5, (16, 1024))
    assert dim == pytest.approx(1.5) and err == pytest.approx(0, abs=1e-9)
    with pytest.raises(ValueError):
        fractal_dimension(t, (16, 17))
    # single glider: cumulative count grows linearly
    st = spread_counts(build(preset("bare-iswap")), parse_operator("Z1", 2), 256)
    assert fractal_dimension(st.cumulative(), (8, 256))[0] == pytest.approx(1.0, abs=0.05)


def test_dense_spread_fills_light_cone():
    st = spread_counts(build(preset("dense")), parse_operator("Z1", 2), 256)
    dim, _ = fractal_dimension(st.cumulative(), (16, 256))
    assert dim == pytest.approx(2.0, abs=0.05)
