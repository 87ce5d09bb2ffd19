import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fraclap.errors import DegenerateInput, InvalidParameters
from fraclap.fit import (EXPONENTIAL, FLAT, POLYNOMIAL, CurveQuery, DecayCurve, fit_loglog,
                         generate_curve, read_csv, write_csv)
from fraclap.rates import preset_symbol
from fraclap.spectra import RadialProfile

G = RadialProfile.gaussian()


def power_curve(k, t0=1e2, t1=1e4, points=24):
    t = np.geomspace(t0, t1, points)
    return DecayCurve(t, (1 + t) ** -k)


@pytest.mark.parametrize("k", [0.25, 0.75, 1.5])
def test_exact_power_law(k):
    rf = fit_loglog(power_curve(k))
    assert abs(rf.exponent - k) <= 1e-6
    assert rf.r_squared >= 1 - 1e-9
    assert rf.classification == POLYNOMIAL


def test_exponential_detected():
    t = np.geomspace(1, 50, 24)
    assert fit_loglog(DecayCurve(t, np.exp(-t))).classification == EXPONENTIAL


def test_underflow_is_exponential():
    t = np.geomspace(1, 1e4, 24)
    assert fit_loglog(DecayCurve(t, np.exp(-t))).classification == EXPONENTIAL


def test_flat_curve():
    t = np.geomspace(1, 1e3, 16)
    assert fit_loglog(DecayCurve(t, np.full(16, 2.0))).classification == FLAT
    assert fit_loglog(DecayCurve(t, np.zeros(16))).classification == FLAT


def test_degenerate_inputs():
    t = np.geomspace(1, 1e3, 16)
    v = (1 + t) ** -1.0
    bad = v.copy()
    bad[10] = np.nan
    with pytest.raises(DegenerateInput):
        fit_loglog(DecayCurve(t, bad))
    hole = v.copy()
    hole[12] = 0.0
    with pytest.raises(DegenerateInput):
        fit_loglog(DecayCurve(t, hole))


def test_tail_window_minimum():
    with pytest.raises(InvalidParameters):
        fit_loglog(power_curve(1.0, points=10), tail_fraction=0.5)
    with pytest.raises(InvalidParameters):
        fit_loglog(power_curve(1.0), tail_fraction=0.0)


def test_curve_validation():
    with pytest.raises(InvalidParameters):
        DecayCurve(np.arange(1, 5), np.ones(4))
    with pytest.raises(InvalidParameters):
        DecayCurve(np.array([1, 2, 2, 3, 4, 5, 6, 7.0]), np.ones(8))


@settings(max_examples=100, deadline=None)
@given(k=st.floats(0.05, 3), lam=st.floats(1e-6, 1e6))
def test_scale_equivariance(k, lam):
    c = power_curve(k)
    a = fit_loglog(c)
    b = fit_loglog(DecayCurve(c.times, lam * c.values))
    assert b.slope == pytest.approx(a.slope, abs=1e-12)
    assert b.r_squared == pytest.approx(a.r_squared, abs=1e-12)
    assert a.classification == b.classification


@settings(max_examples=50, deadline=None)
@given(k=st.floats(0.05, 3))
def test_grid_robustness(k):
    a = fit_loglog(power_curve(k, points=24))
    b = fit_loglog(power_curve(k, points=48))
    assert abs(a.exponent - b.exponent) <= 1e-9


def test_csv_roundtrip(tmp_path):
    c = power_curve(0.75)
    path = tmp_path / "c.csv"
    write_csv(c, path)
    text = path.read_bytes()
    assert text.startswith(b"t,value\r\n")
    back = read_csv(path)
    assert np.array_equal(back.times, c.times) and np.array_equal(back.values, c.values)


def test_csv_bad_header(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("time,v\n1,2\n")
    with pytest.raises(InvalidParameters):
        read_csv(path)


def test_zero_data_curve_is_flat():
    z = RadialProfile.zero()
    q = CurveQuery(preset_symbol("wave", 0), 3, z, z)
    rf = fit_loglog(generate_curve(q, 1, 100, 12))
    assert rf.classification == FLAT


def test_wave_curve_monotone_and_rate():
    q = CurveQuery(preset_symbol("wave", 0), 3, G, G)
    c = generate_curve(q, 1e2, 1e4, 24)
    assert np.all(np.diff(c.values) < 0)
    assert fit_loglog(c).exponent == pytest.approx(0.75, abs=0.05)


def test_plate_theta1_rate():
    q = CurveQuery(preset_symbol("plate", 1), 5, G, G)
    assert fit_loglog(generate_curve(q, 1e2, 1e4, 24)).exponent == pytest.approx(0.25, abs=0.05)


def test_threads_deterministic():
    q = CurveQuery(preset_symbol("ibq", 0), 3, G, G)
    a = generate_curve(q, 1e2, 1e3, 12, threads=1)
    b = generate_curve(q, 1e2, 1e3, 12, threads=4)
    assert np.array_equal(a.values, b.values)


def test_query_validation():
    with pytest.raises(InvalidParameters):
        CurveQuery(preset_symbol("wave", 0), 3, G, G, observable="mass")
    with pytest.raises(InvalidParameters):
        CurveQuery(preset_symbol("wave", 0), 3, G, G, observable="hf_energy")
    with pytest.raises(InvalidParameters):
        generate_curve(CurveQuery(preset_symbol("wave", 0), 3, G, G), 10, 1, 12)
