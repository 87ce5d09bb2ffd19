import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fraclap.errors import InadmissibleExponents, InvalidParameters
from fraclap.rates import preset_symbol
from fraclap.symbols import (CanonicalParams, GeneralSymbol, SymbolTriple, eigenvalues,
                             effective_canonical, epsilon_threshold, kernel_arrays,
                             bracket_tolerance, kernels_at, real_branch_brackets, roots, solution_hat)

WAVE = preset_symbol("wave", 0)
PLATE = preset_symbol("plate", 0)
mp.mp.dps = 40


def mp_kernels(a, b, c, t):
    """K0, K1, dK0, dK1 from the root formulas at 40 digits."""
    a, b, c, t = (mp.mpf(x) for x in (a, b, c, t))
    disc = b * b - 4 * a * c
    sq = mp.sqrt(disc) if disc >= 0 else mp.mpc(0, mp.sqrt(-disc))
    lp, lm = (-b + sq) / (2 * a), (-b - sq) / (2 * a)
    if disc == 0:
        e = mp.exp(lp * t)
        return (1 - lp * t) * e, t * e, -lp * lp * t * e, (1 + lp * t) * e
    ep, em = mp.exp(lp * t), mp.exp(lm * t)
    g = lp - lm
    k0 = (lp * em - lm * ep) / g
    k1 = (ep - em) / g
    dk0 = lp * lm * (em - ep) / g
    dk1 = (lp * ep - lm * em) / g
    return tuple(complex(x).real for x in (k0, k1, dk0, dk1))


# -- params and symbols ------------------------------------------------------

def test_canonical_params_validation():
    CanonicalParams(1, 2, 2, 3)
    with pytest.raises(InvalidParameters):
        CanonicalParams(1, 2, 3, 3)
    with pytest.raises(InvalidParameters):
        CanonicalParams(-1, 2, 0, 3)
    with pytest.raises(InvalidParameters):
        CanonicalParams(1, 2, 0, 0)


def test_general_symbol_parse_and_bounds():
    s = GeneralSymbol.parse("1:1, 1:2")
    assert s.terms == ((Fraction(1), Fraction(1)), (Fraction(1), Fraction(2)))
    assert s.low_exponent == 1 and s.high_exponent == 2
    assert float(s(np.array(2.0))) == pytest.approx(4 + 16)
    with pytest.raises(InvalidParameters):
        GeneralSymbol(((0, 1),))
    with pytest.raises(InvalidParameters):
        GeneralSymbol.parse("1-2")


def test_symbol_triple_needs_unit_constant_in_a():
    with pytest.raises(InvalidParameters):
        SymbolTriple(GeneralSymbol.power(1), GeneralSymbol.power(0), GeneralSymbol.power(1))


# -- eigenvalues -------------------------------------------------------------

def test_wave_eigenvalues_at_03():
    e = eigenvalues(WAVE, 0.3)
    assert e.lambda_plus == pytest.approx(-0.1, rel=1e-14)
    assert e.lambda_minus == pytest.approx(-0.9, rel=1e-14)
    assert not e.degenerate


def test_zero_frequency_is_degenerate():
    sym = SymbolTriple.from_canonical(CanonicalParams(1, 2, 1, 2))
    e = eigenvalues(sym, 0.0)
    assert e.lambda_plus == 0 and e.lambda_minus == 0 and e.degenerate


def test_plate_complex_pair_at_one():
    e = eigenvalues(PLATE, 1.0)
    assert e.lambda_plus == pytest.approx(complex(-1, math.sqrt(7)) / 4, rel=1e-14)
    assert e.lambda_minus == pytest.approx(complex(-1, -math.sqrt(7)) / 4, rel=1e-14)


exps = st.fractions(min_value=0, max_value=3, max_denominator=8)


@settings(max_examples=200, deadline=None)
@given(d=exps, al=exps, th_frac=st.floats(0, 1), r=st.floats(1e-4, 1e3))
def test_vieta_and_stability(d, al, th_frac, r):
    th = Fraction(th_frac).limit_denominator(16) * al
    sym = SymbolTriple.from_canonical(CanonicalParams(d, al, th, 3))
    a, b, c = sym.coefficients(r)
    lp, lm = roots(a, b, c)
    assert lp.real <= 0 and lm.real <= 0
    assert abs(lp + lm + b / a) <= 1e-12 * (b / a) + 1e-300
    assert abs(lp * lm - c / a) <= 1e-12 * (c / a)


# -- kernels -----------------------------------------------------------------

@pytest.mark.parametrize("r", [0.0, 0.3, 1.0, 7.0])
def test_kernels_at_t0(r):
    k = kernels_at(PLATE, 0.0, r)
    assert (k.k0, k.k1, k.dk0, k.dk1) == (1.0, 0.0, 0.0, 1.0)


def test_wave_k1_closed_form():
    k = kernels_at(WAVE, 1.0, 0.3)
    assert k.k1 == pytest.approx((math.exp(-0.1) - math.exp(-0.9)) / 0.8, rel=1e-14)
    v, vt = solution_hat(WAVE, 1.0, 0.3, 1.0, 0.0)
    assert v == pytest.approx((-0.9 * math.exp(-0.1) + 0.1 * math.exp(-0.9)) / -0.8, rel=1e-14)
    assert vt == pytest.approx(k.dk0)


def test_solution_hat_picks_kernels():
    k = kernels_at(PLATE, 2.5, 0.7)
    assert solution_hat(PLATE, 2.5, 0.7, 0.0, 1.0) == (k.k1, k.dk1)
    assert solution_hat(PLATE, 0.0, 0.7, 2.0, 3.0) == (2.0, 3.0)


def test_confluent_limit_exact():
    # wave theta=0: b^2 = 4ac at r = 1/2 exactly (1 = 4 r^2)
    k = kernels_at(WAVE, 3.0, 0.5)
    lam = -0.5
    assert k.k1 == pytest.approx(3.0 * math.exp(lam * 3.0), rel=1e-15)
    assert k.k0 == pytest.approx((1 - lam * 3.0) * math.exp(lam * 3.0), rel=1e-15)


@settings(max_examples=300, deadline=None)
@given(a=st.floats(1, 5), b=st.floats(0, 5), c=st.floats(1e-4, 50), t=st.floats(0, 30))
def test_kernels_match_mpmath(a, b, c, t):
    got = kernel_arrays(np.array(a), np.array(b), np.array(c), np.array(t))
    want = mp_kernels(a, b, c, t)
    scale = max(abs(w) for w in want) + 1e-300
    for g, w in zip(got, want):
        assert abs(float(g) - w) <= 1e-12 * scale


@pytest.mark.parametrize("rel", [1e-4, 1e-6, 1e-8, 1e-10, 1e-13])
def test_near_confluent_matches_mpmath(rel):
    # b^2 = 4ac (1 + rel): tiny real gap
    a, c, t = 1.0, 2.0, 4.0
    b = math.sqrt(4 * a * c * (1 + rel))
    got = kernel_arrays(np.array(a), np.array(b), np.array(c), np.array(t))
    want = mp_kernels(a, b, c, t)
    for g, w in zip(got, want):
        assert float(g) == pytest.approx(w, rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("sign", [1, -1])
def test_continuity_across_degenerate_threshold(sign):
    a, c, t = 1.0, 2.0, 5.0

    def k(rel):
        b = math.sqrt(4 * a * c * (1 + rel))
        return np.array(kernel_arrays(np.array(a), np.array(b), np.array(c), np.array(t)), dtype=float)

    below, above = k(sign * 1e-6 * (1 - 1e-6)), k(sign * 1e-6 * (1 + 1e-6))
    assert np.max(np.abs(above - below) / np.abs(below)) <= 1e-9


# -- thresholds and effective exponents -------------------------------------

def test_epsilon_threshold_examples():
    assert epsilon_threshold(CanonicalParams(0, 1, 0, 3)) == pytest.approx(0.25)
    assert epsilon_threshold(CanonicalParams(1, 2, Fraction(3, 2), 3)) == 0.5
    assert epsilon_threshold(CanonicalParams(1, 2, 0, 3)) == pytest.approx(0.5)


def test_effective_canonical_ibq():
    ibq = preset_symbol("ibq", Fraction(1, 4))
    lo = effective_canonical(ibq, "low", 3)
    hi = effective_canonical(ibq, "high", 3)
    assert (lo.delta, lo.alpha, lo.theta) == (1, 1, Fraction(1, 4))
    assert (hi.delta, hi.alpha, hi.theta) == (1, 2, Fraction(1, 4))


def test_effective_canonical_single_power_identical():
    sym = SymbolTriple.from_canonical(CanonicalParams(1, 2, Fraction(1, 2), 2))
    assert effective_canonical(sym, "low", 2) == effective_canonical(sym, "high", 2)


def test_effective_canonical_rejects_theta_above_alpha():
    sym = SymbolTriple(GeneralSymbol(((1, 0),)), GeneralSymbol.power(2), GeneralSymbol(((1, 1), (1, 3))))
    with pytest.raises(InadmissibleExponents):
        effective_canonical(sym, "low", 2)


# -- explicit brackets -------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(al=st.floats(0.2, 3), frac=st.floats(0, 0.49), d=st.floats(0, 2))
def test_brackets_hold(al, frac, d):
    p = CanonicalParams(d, al, frac * al, 2)
    eps = epsilon_threshold(p)
    r = np.geomspace(eps * 1e-6, eps * (1 - 1e-12), 2000)
    tol = bracket_tolerance(p, r)
    for m in real_branch_brackets(p, r).values():
        assert np.all(m >= -tol)


def test_brackets_refuse_complex_branch():
    with pytest.raises(InvalidParameters):
        real_branch_brackets(CanonicalParams(1, 2, 1, 2), np.array([0.1]))
