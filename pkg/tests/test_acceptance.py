"""The eight acceptance criteria, each printing one PASS/FAIL line."""
import json
import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from fraclap import energy as en
from fraclap.cli import main as cli_main
from fraclap.fit import EXPONENTIAL, POLYNOMIAL, CurveQuery, DecayCurve, fit_loglog, generate_curve
from fraclap.oracle import confluent_radii, kernel_agreement
from fraclap.rates import implied_beta, preset_symbol
from fraclap.spectra import RadialProfile, default_eps, lemma1_ratio
from fraclap.symbols import (CanonicalParams, bracket_tolerance, effective_canonical,
                             epsilon_threshold, real_branch_brackets)

G = RadialProfile.gaussian()


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


def test_criterion_1_kernel_oracle(report):
    rng = np.random.default_rng(11)
    cases = [("wave", F(0)), ("wave", F(1, 2)), ("plate", F(0)), ("plate", F(1)),
             ("ibq", F(0)), ("ibq", F(1)), ("plate_no_ri", F(1))]
    start = time.perf_counter()
    worst, total, near = 0.0, 0, 0
    for name, theta in cases:
        sym = preset_symbol(name, theta)
        r = np.exp(rng.uniform(math.log(1e-3), math.log(20.0), 80))
        t = np.exp(rng.uniform(math.log(1e-2), math.log(10.0), 80))
        pts = [np.column_stack([r, t])]
        for rc in confluent_radii(sym):
            rr = rc * (1 + np.array([0.0, 1e-12, -1e-12, 1e-10, -1e-10, 1e-8, -1e-8]))
            a, b, c = sym.coefficients(rr)
            near += int(np.sum(np.abs(b * b - 4 * a * c) < 1e-8)) * 3
            pts.append(np.array([(x, y) for x in rr for y in (0.3, 2.0, 9.0)]))
        pts = np.concatenate(pts)
        total += len(pts)
        worst = max(worst, kernel_agreement(sym, pts))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and total >= 500 and near > 0 and elapsed < 60
    report(1, ok, f"max rel err {worst:.2e} over {total} points ({near} with |disc| < 1e-8) in {elapsed:.1f}s")
    assert ok


def test_criterion_2_eigenvalue_brackets(report):
    rng = np.random.default_rng(22)
    violations, cases = 0, 0
    while cases < 20:
        al = rng.uniform(0.1, 4.0)
        th = rng.uniform(0.0, 0.499) * al
        d = rng.uniform(0.0, 3.0)
        p = CanonicalParams(d, al, th, int(rng.integers(1, 7)))
        eps = epsilon_threshold(p)
        r = np.geomspace(eps * 1e-10, eps * (1 - 1e-12), 10_000)
        tol = bracket_tolerance(p, r)
        for m in real_branch_brackets(p, r).values():
            violations += int(np.sum(m < -tol))
        cases += 1
    ok = violations == 0
    report(2, ok, f"{violations} violations over {cases} parameter sets x 10^4 radii")
    assert ok


CRIT3 = [("wave", F(0), 3), ("wave", F(1, 2), 3), ("plate", F(0), 2), ("plate", F(1), 2),
         ("ibq", F(0), 3), ("ibq", F(1), 3)]


def test_criterion_3_energy_inequalities(report):
    rng = np.random.default_rng(33)
    worst = {"R<=F/2": -np.inf, "E>=E1/2": -np.inf, "dE/dt+F/2": -np.inf, "dissipation": 0.0}
    for name, theta, n in CRIT3:
        sym = preset_symbol(name, theta)
        p = effective_canonical(sym, "high", n)
        eps = default_eps(sym, n)
        s = en.sample_states(sym, eps, 10_000, rng)
        v0 = rng.standard_normal(10_000) + 1j * rng.standard_normal(10_000)
        v1 = rng.standard_normal(10_000) + 1j * rng.standard_normal(10_000)
        for sigma in (-2 * float(p.alpha), -2 * float(p.delta)):
            out = en.energy_terms(p, sigma, sym, s.r, s.v, s.vt, eps)
            worst["R<=F/2"] = max(worst["R<=F/2"], float(np.max((out["rr"] - out["f"] / 2) / (out["f"] + 1e-300))))
            worst["E>=E1/2"] = max(worst["E>=E1/2"], float(np.max((out["e1"] / 2 - out["e"]) / (out["e1"] + 1e-300))))
            marg = en.diff_inequality_margins(p, sigma, sym, v0, v1, s.r, s.t, eps)
            worst["dE/dt+F/2"] = max(worst["dE/dt+F/2"], float(np.max(marg)))
        res = en.dissipation_identity_residuals(sym, v0, v1, s.r, s.t)
        worst["dissipation"] = max(worst["dissipation"], float(np.max(res)))
    ok = (worst["R<=F/2"] <= 0 and worst["E>=E1/2"] <= 1e-12 and worst["dE/dt+F/2"] <= 1e-6
          and worst["dissipation"] <= 1e-7)
    report(3, ok, "worst " + ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
           + f" over {len(CRIT3)} presets x 10^4 samples")
    assert ok


CRIT4 = [
    ("wave theta=0 n=3 ||v||", "wave", F(0), 3, 0, 0, 0.75, 0.05),
    ("wave theta=3/4 n=3 ||v_t||", "wave", F(3, 4), 3, 1, 0, 1.0, 0.08),
    ("wave theta=3/4 n=3 ||grad v||", "wave", F(3, 4), 3, 0, 1, 1.0, 0.08),
    ("plate theta=1 n=5 ||v||", "plate", F(1), 5, 0, 0, 0.25, 0.05),
    ("ibq theta=0 n=3 ||v||", "ibq", F(0), 3, 0, 0, 0.75, 0.05),
]


def test_criterion_4_rate_reproduction(report):
    parts, ok = [], True
    for label, name, theta, n, j, gamma, want, tol in CRIT4:
        start = time.perf_counter()
        q = CurveQuery(preset_symbol(name, theta), n, G, G, j=j, gamma=gamma)
        rf = fit_loglog(generate_curve(q, 1e2, 1e4, 24))
        elapsed = time.perf_counter() - start
        good = rf.classification == POLYNOMIAL and abs(rf.exponent - want) <= tol and elapsed < 300
        ok &= good
        parts.append(f"{label}: {rf.exponent:.4f} (want {want} +/- {tol}, {elapsed:.2f}s)")
    report(4, ok, "; ".join(parts))
    assert ok


def test_criterion_5_regularity_loss_discrimination(report):
    # data with a power tail: v0 in H^s for s < 2, v1 in H^s for s < 1 (n = 2)
    n = 2
    v0, v1 = RadialProfile.power_tail(3, 1), RadialProfile.power_tail(2, 1)
    plate = preset_symbol("plate", F(0))
    p = effective_canonical(plate, "high", n)
    sigma = -2 * p.alpha
    beta0 = implied_beta(p, sigma, F(v0.sobolev_threshold(n)))
    beta1 = (p.delta - p.theta) / (F(v1.sobolev_threshold(n)) - p.delta - sigma / 2)
    beta = min(beta0, beta1)
    q = CurveQuery(plate, n, v0, v1, "hf_energy", p=p, sigma=float(sigma), rtol=1e-6)
    fit_plate = fit_loglog(generate_curve(q, 1e2, 1e4, 24))
    plate_ok = fit_plate.classification == POLYNOMIAL and abs(fit_plate.exponent - 1 / beta) <= 0.1

    wave = preset_symbol("wave", F(1, 2))
    pw = effective_canonical(wave, "high", n)
    qw = CurveQuery(wave, n, v0, v1, "hf_energy", p=pw, sigma=float(-2 * pw.alpha), rtol=1e-6)
    fit_wave = fit_loglog(generate_curve(qw, 1e2, 1e4, 24))
    wave_ok = fit_wave.classification == EXPONENTIAL
    ok = plate_ok and wave_ok
    report(5, ok, f"plate theta=0: {fit_plate.classification} exponent {fit_plate.exponent:.4f} "
                  f"vs 1/beta = {float(1 / beta):.4f}; wave theta=1/2: {fit_wave.classification}")
    assert ok


def _rates_json(capsys, *argv):
    assert cli_main(["rates", *argv, "--json"]) == 0
    return json.loads(capsys.readouterr().out)["rows"]


def test_criterion_6_preset_tables(report, capsys):
    mismatches, checked = [], 0
    for theta in (F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(3, 4), F(9, 10)):
        for n in range(1, 8):
            if not n > 4 * theta:
                continue
            v = next(r for r in _rates_json(capsys, "--preset", "plate", "--theta", str(theta), "--n", str(n))
                     if r["quantity"] == "||v||")
            s = (1 - theta) * (n - 4 * theta) / (2 * (2 - theta))
            checked += 1
            if (v["s"]["exact"], v["r"]["exact"]) != (str(s), str(s - 1)):
                mismatches.append(("plate", theta, n, v["s"], v["r"]))
    for theta in (F(0), F(1, 8), F(1, 4), F(1, 3), F(3, 8), F(2, 5)):
        for n in range(2, 8):
            if not n > 4 * theta:
                continue
            v = next(r for r in _rates_json(capsys, "--preset", "ibq", "--theta", str(theta), "--n", str(n))
                     if r["quantity"] == "||v||")
            s = (n - 4 * theta) / 2
            checked += 1
            if (v["s"]["exact"], v["r"]["exact"]) != (str(s), str(s - 1)):
                mismatches.append(("ibq", theta, n, v["s"], v["r"]))
    for n in range(3, 8):
        v = next(r for r in _rates_json(capsys, "--preset", "ibq", "--theta", "1", "--n", str(n))
                 if r["quantity"] == "||v||")
        checked += 1
        if (v["s"]["exact"], v["r"]["exact"]) != ("0", "-1"):
            mismatches.append(("ibq", 1, n, v["s"], v["r"]))
    ok = not mismatches
    report(6, ok, f"{checked} (s, r) pairs compared exactly, {len(mismatches)} mismatches")
    assert ok, mismatches


def test_criterion_7_integral_bound(report):
    rng = np.random.default_rng(77)
    worst = 0.0
    ts = np.geomspace(1, 1e6, 61)
    for _ in range(10):
        n = int(rng.integers(1, 4))
        k = float(rng.uniform(-n, 4.0))
        while k <= -n:
            k = float(rng.uniform(-n, 4.0))
        beta = float(rng.uniform(0.5, 4.0))
        a = float(rng.uniform(0.1, 2.0))
        q = (n + k) / beta
        # radius at which the ball already holds the bulk of the Gamma(q) mass at t = 1
        eps = ((2 * q + 10) / a) ** (1 / beta)
        vals = np.array([lemma1_ratio(n, a, beta, k, eps, t) for t in ts])
        ratio = float(np.max(vals / vals[0]))
        worst = max(worst, ratio)
    ok = worst <= 10
    report(7, ok, f"sup Q(t)/Q(1) over 10 cases: {worst:.4f}")
    assert ok


def test_criterion_8_synthetic_fits(report):
    t = np.geomspace(1e2, 1e4, 24)
    errs = []
    for k in (0.25, 0.75, 1.5):
        rf = fit_loglog(DecayCurve(t, (1 + t) ** -k))
        errs.append(abs(rf.exponent - k))
    ok = max(errs) <= 1e-6
    report(8, ok, "recovery errors " + ", ".join(f"{e:.1e}" for e in errs))
    assert ok
