"""Sweep every pointwise inequality and identity for one symbol and report JSON records.

Each record is ``{check, params, worst_point, violation, pass}`` where
``violation`` is the worst signed excess over the allowed bound (<= 0 passes
for inequalities; for residual checks it is residual minus tolerance).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import energy as en
from .errors import HypothesisNotMet, InadmissibleExponents
from .oracle import kernel_agreement
from .spectra import RadialProfile, default_eps, parseval_split_check
from .symbols import (SymbolTriple, effective_canonical, epsilon_threshold,
                      bracket_tolerance, real_branch_brackets, roots)

@dataclass
class CheckRecord:
    check: str
    params: dict
    worst_point: dict
    violation: float
    passed: bool

    def as_dict(self):
        v = self.violation
        return {"check": self.check, "params": self.params, "worst_point": self.worst_point,
                "violation": v if math.isfinite(v) else str(v), "pass": bool(self.passed)}


def _record(name, params, worst, violation, ok=None):
    ok = violation <= 0 if ok is None else ok
    return CheckRecord(name, params, {k: float(v) for k, v in worst.items()}, float(violation), bool(ok))


def kernel_check(sym, params, rng, count=600, tol=1e-8):
    """Closed form vs RK4 oracle on random (r, t) plus points around confluent radii."""
    from .oracle import confluent_radii
    r = np.exp(rng.uniform(math.log(1e-3), math.log(20.0), count))
    t = np.exp(rng.uniform(math.log(1e-2), math.log(10.0), count))
    extra_r = []
    for rc in confluent_radii(sym):
        extra_r += [rc, rc * (1 + 1e-9), rc * (1 - 1e-9), rc * (1 + 1e-5), rc * (1 - 1e-5)]
    pts = np.concatenate([np.column_stack([r, t]),
                          np.array([(x, tt) for x in extra_r for tt in (0.5, 2.0, 8.0)]).reshape(-1, 2)])
    err = kernel_agreement(sym, pts)
    return _record("kernel_vs_rk4", params, {"points": len(pts)}, err - tol)


def bracket_check(p_low, params, count=10_000):
    if not p_low.real_branch:
        return None
    eps = epsilon_threshold(p_low)
    r = np.geomspace(eps * 1e-8, eps * (1 - 1e-12), count)
    margins = real_branch_brackets(p_low, r)
    tol = bracket_tolerance(p_low, r)
    worst_val, worst_r = -math.inf, 0.0
    for m in margins.values():
        i = int(np.argmax(-m - tol))
        if -m[i] - tol[i] > worst_val:
            worst_val, worst_r = float(-m[i] - tol[i]), float(r[i])
    return _record("eigenvalue_brackets", params, {"r": worst_r}, worst_val)


def complex_decay_check(p_low, params, count=2000):
    """|e^{lam t}| <= e^{-r^(2 theta) t / 4} for r < eps in the complex branch."""
    if p_low.real_branch or p_low.theta == 0:
        return None
    eps = epsilon_threshold(p_low)
    sym = SymbolTriple.from_canonical(p_low)
    r = np.geomspace(eps * 1e-6, eps * (1 - 1e-12), count)
    a, b, c = sym.coefficients(r)
    lp, lm = roots(a, b, c)
    bound = -r ** (2 * float(p_low.theta)) / 4
    excess = np.maximum(lp.real, lm.real) - bound
    rel = excess / np.abs(bound) - bracket_tolerance(p_low, r)
    i = int(np.argmax(rel))
    return _record("complex_branch_decay", params, {"r": r[i]}, float(rel[i]))


def vieta_check(sym, params, count=2000, tol=1e-12):
    r = np.geomspace(1e-4, 1e3, count)
    a, b, c = sym.coefficients(r)
    lp, lm = roots(a, b, c)
    s_err = np.abs(lp + lm + b / a) / np.maximum(b / a, 1e-300)
    p_err = np.abs(lp * lm - c / a) / np.maximum(c / a, 1e-300)
    err = np.maximum(s_err, p_err)
    i = int(np.argmax(err))
    return _record("vieta", params, {"r": r[i]}, float(err[i]) - tol)


def rho_bounds_check(p_high, eps, params, count=2000):
    r = np.geomspace(eps, 1e4, count)
    rh = en.rho(p_high, eps, r)
    d, al, th = (float(x) for x in (p_high.delta, p_high.alpha, p_high.theta))
    b1 = r ** (2 * th) / (2 * (1 + r ** (2 * d)))
    b2 = r ** (2 * al - 2 * th) / 2
    ex = np.maximum(rh / b1, rh / b2) - 1
    i = int(np.argmax(ex))
    return _record("rho_bounds", params, {"r": r[i]}, float(ex[i]) - 1e-14)


def energy_checks(sym, p_high, eps, params, samples, rng, sigmas):
    out = []
    for sigma in sigmas:
        prm = {**params, "sigma": float(sigma)}
        s = en.sample_states(sym, eps, samples, rng)
        keep = np.abs(s.v) + np.abs(s.vt) > 0
        terms = en.energy_terms(p_high, sigma, sym, s.r, s.v, s.vt, eps)
        ratio = (terms["rr"] - 0.5 * terms["f"]) / (terms["f"] + 1e-300)
        i = int(np.argmax(np.where(keep, ratio, -np.inf)))
        out.append(_record("R_le_half_F", prm, {"t": s.t[i], "r": s.r[i]}, float(ratio[i])))
        e, e1 = terms["e"], terms["e1"]
        ok = e1 >= 1e-300
        lower = np.where(ok, (0.5 * e1 - e) / np.where(ok, e1, 1.0), -np.inf)
        i = int(np.argmax(lower))
        out.append(_record("E_ge_half_E1", prm, {"t": s.t[i], "r": s.r[i]},
                           float(lower[i]) - en.EQUIV_RTOL))
        m_obs = float(np.max(np.where(ok, e / np.where(ok, e1, 1.0), 0.0)))
        M = en.equivalence_bound(p_high, eps, sym)
        out.append(_record("E_le_M_E1", {**prm, "M_bound": M}, {"observed_max": m_obs}, m_obs / M - 1))
        v0 = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
        v1 = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
        marg = en.diff_inequality_margins(p_high, sigma, sym, v0, v1, s.r, s.t, eps)
        i = int(np.argmax(marg))
        out.append(_record("dEdt_plus_half_F", prm, {"t": s.t[i], "r": s.r[i]}, float(marg[i]) - 1e-6))
        res = en.efr_residual(p_high, sigma, sym, v0, v1, s.r, s.t, eps)
        out.append(_record("EFR_identity", prm, {}, res - 1e-6))
        if p_high.delta <= p_high.theta:
            ok_e1f = en.check_e1f(p_high, sigma, sym, s, eps)
            out.append(_record("E1_le_C_F", {**prm, "C": en.e1f_constant(p_high, eps)}, {},
                               0.0 if ok_e1f else 1.0, ok_e1f))
    s = en.sample_states(sym, eps, samples, rng)
    v0 = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
    v1 = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
    res = en.dissipation_identity_residuals(sym, v0, v1, s.r, s.t)
    i = int(np.argmax(res))
    out.append(_record("dissipation_identity", params, {"t": s.t[i], "r": s.r[i]}, float(res[i]) - 1e-7))
    return out


def lyapunov_checks(sym, p_high, n, eps, params, betas=(0.5, 1.0, 2.0)):
    if not p_high.theta < p_high.delta:
        return []
    out = []
    g = RadialProfile.gaussian(2.0)
    sigma = -2 * float(p_high.alpha)
    for beta in betas:
        worst, wt = -math.inf, 0.0
        for t in (0.0, 1.0, 10.0, 100.0):
            lhs, rhs = en.lyapunov_check(p_high, sigma, sym, n, g, g, beta, t, eps=eps)
            ex = lhs / rhs - 1 if rhs > 0 else (0.0 if lhs == 0 else math.inf)
            if ex > worst:
                worst, wt = ex, t
        out.append(_record("lyapunov_surrogate", {**params, "beta": beta}, {"t": wt}, worst))
    return out


def parseval_check(sym, n, eps, params):
    g = RadialProfile.gaussian()
    worst, wt = -math.inf, 0.0
    for t in (0.0, 1.0, 10.0):
        lo, hi, full = parseval_split_check(sym, n, g, g, 0, 0, t, eps=eps)
        rel = abs(full ** 2 - lo ** 2 - hi ** 2) / max(full ** 2, 1e-300)
        if rel > worst:
            worst, wt = rel, t
    return _record("parseval_split", params, {"t": wt}, worst - 1e-8)


def run_suite(sym: SymbolTriple, n: int, samples=10_000, seed=0, params=None, quick=False):
    """Run every applicable check; returns a list of CheckRecord."""
    rng = np.random.default_rng(seed)
    params = dict(params or {})
    params.setdefault("n", n)
    records = []
    try:
        p_low = effective_canonical(sym, "low", n)
        p_high = effective_canonical(sym, "high", n)
    except InadmissibleExponents as exc:
        raise HypothesisNotMet(str(exc)) from exc
    eps = default_eps(sym, n)
    records.append(kernel_check(sym, params, rng, count=150 if quick else 600))
    records.append(vieta_check(sym, params))
    for rec in (bracket_check(p_low, params), complex_decay_check(p_low, params)):
        if rec is not None:
            records.append(rec)
    records.append(rho_bounds_check(p_high, eps, params))
    sigmas = (-2 * float(p_high.alpha), -2 * float(p_high.delta), 0.0)
    records.extend(energy_checks(sym, p_high, eps, params, samples, rng, sigmas))
    records.append(parseval_check(sym, n, eps, params))
    records.extend(lyapunov_checks(sym, p_high, n, eps, params))
    return records
