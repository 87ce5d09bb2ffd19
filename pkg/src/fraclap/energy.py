"""High-frequency energy functionals and pointwise checks of their inequalities.

Multiplying the mode equation a v'' + b v' + c v = 0 by
r^sigma (conj(v') + rho conj(v)) and taking real parts gives

    dE/dt + F = R,

    E  = r^sigma [ a|v'|^2/2 + c|v|^2/2 + rho a Re(v' conj v) + rho b |v|^2/2 ]
    F  = r^sigma [ b|v'|^2 + rho c |v|^2 ]
    R  = r^sigma rho a |v'|^2

with the reference energy E1 = r^sigma (r^(2 delta)|v'|^2 + r^(2 alpha)|v|^2)/2.
For canonical symbols a = 1 + r^(2 delta), b = r^(2 theta), c = r^(2 alpha);
general symbols plug in their own a, b, c while rho, E1 use the
high-frequency exponents ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EquivalenceViolated, HypothesisViolated, InvalidParameters
from .quadrature import GAUSS_W, KRONROD_W, NODES
from .spectra import default_eps, default_rmax, radial_integral
from .symbols import CanonicalParams, as_symbol, kernel_arrays, omega, roots

#: E >= E1/2 is asserted with this relative slack
EQUIV_RTOL = 1e-12


def rho(p: CanonicalParams, eps, r):
    """The weight rho(r) for r >= eps (vectorised in r)."""
    r = np.asarray(r, dtype=float)
    d, al, th = (float(x) for x in (p.delta, p.alpha, p.theta))
    if al + d >= 2 * th:
        return eps ** (2 * al + 2 * d - 4 * th) * r ** (2 * th) / (2 * (1 + r ** (2 * d)))
    return eps ** (-2 * al + 4 * th) * r ** (2 * al - 2 * th) / 4


@dataclass(frozen=True)
class EnergyPoint:
    e1: float
    e: float
    f: float
    rr: float
    rho: float


@dataclass(frozen=True)
class StateSamples:
    """Random (t, r) points with their exact solution states."""

    t: np.ndarray
    r: np.ndarray
    v: np.ndarray
    vt: np.ndarray

    def __len__(self):
        return self.r.size


def energy_terms(p, sigma, sym, r, v, vt, eps):
    """Vectorised E1, E, F, R, rho for states (v, vt) at radii r."""
    sym = as_symbol(sym) if sym is not None else as_symbol(p)
    r = np.asarray(r, dtype=float)
    a, b, c = sym.coefficients(r)
    rh = rho(p, eps, r)
    w = r ** float(sigma)
    av, avt = np.abs(v) ** 2, np.abs(vt) ** 2
    cross = np.real(vt * np.conj(v))
    d, al = float(p.delta), float(p.alpha)
    e1 = 0.5 * w * (r ** (2 * d) * avt + r ** (2 * al) * av)
    e = w * (0.5 * a * avt + 0.5 * c * av + rh * a * cross + 0.5 * rh * b * av)
    f = w * (b * avt + rh * c * av)
    rr = w * rh * a * avt
    return {"e1": e1, "e": e, "f": f, "rr": rr, "rho": rh}


def _state(sym, r, t, v0, v1):
    a, b, c = sym.coefficients(r)
    k0, k1, dk0, dk1 = kernel_arrays(a, b, c, t)
    return k0 * v0 + k1 * v1, dk0 * v0 + dk1 * v1


def energy_point(p, sigma, sym, v0, v1, t, r, eps=None) -> EnergyPoint:
    """E1, E, F, R, rho at one (t, r) for mode data v0hat = v0, v1hat = v1."""
    sym = as_symbol(sym) if sym is not None else as_symbol(p)
    eps = default_eps(sym, p.n) if eps is None else eps
    if r < eps:
        raise InvalidParameters(f"energy functionals need r >= eps={eps}, got r={r}")
    v, vt = _state(sym, r, t, v0, v1)
    out = energy_terms(p, sigma, sym, r, v, vt, eps)
    return EnergyPoint(*(float(out[k]) for k in ("e1", "e", "f", "rr", "rho")))


def sample_states(sym, eps, count, rng, t_range=(1e-2, 1e2), r_max=20.0):
    """Log-uniform t and r >= eps with standard complex Gaussian data."""
    sym = as_symbol(sym)
    lt = np.log(t_range)
    t = np.exp(rng.uniform(lt[0], lt[1], count))
    r = np.exp(rng.uniform(math.log(eps), math.log(r_max), count))
    v0 = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    v1 = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    v, vt = _state(sym, r, t, v0, v1)
    return StateSamples(t, r, v, vt)


def equivalence_bound(p, eps, sym=None):
    """Upper constant M with E <= M E1 on r >= eps, from the Young-inequality argument.

    a <= K_a r^(2 delta) and c <= K_c r^(2 alpha) on r >= eps, where K is the
    symbol's weight sum scaled to the top power; the cross term costs
    a|v'|^2/2 + r^(2 alpha)|v|^2/8 and the rho b term r^(2 alpha)|v|^2/4.
    """
    sym = as_symbol(sym) if sym is not None else as_symbol(p)
    ka = _top_power_constant(sym.a, float(p.delta), eps)
    kc = _top_power_constant(sym.c, float(p.alpha), eps)
    return max(2 * ka, kc + 0.75)


def _top_power_constant(s, top, eps):
    # sup over r >= eps of s(r) / r^(2 top) for exponents <= top
    return sum(float(w) * eps ** (2 * (float(e) - top)) for w, e in s.terms)


def check_equivalence(p, sigma, sym, samples: StateSamples, eps):
    """Observed (min, max) of E/E1; raises EquivalenceViolated if E < E1/2."""
    out = energy_terms(p, sigma, sym, samples.r, samples.v, samples.vt, eps)
    e, e1 = out["e"], out["e1"]
    keep = e1 >= 1e-300
    if not keep.any():
        return 1.0, 1.0
    ratio = e[keep] / e1[keep]
    bad = e[keep] < 0.5 * e1[keep] - EQUIV_RTOL * e1[keep]
    if bad.any():
        i = int(np.argmax(bad))
        raise EquivalenceViolated(
            f"E/E1 = {ratio[i]:.6g} < 1/2 at r={samples.r[keep][i]:.6g}, t={samples.t[keep][i]:.6g}")
    return float(ratio.min()), float(ratio.max())


def rr_le_half_f(p, sigma, sym, samples: StateSamples, eps):
    """max of (R - F/2) / (F + 1e-300); nonpositive when R <= F/2 everywhere."""
    out = energy_terms(p, sigma, sym, samples.r, samples.v, samples.vt, eps)
    return float(np.max((out["rr"] - 0.5 * out["f"]) / (out["f"] + 1e-300)))


def _fd_step(t, rate):
    # truncation vs cancellation for exponentials; never wider than 1e-3 / rate
    return np.minimum(np.maximum(1e-6, 1e-4 * t), 1e-3 / np.maximum(1.0, rate))


def energy_rate(p, sigma, sym, r, t, v0, v1, eps):
    """dE/dt by centred differences with one Richardson step, and E, F, R at t."""
    sym = as_symbol(sym) if sym is not None else as_symbol(p)
    r, t = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(t, dtype=float))
    a, b, c = sym.coefficients(r)
    lp, lm = roots(a, b, c)
    h = _fd_step(t, np.maximum(np.abs(lp), np.abs(lm)))

    def E(tt):
        v, vt = _state(sym, r, tt, v0, v1)
        return energy_terms(p, sigma, sym, r, v, vt, eps)["e"]

    d1 = (E(t + h) - E(t - h)) / (2 * h)
    d2 = (E(t + h / 2) - E(t - h / 2)) / h
    dedt = (4 * d2 - d1) / 3
    v, vt = _state(sym, r, t, v0, v1)
    return dedt, energy_terms(p, sigma, sym, r, v, vt, eps)


def diff_inequality_margins(p, sigma, sym, v0, v1, r, t, eps):
    """Pointwise (dE/dt + F/2) / (|E| + F + 1e-300) at paired (r, t) samples."""
    dedt, out = energy_rate(p, sigma, sym, r, t, v0, v1, eps)
    scale = np.abs(out["e"]) + out["f"] + 1e-300
    return (dedt + 0.5 * out["f"]) / scale


def check_diff_inequality(p, sigma, sym, v0, v1, r, t_grid, eps=None):
    """max over t_grid of (dE/dt + F/2) / (|E| + F + 1e-300) for one mode r."""
    sym = as_symbol(sym) if sym is not None else as_symbol(p)
    eps = default_eps(sym, p.n) if eps is None else eps
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size > 1 and np.any(np.diff(t_grid) <= 0):
        raise InvalidParameters("t_grid must be strictly increasing")
    return float(np.max(diff_inequality_margins(p, sigma, sym, v0, v1, r, t_grid, eps)))


def efr_residual(p, sigma, sym, v0, v1, r, t, eps=None):
    """max |dE/dt + F - R| / (|E| + F + R + 1e-300) along the exact solution."""
    sym = as_symbol(sym) if sym is not None else as_symbol(p)
    eps = default_eps(sym, p.n) if eps is None else eps
    dedt, out = energy_rate(p, sigma, sym, r, t, v0, v1, eps)
    scale = np.abs(out["e"]) + out["f"] + out["rr"] + 1e-300
    return float(np.max(np.abs(dedt + out["f"] - out["rr"]) / scale))


def dissipation_identity_residuals(sym, v0hat, v1hat, r, t, rtol=1e-12, max_rounds=12):
    """Vectorised relative residual of the dissipation identity

        a|v'(t)|^2 + c|v(t)|^2 + 2 int_0^t b|v'(s)|^2 ds = a|v1|^2 + c|v0|^2.

    Each sample gets its own uniform Gauss-Kronrod panels on [0, t], sized to
    the fastest root, plus a geometric layer at s = 0; samples whose error
    estimate misses ``rtol`` have their panel count doubled.
    """
    sym = as_symbol(sym)
    r, t, v0hat, v1hat = np.broadcast_arrays(
        *(np.atleast_1d(np.asarray(x)) for x in (r, t, v0hat, v1hat)))
    r, t = r.astype(float), t.astype(float)
    a, b, c = sym.coefficients(r)
    rhs = a * np.abs(v1hat) ** 2 + c * np.abs(v0hat) ** 2
    v, vt = _state(sym, r, t, v0hat, v1hat)
    lhs = a * np.abs(vt) ** 2 + c * np.abs(v) ** 2
    lp, lm = roots(a, b, c)
    speed = np.maximum(np.abs(lp), np.abs(lm))
    npan = np.clip(np.ceil(t * speed), 4, 1 << 20).astype(np.int64)
    diss = np.zeros_like(t)
    todo = np.nonzero((t > 0) & (b > 0))[0]
    for _ in range(max_rounds):
        if todo.size == 0:
            break
        val, err = _panel_dissipation(sym, r[todo], t[todo], v0hat[todo], v1hat[todo], npan[todo])
        diss[todo] = val
        scale = np.maximum(rhs[todo], 1e-300)
        ok = 2 * err <= rtol * scale
        npan[todo] *= 2
        todo = todo[~ok]
    lhs = lhs + 2.0 * diss
    return np.where(rhs > 0, np.abs(lhs - rhs) / np.where(rhs > 0, rhs, 1.0), np.abs(lhs))


def _panel_dissipation(sym, r, t, v0, v1, npan, layer=40):
    # panel edges in s: geometric layer t*2^-k for k = layer..log2(npan), then uniform
    val = np.zeros_like(t)
    err = np.zeros_like(t)
    h = t / npan
    # geometric layer inside the first uniform panel
    k = np.arange(layer, 0, -1)
    lo = h[:, None] * 2.0 ** -k[None, :]
    hi = h[:, None] * 2.0 ** -(k[None, :] - 1)
    segs = [(np.repeat(np.arange(t.size), layer), lo.ravel(), hi.ravel())]
    rest = npan - 1
    idx = np.repeat(np.arange(t.size), rest)
    j = np.arange(idx.size) - np.repeat(np.cumsum(rest) - rest, rest) + 1
    segs.append((idx, j * h[idx], (j + 1) * h[idx]))
    a, b, c = sym.coefficients(r)
    chunk = 400_000
    for owner, slo, shi in segs:
        for start in range(0, owner.size, chunk):
            o = owner[start:start + chunk]
            L, H = slo[start:start + chunk], shi[start:start + chunk]
            half = 0.5 * (H - L)
            x = (0.5 * (H + L))[:, None] + half[:, None] * NODES[None, :]
            k0, k1, dk0, dk1 = kernel_arrays(a[o, None], b[o, None], c[o, None], x)
            dv = dk0 * v0[o, None] + dk1 * v1[o, None]
            fx = b[o, None] * np.abs(dv) ** 2
            kv = half * (fx @ KRONROD_W)
            gv = half * (fx @ GAUSS_W)
            val += np.bincount(o, kv, minlength=t.size)
            err += np.bincount(o, np.abs(kv - gv), minlength=t.size)
    return val, err


def dissipation_identity_check(sym, v0hat, v1hat, r, t, rtol=1e-12):
    """Relative residual of the dissipation identity at one mode and time."""
    if t == 0:
        return 0.0
    return float(dissipation_identity_residuals(sym, v0hat, v1hat, r, t, rtol)[0])


def e1f_constant(p, eps):
    """C with E1 <= C F on r >= eps when delta <= theta <= alpha.

    r^(2 delta) <= eps^(2(delta - theta)) r^(2 theta) and rho >= rho(eps) since
    rho is nondecreasing there, so C = max(eps^(2(delta-theta)), 1/rho(eps)) / 2.
    """
    d, th = float(p.delta), float(p.theta)
    return 0.5 * max(eps ** (2 * (d - th)), 1.0 / float(rho(p, eps, eps)))


def check_e1f(p, sigma, sym, samples: StateSamples, eps):
    """True when E1 <= C F at every sample with C from :func:`e1f_constant`."""
    if p.delta > p.theta:
        raise HypothesisViolated("E1 <= C F needs delta <= theta (regularity-loss case)")
    C = e1f_constant(p, eps)
    out = energy_terms(p, sigma, sym, samples.r, samples.v, samples.vt, eps)
    return bool(np.all(out["e1"] <= C * out["f"] * (1 + 1e-12)))


def _hf_density(p, sigma, sym, n, v0, v1, t, which, eps):
    w = omega(n)

    def f(r):
        a, b, c = sym.coefficients(r)
        k0, k1, dk0, dk1 = kernel_arrays(a, b, c, t)
        x0, x1 = v0(r), v1(r)
        v = k0 * x0 + k1 * x1
        vt = dk0 * x0 + dk1 * x1
        if which == "e1":
            dens = 0.5 * (r ** (2 * float(p.delta)) * vt * vt + r ** (2 * float(p.alpha)) * v * v)
        else:
            rh = rho(p, eps, r)
            dens = b * vt * vt + rh * c * v * v
        return w * r ** (float(sigma) + n - 1) * dens

    return f


def _hf_integral(p, sigma, sym, n, v0, v1, t, which, eps, r_max, rtol):
    sym = as_symbol(sym) if sym is not None else as_symbol(p)
    eps = default_eps(sym, n) if eps is None else eps
    r_max = default_rmax(v0, v1) if r_max is None else r_max
    f = _hf_density(p, sigma, sym, n, v0, v1, t, which, eps)
    extra = list(v0.breakpoints()) + list(v1.breakpoints())
    return radial_integral(f, eps, max(r_max, 2 * eps), extra, rtol=rtol)


def hf_energy_integral(p, sigma, sym, n, v0, v1, t, *, eps=None, r_max=None, rtol=1e-9):
    """I(t): integral of E1 over |xi| >= eps for radial data."""
    return _hf_integral(p, sigma, sym, n, v0, v1, t, "e1", eps, r_max, rtol)


def hf_dissipation_integral(p, sigma, sym, n, v0, v1, t, *, eps=None, r_max=None, rtol=1e-9):
    """J(t): integral of F over |xi| >= eps for radial data."""
    return _hf_integral(p, sigma, sym, n, v0, v1, t, "f", eps, r_max, rtol)


def hf_data_factor(p, sigma, sym, n, v0, v1, beta, *, eps=None, r_max=None, rtol=1e-9):
    """D = integral over r >= eps of r^(sigma + 2(delta-theta)/beta) (a|v1|^2 + c|v0|^2)."""
    sym = as_symbol(sym) if sym is not None else as_symbol(p)
    eps = default_eps(sym, n) if eps is None else eps
    r_max = default_rmax(v0, v1) if r_max is None else r_max
    w = omega(n)
    q = float(sigma) + 2 * float(p.delta - p.theta) / beta

    def f(r):
        a, _, c = sym.coefficients(r)
        return w * r ** (q + n - 1) * (a * v1(r) ** 2 + c * v0(r) ** 2)

    extra = list(v0.breakpoints()) + list(v1.breakpoints())
    return radial_integral(f, eps, max(r_max, 2 * eps), extra, rtol=rtol)


def lyapunov_constant(p, eps, beta):
    """C_beta with I^(1+beta) <= C_beta D^beta J when theta < delta.

    Hoelder in each E1 term, (A + B)^(1+beta) <= 2^beta (A^(1+beta) + B^(1+beta)),
    rho^(-1/beta) <= K r^(2(delta-theta)/beta) on r >= eps and the dissipation
    identity a|v'|^2 + c|v|^2 <= a|v1|^2 + c|v0|^2 give
    C_beta = max(1, K)^beta / 2 with K = [2 (1 + eps^(-2 delta)) eps^(-(2 alpha + 2 delta - 4 theta))]^(1/beta).
    """
    if not p.theta < p.delta:
        raise HypothesisViolated("the Lyapunov surrogate needs theta < delta")
    d, al, th = (float(x) for x in (p.delta, p.alpha, p.theta))
    K = (2 * (1 + eps ** (-2 * d)) * eps ** (-(2 * al + 2 * d - 4 * th))) ** (1.0 / beta)
    return 0.5 * max(1.0, K) ** beta


def lyapunov_check(p, sigma, sym, n, v0, v1, beta, t, *, eps=None, r_max=None, rtol=1e-10):
    """Return (lhs, rhs) of I(t)^(1+beta) <= C_beta D^beta J(t)."""
    sym = as_symbol(sym) if sym is not None else as_symbol(p)
    eps = default_eps(sym, n) if eps is None else eps
    kw = dict(eps=eps, r_max=r_max, rtol=rtol)
    I = hf_energy_integral(p, sigma, sym, n, v0, v1, t, **kw)
    J = hf_dissipation_integral(p, sigma, sym, n, v0, v1, t, **kw)
    D = hf_data_factor(p, sigma, sym, n, v0, v1, beta, **kw)
    return I ** (1 + beta), lyapunov_constant(p, eps, beta) * D ** beta * J


def exponential_rate_constant(p, eps, sym=None):
    """c in I(t) <= (M/m) e^(-ct) I(0): c = 1 / (2 C M) with C from E1 <= C F."""
    return 1.0 / (2.0 * e1f_constant(p, eps) * equivalence_bound(p, eps, sym))


def fit_exponential_rate(times, values):
    """Least-squares c in log I = log I0 - c t."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = values > 0
    if keep.sum() < 2:
        raise InvalidParameters("need at least two positive values to fit a rate")
    slope, _ = np.polyfit(times[keep], np.log(values[keep]), 1)
    return float(-slope)
