"""Brute-force per-mode RK4 integrator used to certify the closed-form kernels.

Nothing here touches the eigenvalues beyond the step-size bound; the ODE
a v'' + b v' + c v = 0 is integrated directly as the first-order system
(v, v')' = (v', -(b v' + c v) / a).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StepTooLarge
from .symbols import SymbolTriple, as_symbol, roots, solution_arrays

STABLE_STEP = 0.1
# increment size beyond which a step-matrix power is stored in full
SWITCH = 0.5


@dataclass(frozen=True)
class ModeState:
    v: complex
    vt: complex
    t: float


def _spectral_radius(a, b, c):
    lp, lm = roots(a, b, c)
    return np.maximum(np.abs(lp), np.abs(lm))


def rk4_steps(a, b, c, v, vt, t_end, nsteps):
    """Integrate many modes at once, each with its own step t_end / nsteps."""
    a, b, c, v, vt, t_end = np.broadcast_arrays(
        *(np.asarray(x) for x in (a, b, c, v, vt, t_end)))
    v = v.astype(complex)
    vt = vt.astype(complex)
    h = t_end / nsteps
    p = -b / a
    q = -c / a
    for _ in range(int(nsteps)):
        k1v, k1w = vt, p * vt + q * v
        v2, w2 = v + 0.5 * h * k1v, vt + 0.5 * h * k1w
        k2v, k2w = w2, p * w2 + q * v2
        v3, w3 = v + 0.5 * h * k2v, vt + 0.5 * h * k2w
        k3v, k3w = w3, p * w3 + q * v3
        v4, w4 = v + h * k3v, vt + h * k3w
        k4v, k4w = w4, p * w4 + q * v4
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        vt = vt + h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w)
    return v, vt


def rk4_increment(a, b, c, h):
    """RK4 step matrix minus the identity, stacked over modes.

    For a linear autonomous system a classical RK4 step is exactly
    I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24; the identity is kept apart so
    that tiny steps do not lose the increment to rounding.
    """
    a, b, c, h = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, b, c, h)))
    A = np.zeros(a.shape + (2, 2))
    A[..., 0, 1] = 1.0
    A[..., 1, 0] = -c / a
    A[..., 1, 1] = -b / a
    hA = h[..., None, None] * A
    hA2 = hA @ hA
    return hA + hA2 / 2 + (hA2 @ hA) / 6 + (hA2 @ hA2) / 24


def _power_increment(D, n):
    """(I + D)^n by binary powering, returned as (X, full) per mode.

    While a factor is close to the identity it is carried as its increment X
    (matrix = I + X) so tiny steps keep their precision; once an entry
    exceeds SWITCH it is stored as the full matrix (``full`` True), which
    keeps decayed products accurate relative to their own size.
    """
    eye = np.eye(2)
    base, bfull = D.copy(), np.zeros(D.shape[:-2], dtype=bool)
    acc, afull = np.zeros_like(D), np.zeros_like(bfull)

    def promote(X, full):
        grow = ~full & (np.abs(X).max(axis=(-2, -1)) > SWITCH)
        X = np.where(grow[..., None, None], X + eye, X)
        return X, full | grow

    while n:
        if n & 1:
            prod = acc @ base
            f = bfull[..., None, None]
            g = afull[..., None, None]
            acc = np.where(g, np.where(f, prod, acc + prod),
                           np.where(f, base + prod, acc + base + prod))
            afull = afull | bfull
            acc, afull = promote(acc, afull)
        sq = base @ base
        base = np.where(bfull[..., None, None], sq, 2 * base + sq)
        base, bfull = promote(base, bfull)
        n >>= 1
    return acc, afull


def rk4_propagate(a, b, c, v, vt, t_end, nsteps):
    """Same iterate as :func:`rk4_steps`, via binary powering of the step matrix."""
    a, b, c, v, vt, t_end = np.broadcast_arrays(
        *(np.asarray(x) for x in (a, b, c, v, vt, t_end)))
    X, full = _power_increment(rk4_increment(a, b, c, t_end / nsteps), int(nsteps))
    state = np.stack([v.astype(complex), vt.astype(complex)], axis=-1)
    moved = np.einsum("...ij,...j->...i", X, state)
    out = np.where(full[..., None], moved, state + moved)
    return out[..., 0], out[..., 1]


def rk4_mode(sym, r, v0hat, v1hat, t_end, dt) -> ModeState:
    """Classical RK4 for one Fourier mode with step at most ``dt``.

    Raises StepTooLarge unless dt <= 0.1 / max(1, |lambda+|, |lambda-|).
    """
    sym = as_symbol(sym)
    a, b, c = (float(x) for x in sym.coefficients(r))
    rho = float(_spectral_radius(a, b, c))
    if dt <= 0 or dt > STABLE_STEP / max(1.0, rho):
        raise StepTooLarge(f"dt={dt} exceeds {STABLE_STEP}/max(1, {rho:.4g})")
    if t_end == 0:
        return ModeState(complex(v0hat), complex(v1hat), 0.0)
    nsteps = math.ceil(t_end / dt - 1e-12)
    v, vt = rk4_steps(a, b, c, v0hat, v1hat, t_end, nsteps)
    return ModeState(complex(v), complex(vt), float(t_end))


def _rel_discrepancy(v, vt, ref_v, ref_vt):
    scale = np.maximum(np.abs(ref_v), np.abs(ref_vt))
    diff = np.maximum(np.abs(v - ref_v), np.abs(vt - ref_vt))
    return np.where(scale > 0, diff / np.where(scale > 0, scale, 1.0), diff)


def rk4_converged(a, b, c, v0, v1, t, target=1e-11, start_step=0.05, max_halvings=12):
    """RK4 with step halving until successive runs agree to ``target`` (relative).

    Returns the Richardson-improved state and the final self-convergence gap.
    """
    a, b, c, v0, v1, t = (np.atleast_1d(np.asarray(x)) for x in np.broadcast_arrays(a, b, c, v0, v1, t))
    stiff = np.max(t * np.maximum(1.0, _spectral_radius(a, b, c)))
    nsteps = max(8, math.ceil(stiff / start_step))
    prev = rk4_propagate(a, b, c, v0, v1, t, nsteps)
    gap = np.inf
    for _ in range(max_halvings):
        nsteps *= 2
        cur = rk4_propagate(a, b, c, v0, v1, t, nsteps)
        gap = float(np.max(_rel_discrepancy(*cur, *prev)))
        # Richardson for a fourth-order method
        best = tuple(x + (x - y) / 15.0 for x, y in zip(cur, prev))
        prev = cur
        if gap <= target:
            break
    return best, gap


def kernel_agreement(sym, points, v0hat=1.0, v1hat=1.0):
    """Worst relative discrepancy between closed form and RK4 over (r, t) ``points``."""
    sym = as_symbol(sym)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    r, t = pts[:, 0], pts[:, 1]
    a, b, c = sym.coefficients(r)
    v_cf, vt_cf = solution_arrays(a, b, c, t, v0hat, v1hat)
    (v_rk, vt_rk), _ = rk4_converged(a, b, c, v0hat, v1hat, t)
    return float(np.max(_rel_discrepancy(v_rk, vt_rk, v_cf, vt_cf)))


def confluent_radii(sym: SymbolTriple, r_lo=1e-3, r_hi=1e2, samples=4000):
    """Radii where b^2 = 4ac, located by sign changes and bisection."""
    from scipy.optimize import brentq

    def disc(r):
        a, b, c = sym.coefficients(r)
        return float(b * b - 4 * a * c)

    grid = np.geomspace(r_lo, r_hi, samples)
    a, b, c = sym.coefficients(grid)
    d = b * b - 4 * a * c
    out = []
    for i in np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]:
        out.append(brentq(disc, grid[i], grid[i + 1], xtol=1e-16, rtol=1e-15))
    return out
