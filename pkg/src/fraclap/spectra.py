"""Radial initial data and frequency-space norms of the solution.

For radial data the L2 norm of the time/space derivatives of the solution is
the one-dimensional integral

    || d_t^j d_x^gamma v(t) ||^2 = omega_n * int r^(2 gamma) |d_t^j vhat(t, r)|^2 r^(n-1) dr

over the low region [0, eps), the high region [eps, R_max] or both.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameters, PreconditionError
from .quadrature import geometric_breaks, integrate
from .symbols import (SymbolTriple, as_symbol, effective_canonical,
                      epsilon_threshold, kernel_arrays, omega)

REGIONS = ("low", "high", "full")
# profile values below this count as zero when choosing R_max
NEGLIGIBLE = 1e-16
TAIL_RTOL = 1e-14


@dataclass(frozen=True)
class RadialProfile:
    """Radial modulus r -> |vhat(r)| of one initial datum.

    Build with the classmethods; ``kind`` and ``params`` record the recipe.
    """

    kind: str
    params: tuple = ()
    amplitude: float = 1.0
    table: tuple = field(default=(), repr=False)

    @classmethod
    def gaussian(cls, width=1.0, amplitude=1.0):
        """``amplitude * exp(-(r / width)^2)``; models L1 data with vhat(0) != 0."""
        if width <= 0:
            raise InvalidParameters("gaussian width must be positive")
        return cls("gaussian", (float(width),), float(amplitude))

    @classmethod
    def annulus(cls, r0, r1, smoothness=1.0, amplitude=1.0):
        """Smooth bump supported on [r0, r1], peak ``amplitude`` at the centre."""
        if not 0 <= r0 < r1 < math.inf:
            raise InvalidParameters("annulus needs 0 <= r0 < r1 < inf")
        if smoothness <= 0:
            raise InvalidParameters("smoothness must be positive")
        return cls("annulus", (float(r0), float(r1), float(smoothness)), float(amplitude))

    @classmethod
    def power_tail(cls, decay, cutoff=1.0, amplitude=1.0):
        """Zero below ``cutoff``, then ``amplitude * (r / cutoff)^-decay`` after a smooth onset.

        In dimension n the datum lies in H^s exactly for s < decay - n/2, so
        the tail fixes its Sobolev regularity.  The onset occupies
        [cutoff, 2 cutoff].
        """
        if decay <= 0 or cutoff <= 0:
            raise InvalidParameters("power_tail needs decay > 0 and cutoff > 0")
        return cls("power_tail", (float(decay), float(cutoff)), float(amplitude))

    @classmethod
    def from_table(cls, r, values):
        r = np.asarray(r, dtype=float)
        values = np.asarray(values, dtype=float)
        if r.ndim != 1 or r.shape != values.shape or r.size < 2:
            raise InvalidParameters("profile table needs two equal-length columns with >= 2 rows")
        if np.any(np.diff(r) <= 0) or r[0] < 0:
            raise InvalidParameters("profile table radii must be nonnegative and strictly increasing")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise InvalidParameters("profile table values must be finite and nonnegative")
        return cls("table", (), 1.0, (tuple(r), tuple(values)))

    @classmethod
    def from_csv(cls, path):
        """Read a two-column ``r,value`` CSV; a non-numeric header row is skipped."""
        rows = []
        with open(path, newline="") as fh:
            for i, row in enumerate(csv.reader(fh)):
                if not row or not "".join(row).strip():
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if i == 0:
                        continue
                    raise InvalidParameters(f"{path}: bad row {i + 1}: {row!r}")
        r, v = zip(*rows) if rows else ((), ())
        return cls.from_table(r, v)

    @classmethod
    def zero(cls):
        return cls("zero", (), 0.0)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        A = self.amplitude
        if self.kind == "zero":
            return np.zeros_like(r)
        if self.kind == "gaussian":
            (w,) = self.params
            return A * np.exp(-(r / w) ** 2)
        if self.kind == "annulus":
            r0, r1, s = self.params
            x = (2.0 * r - r0 - r1) / (r1 - r0)
            inside = np.abs(x) < 1
            xx = np.where(inside, x, 0.0)
            return np.where(inside, A * np.exp(s * (1.0 - 1.0 / (1.0 - xx * xx))), 0.0)
        if self.kind == "power_tail":
            decay, rc = self.params
            u = np.clip(r / rc - 1.0, 0.0, 1.0)
            onset = np.where(u >= 1, 1.0, _smoothstep(u))
            with np.errstate(divide="ignore"):
                tail = np.where(r > 0, (np.maximum(r, rc) / rc) ** -decay, 0.0)
            return A * onset * tail
        if self.kind == "table":
            rr, vv = (np.asarray(x) for x in self.table)
            return np.interp(r, rr, vv, left=0.0, right=0.0) * ((r >= rr[0]) & (r <= rr[-1]))
        raise InvalidParameters(f"unknown profile kind {self.kind!r}")

    @property
    def l1_proxy(self) -> float:
        """sup |vhat|, the bound ||vhat||_inf <= ||v||_L1 used for L1 data."""
        if self.kind == "table":
            return float(max(self.table[1]))
        return abs(self.amplitude)

    def sobolev_threshold(self, n):
        """sup of s with the datum in H^s(R^n): decay - n/2 for power tails, inf otherwise."""
        if self.kind == "power_tail":
            return self.params[0] - n / 2.0
        return math.inf

    def support(self):
        if self.kind == "zero":
            return (0.0, 0.0)
        if self.kind == "annulus":
            return self.params[:2]
        if self.kind == "power_tail":
            return (self.params[1], math.inf)
        if self.kind == "table":
            return (self.table[0][0], self.table[0][-1])
        return (0.0, math.inf)

    def negligible_radius(self) -> float:
        """Radius beyond which the profile stays below 1e-16 of its amplitude."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "gaussian":
            return self.params[0] * math.sqrt(-math.log(NEGLIGIBLE))
        if self.kind == "power_tail":
            decay, rc = self.params
            return rc * NEGLIGIBLE ** (-1.0 / decay)
        return float(self.support()[1])

    def breakpoints(self):
        if self.kind == "annulus":
            r0, r1, _ = self.params
            return [r0, 0.5 * (r0 + r1), r1]
        if self.kind == "power_tail":
            rc = self.params[1]
            return [rc, 2 * rc]
        if self.kind == "table" and len(self.table[0]) <= 2000:
            return list(self.table[0])
        return []

    def describe(self):
        return {"kind": self.kind, "params": list(self.params), "amplitude": self.amplitude}


def _smoothstep(u):
    # C-infinity transition from 0 at u=0 to 1 at u=1
    with np.errstate(divide="ignore", over="ignore"):
        f = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
        g = np.where(u < 1, np.exp(-1.0 / np.where(u < 1, 1.0 - u, 1.0)), 0.0)
    return f / (f + g)


@dataclass(frozen=True)
class NormRequest:
    """Which norm: time-derivative order j, |gamma|, region, time t."""

    j: int = 0
    gamma: int = 0
    region: str = "full"
    t: float = 0.0

    def __post_init__(self):
        if self.j not in (0, 1):
            raise InvalidParameters("j must be 0 or 1")
        if int(self.gamma) != self.gamma or self.gamma < 0:
            raise InvalidParameters("gamma must be a nonnegative integer")
        if self.region not in REGIONS:
            raise InvalidParameters(f"region must be one of {REGIONS}")
        if self.t < 0:
            raise InvalidParameters("t must be nonnegative")


def default_eps(sym, n):
    """Low/high cut for a symbol: epsilon_threshold of its low-frequency exponents."""
    sym = as_symbol(sym)
    try:
        return epsilon_threshold(effective_canonical(sym, "low", n))
    except Exception:
        return 0.5


def default_rmax(*profiles):
    return max([10.0] + [p.negligible_radius() for p in profiles if p.kind != "zero"])


def region_bounds(region, eps, r_max):
    return {"low": (0.0, eps), "high": (eps, r_max), "full": (0.0, r_max)}[region]


def radial_integral(f, lo, hi, extra_breaks=(), rtol=1e-9, extend_tail=True):
    """Integrate a radial density on [lo, hi] with geometric initial panels.

    When ``extend_tail`` is set and the density still carries weight at
    ``hi`` (tail proxy hi * f(hi) > 1e-14 * value), ``hi`` is doubled until
    it does not.
    """
    if hi <= lo:
        return 0.0
    bps = []
    if lo == 0:
        mid = min(hi, 1.0)
        bps.extend(geometric_breaks(0.0, mid))
        if hi > mid:
            bps.extend(geometric_breaks(mid, hi))
    else:
        bps.extend(geometric_breaks(lo, hi))
    bps.extend(b for b in extra_breaks if lo < b < hi)
    value, _, _ = integrate(f, bps, rtol=rtol)
    if not extend_tail:
        return value
    for _ in range(100):
        tail = hi * float(np.asarray(f(np.array([[hi]])))[0, 0])
        if tail <= TAIL_RTOL * abs(value) or hi > 1e30:
            break
        more, _, _ = integrate(f, geometric_breaks(hi, 64 * hi), rtol=rtol)
        value += more
        hi *= 64
    return value


def _norm_density(sym, n, v0, v1, j, gamma, t):
    w = omega(n)

    def f(r):
        a, b, c = sym.coefficients(r)
        k0, k1, dk0, dk1 = kernel_arrays(a, b, c, t)
        if j == 0:
            u = k0 * v0(r) + k1 * v1(r)
        else:
            u = dk0 * v0(r) + dk1 * v1(r)
        return w * r ** (2 * gamma + n - 1) * u * u

    return f


def radial_norm(sym, n, v0, v1, req: NormRequest, *, eps=None, r_max=None, rtol=1e-9):
    """sqrt of the frequency integral of r^(2 gamma) |d_t^j vhat|^2 over ``req.region``."""
    sym = as_symbol(sym)
    eps = default_eps(sym, n) if eps is None else eps
    r_max = default_rmax(v0, v1) if r_max is None else r_max
    lo, hi = region_bounds(req.region, eps, r_max)
    f = _norm_density(sym, n, v0, v1, req.j, req.gamma, req.t)
    extra = list(v0.breakpoints()) + list(v1.breakpoints())
    if req.region == "full":
        extra.append(eps)
    val = radial_integral(f, lo, hi, extra, rtol=rtol, extend_tail=req.region != "low")
    return math.sqrt(max(val, 0.0))


def parseval_split_check(sym, n, v0, v1, j, gamma, t, *, eps=None, r_max=None, rtol=1e-9):
    """Return (low, high, full) norms; full is integrated on its own panel layout."""
    sym = as_symbol(sym)
    eps = default_eps(sym, n) if eps is None else eps
    r_max = default_rmax(v0, v1) if r_max is None else r_max
    out = []
    for region in REGIONS:
        req = NormRequest(j, gamma, region, t)
        if region == "full":
            f = _norm_density(sym, n, v0, v1, j, gamma, t)
            extra = list(v0.breakpoints()) + list(v1.breakpoints())
            val = radial_integral(f, 0.0, r_max, extra, rtol=rtol)
            out.append(math.sqrt(max(val, 0.0)))
        else:
            out.append(radial_norm(sym, n, v0, v1, req, eps=eps, r_max=r_max, rtol=rtol))
    return tuple(out)


def lemma1_ratio(n, a, beta, k, eps, t, rtol=1e-10):
    """Q(t) = (1+t)^((n+k)/beta) * integral over |xi| <= eps of exp(-a |xi|^beta t) |xi|^k.

    The radius is rescaled by (a t)^(1/beta) so the decaying bump sits at unit
    scale, then x = u^(n+k) removes the endpoint singularity at the origin.
    """
    if not k > -n:
        raise PreconditionError(f"need k > -n, got k={k}, n={n}")
    if a <= 0 or beta <= 0 or eps <= 0 or t < 0:
        raise PreconditionError("need a, beta, eps > 0 and t >= 0")
    m = n + k
    p = beta / m
    if t == 0:
        upper, prefactor = eps ** m, 1.0

        def f(x):
            return np.ones_like(x)
    else:
        scale = (a * t) ** (1.0 / beta)
        upper = (eps * scale) ** m
        prefactor = ((1.0 + t) / t) ** (m / beta) * a ** (-m / beta)

        def f(x):
            return np.exp(-x ** p)

    breaks = list(geometric_breaks(0.0, min(upper, 1.0)))
    if upper > 1.0:
        breaks.extend(geometric_breaks(1.0, upper))
    val, _, _ = integrate(f, breaks, rtol=rtol)
    if t == 0:
        return omega(n) * val / m
    return prefactor * omega(n) * val / m
