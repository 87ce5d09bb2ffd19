"""Decay curves from the frequency-space solution and log-log rate fits."""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, InvalidParameters
from .spectra import NormRequest, RadialProfile, radial_norm

POLYNOMIAL, EXPONENTIAL, FLAT = "polynomial", "exponential", "flat"
#: mean second derivative of log10 value per log10(1+t) decade^2 below this is "exponential"
CONCAVITY_THRESHOLD = -0.05
FLAT_SLOPE = 0.02
MIN_TAIL_POINTS = 6


@dataclass(frozen=True)
class CurveQuery:
    """What to measure along t.

    ``observable`` is ``"norm"`` (||d_t^j d_x^gamma v|| over ``region``) or
    ``"hf_energy"`` (integral of E1 over |xi| >= eps with exponents ``p`` and
    weight ``sigma``).
    """

    sym: object
    n: int
    v0: RadialProfile
    v1: RadialProfile
    observable: str = "norm"
    j: int = 0
    gamma: int = 0
    region: str = "full"
    p: object = None
    sigma: float = 0.0
    eps: float | None = None
    r_max: float | None = None
    rtol: float = 1e-9

    def __post_init__(self):
        if self.observable not in ("norm", "hf_energy"):
            raise InvalidParameters(f"unknown observable {self.observable!r}")
        if self.observable == "hf_energy" and self.p is None:
            raise InvalidParameters("hf_energy needs the high-frequency exponents p")

    def evaluate(self, t):
        if self.observable == "norm":
            req = NormRequest(self.j, self.gamma, self.region, float(t))
            return radial_norm(self.sym, self.n, self.v0, self.v1, req,
                               eps=self.eps, r_max=self.r_max, rtol=self.rtol)
        from .energy import hf_energy_integral
        return hf_energy_integral(self.p, self.sigma, self.sym, self.n, self.v0, self.v1, float(t),
                                  eps=self.eps, r_max=self.r_max, rtol=self.rtol)

    def describe(self):
        out = {"observable": self.observable, "n": self.n, "v0": self.v0.describe(),
               "v1": self.v1.describe()}
        if self.observable == "norm":
            out.update(j=self.j, gamma=self.gamma, region=self.region)
        else:
            out.update(sigma=float(self.sigma))
        return out


@dataclass(frozen=True)
class DecayCurve:
    times: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape:
            raise InvalidParameters("times and values must be 1-D arrays of equal length")
        if t.size < 8:
            raise InvalidParameters("a decay curve needs at least 8 points")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise InvalidParameters("times must be positive and strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class RateFit:
    slope: float
    r_squared: float
    classification: str
    tail_points: int = 0
    curvature: float = 0.0

    @property
    def exponent(self):
        """Decay exponent -slope (positive for decay)."""
        return -self.slope


def resolve_threads(threads=None):
    if threads is None:
        threads = int(os.environ.get("FRACLAP_THREADS", "1") or 1)
    return max(1, int(threads))


def generate_curve(query: CurveQuery, t_min, t_max, points, threads=None) -> DecayCurve:
    """Values of ``query`` on a geometric grid of ``points`` times in [t_min, t_max]."""
    if not 0 < t_min < t_max:
        raise InvalidParameters("need 0 < t_min < t_max")
    if points < 8:
        raise InvalidParameters("need at least 8 points")
    times = np.geomspace(t_min, t_max, int(points))
    threads = resolve_threads(threads)
    if threads == 1:
        values = [query.evaluate(t) for t in times]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(query.evaluate, times))
    meta = {"query": query.describe(), "t_min": t_min, "t_max": t_max, "points": int(points)}
    return DecayCurve(times, np.array(values, dtype=float), meta)


def _tail(curve, tail_fraction):
    if not 0 < tail_fraction <= 1:
        raise InvalidParameters("tail_fraction must lie in (0, 1]")
    k = int(math.ceil(tail_fraction * curve.times.size - 1e-9))
    if k < MIN_TAIL_POINTS:
        raise InvalidParameters(
            f"tail window holds {k} points; need at least {MIN_TAIL_POINTS}")
    return curve.times[-k:], curve.values[-k:]


def fit_loglog(curve: DecayCurve, tail_fraction=0.5) -> RateFit:
    """Least-squares slope of log(value) against log(1 + t) on the last part of the grid.

    The tail is the last ``tail_fraction`` of the (geometric) grid points.
    Classification: ``exponential`` when the values underflow to zero or the
    tail is concave in log-log beyond CONCAVITY_THRESHOLD, ``flat`` when
    |slope| < FLAT_SLOPE, else ``polynomial``.
    """
    t, v = _tail(curve, tail_fraction)
    allv = curve.values
    if not np.all(np.isfinite(allv)) or np.any(allv < 0):
        raise DegenerateInput("curve values must be finite and nonnegative")
    if np.all(v == 0) and np.all(allv == 0):
        return RateFit(0.0, 1.0, FLAT, t.size, 0.0)
    zero = v == 0
    if zero.any():
        first = int(np.argmax(allv == 0))
        if np.all(allv[first:] == 0) and first >= 1:
            # decayed below the smallest double: faster than any power
            x = np.log(1 + curve.times[:first])
            y = np.log(allv[:first])
            slope = float(np.polyfit(x, y, 1)[0]) if first >= 2 else -math.inf
            r2 = _r2(x, y, slope) if first >= 2 else 1.0
            return RateFit(slope, r2, EXPONENTIAL, t.size, -math.inf)
        raise DegenerateInput("zero values inside the tail window")
    x = np.log(1 + t)
    y = np.log(v)
    slope = float(np.polyfit(x, y, 1)[0])
    r2 = _r2(x, y, slope)
    curv = _curvature(x, y)
    if curv < CONCAVITY_THRESHOLD:
        cls = EXPONENTIAL
    elif abs(slope) < FLAT_SLOPE:
        cls = FLAT
    else:
        cls = POLYNOMIAL
    return RateFit(slope, r2, cls, t.size, curv)


def _r2(x, y, slope):
    intercept = y.mean() - slope * x.mean()
    ss_res = float(np.sum((y - slope * x - intercept) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0:
        return 1.0
    return float(min(1.0, max(0.0, 1.0 - ss_res / ss_tot)))


def _curvature(x, y):
    # second derivative of log10 value w.r.t. log10(1+t), from a quadratic fit
    if x.size < 3 or np.ptp(x) == 0:
        return 0.0
    lx, ly = x / math.log(10), y / math.log(10)
    return float(2 * np.polyfit(lx, ly, 2)[0])


def write_csv(curve: DecayCurve, dest):
    """RFC-4180 CSV with header ``t,value`` and 17 significant digits.

    ``dest`` is a path or an open text stream.
    """
    if hasattr(dest, "write"):
        _write_rows(curve, dest)
        return
    with open(dest, "w", newline="", encoding="utf-8") as fh:
        _write_rows(curve, fh)


def _write_rows(curve, fh):
    w = csv.writer(fh, lineterminator="\r\n")
    w.writerow(["t", "value"])
    for t, v in zip(curve.times, curve.values):
        w.writerow([f"{t:.17g}", f"{v:.17g}"])


def read_csv(path) -> DecayCurve:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["t", "value"]:
        raise InvalidParameters(f"{path}: expected header 't,value'")
    try:
        data = np.array([[float(a), float(b)] for a, b in (r for r in rows[1:] if r)])
    except ValueError as exc:
        raise InvalidParameters(f"{path}: non-numeric row") from exc
    if data.size == 0:
        raise InvalidParameters(f"{path}: no data rows")
    return DecayCurve(data[:, 0], data[:, 1], {"source": str(path)})
