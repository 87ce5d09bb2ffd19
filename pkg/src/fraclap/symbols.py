"""Fourier symbols, eigenvalues and closed-form solution kernels.

Every Fourier mode of the equation solves the scalar ODE

    a(r) v'' + b(r) v' + c(r) v = 0,    v(0) = v0hat,  v'(0) = v1hat,

with r = |xi|.  For the canonical problem a = 1 + r^(2 delta),
b = r^(2 theta), c = r^(2 alpha).  The kernels K0, K1 are written through
the mean m = -b / (2a) and half-gap d of the two roots,

    K1 = t e^{mt} sinh(dt)/(dt),   K0 = e^{mt} (cosh(dt) - m t sinh(dt)/(dt)),

which depend on d only through d^2.  This removes the cancellation in
(e^{l+ t} - e^{l- t}) / (l+ - l-) near coincident roots and reduces to the
confluent formulas t e^{lt} and (1 - lt) e^{lt} when d = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InadmissibleExponents, InvalidParameters

#: relative root gap below which an Eigenpair is flagged degenerate
DEGENERATE_RTOL = 1e-6
#: |(dt)^2| below which cosh/sinhc are summed as power series
SERIES_CUTOFF = 1e-3


@dataclass(frozen=True)
class CanonicalParams:
    """Exponents (delta, alpha, theta) of the canonical equation and dimension n.

    Accepts floats or :class:`fractions.Fraction`; the rate engine keeps
    Fractions exact.
    """

    delta: float
    alpha: float
    theta: float
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidParameters(f"dimension n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not (self.delta >= 0 and self.alpha >= 0):
            raise InvalidParameters(f"need delta, alpha >= 0, got delta={self.delta}, alpha={self.alpha}")
        if not (0 <= self.theta <= self.alpha):
            raise InvalidParameters(f"need 0 <= theta <= alpha, got theta={self.theta}, alpha={self.alpha}")

    @property
    def real_branch(self) -> bool:
        """True when alpha > 2 theta (real eigenvalues at low frequency)."""
        return self.alpha > 2 * self.theta

    @property
    def regularity_loss(self) -> bool:
        return self.theta < self.delta

    def as_dict(self):
        return {"delta": float(self.delta), "alpha": float(self.alpha),
                "theta": float(self.theta), "n": self.n}


@dataclass(frozen=True)
class GeneralSymbol:
    """Finite sum of powers  s(r) = sum_i w_i r^(2 e_i)  with w_i > 0, e_i >= 0."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((w, e) for w, e in self.terms)
        if not terms:
            raise InvalidParameters("a GeneralSymbol needs at least one term")
        for w, e in terms:
            if not w > 0:
                raise InvalidParameters(f"weights must be positive, got {w}")
            if not e >= 0:
                raise InvalidParameters(f"exponents must be nonnegative, got {e}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def power(cls, exponent, weight=1) -> "GeneralSymbol":
        return cls(((weight, exponent),))

    @classmethod
    def parse(cls, text: str) -> "GeneralSymbol":
        """Parse ``"1:0,1:2"`` (comma separated weight:exponent pairs)."""
        terms = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                w, e = chunk.split(":")
                terms.append((Fraction(w.strip()), Fraction(e.strip())))
            except ValueError as exc:
                raise InvalidParameters(f"bad symbol term {chunk!r}; expected weight:exponent") from exc
        return cls(tuple(terms))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for w, e in self.terms:
            out = out + float(w) * r ** (2.0 * float(e))
        return out

    @property
    def low_exponent(self):
        return min(e for _, e in self.terms)

    @property
    def high_exponent(self):
        return max(e for _, e in self.terms)

    @property
    def constant_weight(self):
        return sum((w for w, e in self.terms if e == 0), 0)

    def nonconstant(self) -> tuple:
        return tuple((w, e) for w, e in self.terms if e != 0)

    def __str__(self):
        return " + ".join(f"{w}*r^{2 * e}" for w, e in self.terms)


@dataclass(frozen=True)
class SymbolTriple:
    """Coefficients of v_tt, v_t and v in the Fourier-space ODE.

    ``b`` may be ``None`` for the undamped equation.
    """

    a: GeneralSymbol
    b: GeneralSymbol | None
    c: GeneralSymbol

    def __post_init__(self):
        if self.a.constant_weight < 1:
            raise InvalidParameters("symbol a must contain a constant term of weight >= 1")

    @classmethod
    def from_canonical(cls, p: CanonicalParams) -> "SymbolTriple":
        """Literal symbols 1 + r^(2 delta), r^(2 theta), r^(2 alpha).

        With delta = 0 this gives a = 2, as written in the equation.
        """
        if p.delta == 0:
            a = GeneralSymbol(((2, 0),))
        else:
            a = GeneralSymbol(((1, 0), (1, p.delta)))
        return cls(a, GeneralSymbol.power(p.theta), GeneralSymbol.power(p.alpha))

    def coefficients(self, r):
        r = np.asarray(r, dtype=float)
        b = self.b(r) if self.b is not None else np.zeros_like(r)
        return self.a(r), b, self.c(r)

    def as_dict(self):
        enc = lambda s: None if s is None else [[float(w), float(e)] for w, e in s.terms]
        return {"a": enc(self.a), "b": enc(self.b), "c": enc(self.c)}


@dataclass(frozen=True)
class Eigenpair:
    lambda_plus: complex
    lambda_minus: complex
    degenerate: bool


@dataclass(frozen=True)
class KernelQuad:
    """K0, K1 and their time derivatives at one (t, r).

    The kernels of a real-coefficient ODE are real, so the fields hold floats.
    """

    k0: float
    k1: float
    dk0: float
    dk1: float


# ---------------------------------------------------------------------------
# vectorised core


def roots(a, b, c):
    """Roots of a l^2 + b l + c = 0 for arrays with a > 0, b >= 0, c >= 0.

    Returns complex arrays (lam_plus, lam_minus) ordered by real part, then
    imaginary part.  Real roots use the cancellation-free form q = -(b+sqrt)/2.
    """
    a, b, c = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, b, c)))
    disc = b * b - 4.0 * a * c
    sq = np.sqrt(np.abs(disc))
    real = disc >= 0
    q = -0.5 * (b + sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam_minus_r = q / a
        lam_plus_r = np.where(q != 0, c / np.where(q != 0, q, 1.0), 0.0)
    re = -b / (2.0 * a)
    im = sq / (2.0 * a)
    lam_plus = np.where(real, lam_plus_r + 0j, re + 1j * im)
    lam_minus = np.where(real, lam_minus_r + 0j, re - 1j * im)
    return lam_plus, lam_minus


def _cosh_sinhc(w2):
    """cosh(sqrt(w2)) and sinh(sqrt(w2))/sqrt(w2) for real w2 of either sign."""
    w2 = np.asarray(w2, dtype=float)
    C = np.empty_like(w2)
    S = np.empty_like(w2)
    small = np.abs(w2) < SERIES_CUTOFF
    pos = (w2 >= SERIES_CUTOFF)
    neg = (w2 <= -SERIES_CUTOFF)
    if small.any():
        z = w2[small]
        # Horner on z; truncation error < z^7/14! ~ 1e-32 for |z| < 1e-3
        c_acc = np.ones_like(z)
        s_acc = np.ones_like(z)
        for k in range(6, 0, -1):
            c_acc = 1.0 + z * c_acc / ((2 * k - 1) * (2 * k))
            s_acc = 1.0 + z * s_acc / ((2 * k) * (2 * k + 1))
        C[small] = c_acc
        S[small] = s_acc
    if pos.any():
        w = np.sqrt(w2[pos])
        C[pos] = np.cosh(w)
        S[pos] = np.sinh(w) / w
    if neg.any():
        w = np.sqrt(-w2[neg])
        C[neg] = np.cos(w)
        S[neg] = np.sin(w) / w
    return C, S


def kernel_arrays(a, b, c, t):
    """Vectorised (K0, K1, dK0, dK1) for broadcastable coefficient arrays and t."""
    a, b, c, t = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, b, c, t)))
    shape = a.shape
    a, b, c, t = (x.ravel() for x in (a, b, c, t))
    m = -b / (2.0 * a)
    d2 = (b * b - 4.0 * a * c) / (4.0 * a * a)
    w2 = d2 * t * t
    k0 = np.empty_like(t)
    k1 = np.empty_like(t)
    dk1 = np.empty_like(t)

    # well separated real roots: plain exponentials (cosh would overflow)
    sep = w2 > 1.0
    near = ~sep
    if near.any():
        tn, mn = t[near], m[near]
        C, S = _cosh_sinhc(w2[near])
        e = np.exp(mn * tn)
        k1[near] = tn * e * S
        k0[near] = e * (C - mn * tn * S)
        dk1[near] = e * (C + mn * tn * S)
    if sep.any():
        lp, lm = roots(a[sep], b[sep], c[sep])
        lp, lm = lp.real, lm.real
        ts = t[sep]
        gap = np.sqrt(b[sep] ** 2 - 4.0 * a[sep] * c[sep]) / a[sep]
        ep, em = np.exp(lp * ts), np.exp(lm * ts)
        k1[sep] = (ep - em) / gap
        k0[sep] = (lp * em - lm * ep) / gap
        dk1[sep] = (lp * ep - lm * em) / gap
    dk0 = -(c / a) * k1
    return tuple(x.reshape(shape) for x in (k0, k1, dk0, dk1))


def solution_arrays(a, b, c, t, v0hat, v1hat):
    k0, k1, dk0, dk1 = kernel_arrays(a, b, c, t)
    return k0 * v0hat + k1 * v1hat, dk0 * v0hat + dk1 * v1hat


# ---------------------------------------------------------------------------
# scalar operations


def eigenvalues(sym: SymbolTriple, r: float) -> Eigenpair:
    if r < 0:
        raise InvalidParameters("r must be nonnegative")
    a, b, c = sym.coefficients(r)
    lp, lm = roots(a, b, c)
    lp, lm = complex(lp), complex(lm)
    scale = max(abs(lp), abs(lm), 1e-300)
    return Eigenpair(lp, lm, abs(lp - lm) <= DEGENERATE_RTOL * scale)


def kernels_at(sym: SymbolTriple, t: float, r: float) -> KernelQuad:
    if t < 0 or r < 0:
        raise InvalidParameters("t and r must be nonnegative")
    a, b, c = sym.coefficients(r)
    return KernelQuad(*(float(x) for x in kernel_arrays(a, b, c, t)))


def solution_hat(sym: SymbolTriple, t: float, r: float, v0hat: complex, v1hat: complex):
    """Return (vhat, vthat) at time t for mode r."""
    k = kernels_at(sym, t, r)
    return k.k0 * v0hat + k.k1 * v1hat, k.dk0 * v0hat + k.dk1 * v1hat


def epsilon_threshold(p: CanonicalParams) -> float:
    """Low/high frequency cut: (1/4)^(1/(alpha-2theta)) if alpha > 2 theta, else 1/2."""
    if p.alpha > 2 * p.theta:
        return 0.25 ** (1.0 / float(p.alpha - 2 * p.theta))
    return 0.5


def effective_canonical(sym: SymbolTriple, region: str, n: int) -> CanonicalParams:
    """Single-power exponents equivalent to ``sym`` on the low or high region.

    The constant term of ``a`` stands for the "1 +" and is excluded; if
    nothing else remains delta is 0.
    """
    if region not in ("low", "high"):
        raise InvalidParameters(f"region must be 'low' or 'high', got {region!r}")
    if sym.b is None:
        raise InadmissibleExponents("undamped symbol (b = 0) has no damping exponent theta")
    pick = min if region == "low" else max
    rest = sym.a.nonconstant()
    delta = pick(e for _, e in rest) if rest else 0
    theta = pick(e for _, e in sym.b.terms)
    alpha = pick(e for _, e in sym.c.terms)
    if theta > alpha:
        raise InadmissibleExponents(
            f"effective theta={theta} exceeds alpha={alpha} on the {region} region")
    return CanonicalParams(delta, alpha, theta, n)


def omega(n: int) -> float:
    """Surface area of the unit sphere in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def as_symbol(obj) -> SymbolTriple:
    if isinstance(obj, SymbolTriple):
        return obj
    if isinstance(obj, CanonicalParams):
        return SymbolTriple.from_canonical(obj)
    raise TypeError(f"expected SymbolTriple or CanonicalParams, got {type(obj).__name__}")


def real_branch_brackets(p: CanonicalParams, r):
    """Signed margins of the explicit low-frequency eigenvalue brackets.

    For alpha > 2 theta and 0 < r < eps the roots of the canonical symbol
    satisfy

        -4(2 - sqrt2) r^(2(alpha-theta)) <= lam+ <= -r^(2(alpha-theta)),
        -r^(2 theta) <= lam- <= -(1 + 1/sqrt2) r^(2 theta) / 4,
        r^(2 theta) / (2 sqrt2) <= lam+ - lam- <= r^(2 theta).

    Returns a dict of arrays ``upper - lower`` scaled by the bracket size, so
    a bracket holds where its margin is >= 0.  Margins are relative, which
    keeps the check meaningful where the roots underflow toward zero.
    """
    if not p.real_branch:
        raise InvalidParameters("brackets apply only when alpha > 2 theta")
    r = np.asarray(r, dtype=float)
    sym = SymbolTriple.from_canonical(p)
    a, b, c = sym.coefficients(r)
    lp, lm = roots(a, b, c)
    lp, lm = lp.real, lm.real
    gap = np.sqrt(np.maximum(b * b - 4 * a * c, 0.0)) / a
    s2 = math.sqrt(2.0)
    pa = r ** (2.0 * float(p.alpha - p.theta))
    pt = r ** (2.0 * float(p.theta))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = {
            "lam_plus_lower": (lp + 4 * (2 - s2) * pa) / pa,
            "lam_plus_upper": (-pa - lp) / pa,
            "lam_minus_lower": (lm + pt) / pt,
            "lam_minus_upper": (-(1 + 1 / s2) * pt / 4 - lm) / pt,
            "gap_lower": (gap - pt / (2 * s2)) / pt,
            "gap_upper": (pt - gap) / pt,
        }
    return out


def bracket_tolerance(p: CanonicalParams, r):
    """Rounding allowance for :func:`real_branch_brackets` margins.

    The tight brackets compare r^x with x a float exponent; an exponent
    rounding error of ulp(x) changes r^x by a relative x ulp |ln r|, so the
    allowance is a few ulps times (1 + 2 (alpha + theta) |ln r|).
    """
    r = np.asarray(r, dtype=float)
    scale = 2.0 * (float(p.alpha) + float(p.theta))
    return 4 * np.finfo(float).eps * (1.0 + scale * np.abs(np.log(r)))
