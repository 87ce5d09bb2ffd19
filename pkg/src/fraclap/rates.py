"""Predicted decay rates and required data regularity.

Every norm splits into a low-frequency part, decaying polynomially from the
L1 size of the data (one exponent per datum v0, v1), and a high-frequency
part that decays exponentially when delta <= theta and like
(1+t)^(-1/(2 beta)) at the price of (delta - theta)/beta extra derivatives
when theta < delta.

All arithmetic is generic: pass :class:`fractions.Fraction` exponents (or
ints) and every exponent, s and r comes back as an exact Fraction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BetaRequired, HypothesisNotMet, InvalidParameters, ThetaOutOfRange
from .symbols import (CanonicalParams, GeneralSymbol, SymbolTriple,
                      effective_canonical)

EXPONENTIAL = "exponential"
POLYNOMIAL = "polynomial"
TARGETS = ("v", "vt")


def _exact(x):
    """ints become Fractions so that n/4 and friends stay exact."""
    if isinstance(x, bool):
        raise InvalidParameters("boolean is not a number here")
    if isinstance(x, int):
        return Fraction(x)
    return x


@dataclass(frozen=True)
class DecayPrediction:
    """Predicted rate for one norm.

    ``per_term`` maps v0_low, v1_low and high to an exponent or the string
    ``"exponential"``; ``exponent`` is the slowest of them (None when every
    term is exponential).
    """

    kind: str
    exponent: object
    per_term: dict
    required_s: object
    required_r: object
    beta: object = None
    case_label: str = ""
    target: str = "v"
    gamma: int = 0
    quantity: str = ""

    def as_dict(self):
        return {
            "quantity": self.quantity,
            "target": self.target,
            "gamma": self.gamma,
            "kind": self.kind,
            "exponent": _jsonable(self.exponent),
            "per_term": {k: _jsonable(v) for k, v in self.per_term.items()},
            "s": _jsonable(self.required_s),
            "r": _jsonable(self.required_r),
            "beta": _jsonable(self.beta),
            "case": self.case_label,
        }


def _jsonable(x):
    if x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return {"value": float(x), "exact": str(x)}
    return {"value": float(x), "exact": None}


def fmt(x):
    """Short text for an exponent: exact fraction when available."""
    if x is None:
        return "-"
    if isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return str(x)
    return f"{float(x):.6g}"


@dataclass(frozen=True)
class RateQuery:
    """A norm to predict: d_x^gamma v (target v) or d_x^gamma v_t (target vt).

    ``p`` is a CanonicalParams or a SymbolTriple with dimension ``n``.
    """

    p: object
    target: str = "v"
    gamma: int = 0
    beta: object = None
    n: int | None = None

    def __post_init__(self):
        if self.target not in TARGETS:
            raise InvalidParameters(f"target must be one of {TARGETS}, got {self.target!r}")
        if isinstance(self.gamma, bool) or int(self.gamma) != self.gamma or self.gamma < 0:
            raise InvalidParameters("gamma must be a nonnegative integer")
        if self.beta is not None and not self.beta > 0:
            raise InvalidParameters("beta must be positive")
        if isinstance(self.p, SymbolTriple) and self.n is None:
            raise InvalidParameters("a SymbolTriple query needs the dimension n")

    def params(self, region):
        if isinstance(self.p, CanonicalParams):
            return self.p
        return effective_canonical(self.p, region, self.n)


def _slowest(terms):
    polys = [v for v in terms.values() if v != EXPONENTIAL]
    return min(polys) if polys else None


def low_freq_rate(q: RateQuery) -> dict:
    """Exponents of the v0 and v1 low-frequency terms, with the branch label.

    Returns ``{"v0_low": e0, "v1_low": e1, "case": label}`` where e may be
    ``"exponential"``.
    """
    p = q.params("low")
    al, th = _exact(p.alpha), _exact(p.theta)
    n, g = Fraction(p.n), Fraction(int(q.gamma))
    x = n / 4 + g / 2
    if al > 2 * th:
        if q.target == "v":
            if not n + 2 * g > 4 * th:
                raise HypothesisNotMet(f"real branch, target v needs n + 2|gamma| > 4 theta "
                                       f"(n={p.n}, gamma={q.gamma}, theta={th})")
            return {"v0_low": x / (al - th), "v1_low": (x - th) / (al - th),
                    "case": "real branch, v"}
        if n + 2 * g < 2 * al and x <= th < al / 2:
            return {"v0_low": x / (al - th) + 1, "v1_low": x / th,
                    "case": "real branch, v_t, theta in [n/4+|gamma|/2, alpha/2)"}
        return {"v0_low": x / (al - th) + 1, "v1_low": (x - th) / (al - th) + 1,
                "case": "real branch, v_t"}
    if th == 0:
        # alpha <= 2 theta = 0: both roots of a l^2 + l + 1 sit at real part <= -1/4
        return {"v0_low": EXPONENTIAL, "v1_low": EXPONENTIAL, "case": "theta = alpha = 0, e^{-t/4}"}
    if q.target == "v":
        if not n + 2 * g > 2 * al:
            raise HypothesisNotMet(f"complex branch, target v needs n + 2|gamma| > 2 alpha "
                                   f"(n={p.n}, gamma={q.gamma}, alpha={al})")
        return {"v0_low": x / th, "v1_low": (x - al / 2) / th, "case": "complex branch, v"}
    return {"v0_low": (x + al / 2) / th, "v1_low": x / th, "case": "complex branch, v_t"}


def default_sigma(p: CanonicalParams, target, gamma):
    """2|gamma| - 2 alpha for v-norms and 2|gamma| - 2 delta for v_t-norms."""
    g = Fraction(int(gamma))
    return 2 * g - 2 * _exact(p.alpha if target == "v" else p.delta)


def high_freq_rate(p: CanonicalParams, sigma, beta=None):
    """(kind, s, r, energy exponent) of the high-frequency energy integral.

    delta <= theta: exponential with s = alpha + sigma/2, r = delta + sigma/2.
    theta < delta: energy decays like (1+t)^(-1/beta) with
    s = alpha + (delta-theta)/beta + sigma/2 and r = delta + (delta-theta)/beta + sigma/2.
    """
    d, al, th = _exact(p.delta), _exact(p.alpha), _exact(p.theta)
    sigma = _exact(sigma)
    if d <= th:
        return EXPONENTIAL, al + sigma / 2, d + sigma / 2, None
    if beta is None:
        raise BetaRequired("theta < delta: the regularity-loss rate needs beta")
    beta = _exact(beta)
    if not beta > 0:
        raise InvalidParameters("beta must be positive")
    extra = (d - th) / beta
    return POLYNOMIAL, al + extra + sigma / 2, d + extra + sigma / 2, 1 / beta


def choose_beta(low_exponent):
    """beta with 1/(2 beta) equal to the low-frequency exponent."""
    if low_exponent == EXPONENTIAL or low_exponent is None:
        raise InvalidParameters("exponential low-frequency decay has no matching beta")
    low_exponent = _exact(low_exponent)
    if not low_exponent > 0:
        raise InvalidParameters("low exponent must be positive")
    return 1 / (2 * low_exponent)


def implied_beta(p: CanonicalParams, sigma, sobolev_order):
    """beta at which data of Sobolev order ``sobolev_order`` exactly meets s.

    Solves sobolev_order = alpha + (delta - theta)/beta + sigma/2; the
    high-frequency energy then decays like (1+t)^(-1/beta).
    """
    d, al, th = _exact(p.delta), _exact(p.alpha), _exact(p.theta)
    if not th < d:
        raise InvalidParameters("beta only enters when theta < delta")
    room = _exact(sobolev_order) - al - _exact(sigma) / 2
    if not room > 0:
        raise InvalidParameters("data too rough: no positive beta reaches this Sobolev order")
    return (d - th) / room


def combined_rate(q: RateQuery) -> DecayPrediction:
    low = low_freq_rate(q)
    hp = q.params("high")
    sigma = default_sigma(hp, q.target, q.gamma)
    beta = q.beta
    if beta is None and hp.theta < hp.delta:
        slow = _slowest({k: low[k] for k in ("v0_low", "v1_low")})
        if slow is None:
            raise BetaRequired("no polynomial low-frequency term to match beta against; pass beta")
        beta = choose_beta(slow)
    kind, s, r, energy_exp = high_freq_rate(hp, sigma, beta)
    high = EXPONENTIAL if kind == EXPONENTIAL else energy_exp / 2
    per_term = {"v0_low": low["v0_low"], "v1_low": low["v1_low"], "high": high}
    slow = _slowest(per_term)
    label = low["case"] + ("; high: exponential" if kind == EXPONENTIAL else "; high: regularity loss")
    return DecayPrediction(
        kind=EXPONENTIAL if slow is None else POLYNOMIAL,
        exponent=slow,
        per_term=per_term,
        required_s=s,
        required_r=r,
        beta=beta if kind != EXPONENTIAL else None,
        case_label=label,
        target=q.target,
        gamma=int(q.gamma),
    )


# ---------------------------------------------------------------------------
# application presets

PRESET_THETA = {
    "wave": (Fraction(0), Fraction(1)),
    "plate": (Fraction(0), Fraction(2)),
    "plate_no_ri": (Fraction(0), Fraction(2)),
    "ibq": (Fraction(0), Fraction(1)),
}

PRESET_QUANTITIES = {
    "wave": [("||v||", "v", 0), ("||v_t||", "vt", 0), ("||grad v||", "v", 1)],
    "plate": [("||v||", "v", 0), ("||v_t||", "vt", 0), ("||grad v_t||", "vt", 1),
              ("||lap v||", "v", 2)],
    "ibq": [("||v||", "v", 0), ("||grad v||", "v", 1), ("||lap v||", "v", 2),
            ("||v_t||", "vt", 0), ("||grad v_t||", "vt", 1)],
}
PRESET_QUANTITIES["plate_no_ri"] = PRESET_QUANTITIES["plate"]


def preset_symbol(name, theta, literal_delta0=False) -> SymbolTriple:
    """Fourier symbols of the application equations."""
    if name not in PRESET_THETA:
        raise InvalidParameters(f"unknown preset {name!r}; choose from {sorted(PRESET_THETA)}")
    lo, hi = PRESET_THETA[name]
    theta = _exact(theta)
    if not lo <= theta <= hi:
        raise ThetaOutOfRange(f"{name} needs theta in [{lo}, {hi}], got {theta}")
    one = GeneralSymbol(((1, 0),))
    unit_a = GeneralSymbol(((2, 0),)) if literal_delta0 else one
    b = GeneralSymbol.power(theta)
    if name == "wave":
        return SymbolTriple(unit_a, b, GeneralSymbol.power(1))
    if name == "plate":
        return SymbolTriple(GeneralSymbol(((1, 0), (1, 1))), b, GeneralSymbol.power(2))
    if name == "plate_no_ri":
        return SymbolTriple(unit_a, b, GeneralSymbol.power(2))
    return SymbolTriple(GeneralSymbol(((1, 0), (1, 1))), b, GeneralSymbol(((1, 1), (1, 2))))


@dataclass(frozen=True)
class PresetRow:
    quantity: str
    target: str
    gamma: int
    prediction: DecayPrediction | None
    note: str = ""

    def as_dict(self):
        if self.prediction is None:
            return {"quantity": self.quantity, "target": self.target, "gamma": self.gamma,
                    "kind": None, "note": self.note}
        return self.prediction.as_dict()


@dataclass(frozen=True)
class PresetTable:
    name: str
    theta: object
    n: int
    symbol: SymbolTriple
    rows: list = field(default_factory=list)

    def row(self, quantity) -> PresetRow:
        for r in self.rows:
            if r.quantity == quantity:
                return r
        raise KeyError(quantity)


def preset(name, theta, n, literal_delta0=False, beta=None) -> PresetTable:
    """Rate table for every quantity of an application equation."""
    sym = preset_symbol(name, theta, literal_delta0)
    rows = []
    for label, target, gamma in PRESET_QUANTITIES[name]:
        q = RateQuery(sym, target, gamma, beta, n)
        try:
            pred = combined_rate(q)
        except (HypothesisNotMet, BetaRequired) as exc:
            rows.append(PresetRow(label, target, gamma, None, str(exc)))
            continue
        rows.append(PresetRow(label, target, gamma,
                              DecayPrediction(**{**pred.__dict__, "quantity": label}), ""))
    return PresetTable(name, _exact(theta), int(n), sym, rows)


def table_json(rows, meta=None) -> str:
    """JSON text with stable key order."""
    payload = {"meta": meta or {}, "rows": [r.as_dict() for r in rows]}
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)


def table_text(rows) -> str:
    """Aligned plain-text table."""
    head = ("quantity", "kind", "exponent", "v0_low", "v1_low", "high", "s", "r", "beta")
    lines = [head]
    for row in rows:
        p = row.prediction if isinstance(row, PresetRow) else row
        label = row.quantity if isinstance(row, PresetRow) else (p.quantity or f"{p.target}, |gamma|={p.gamma}")
        if p is None:
            lines.append((label, "n/a", "-", "-", "-", "-", "-", "-", "-"))
            continue
        lines.append((label, p.kind, fmt(p.exponent), fmt(p.per_term["v0_low"]),
                      fmt(p.per_term["v1_low"]), fmt(p.per_term["high"]),
                      fmt(p.required_s), fmt(p.required_r), fmt(p.beta)))
    widths = [max(len(str(line[i])) for line in lines) for i in range(len(head))]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(line, widths)).rstrip()
                     for line in lines)
