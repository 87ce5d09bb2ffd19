# %% [markdown]
# Regularity loss versus uniform exponential decay at high frequencies.
# The plate equation without fractional damping (theta = 0) decays only
# polynomially in the high-frequency energy when data have limited smoothness,
# while the wave equation with theta = 1/2 decays exponentially.

# %%
from fractions import Fraction as F

from fraclap.fit import CurveQuery, fit_loglog, generate_curve
from fraclap.rates import preset_symbol
from fraclap.spectra import RadialProfile
from fraclap.symbols import effective_canonical

n = 2
v0, v1 = RadialProfile.power_tail(3, 1), RadialProfile.power_tail(2, 1)

# %%
for name, theta in [("plate", F(0)), ("wave", F(1, 2))]:
    sym = preset_symbol(name, theta)
    p = effective_canonical(sym, "high", n)
    q = CurveQuery(sym, n, v0, v1, "hf_energy", p=p, sigma=float(-2 * p.alpha), rtol=1e-6)
    fit = fit_loglog(generate_curve(q, 1e2, 1e4, 24))
    tail = f", exponent {fit.exponent:.4f}" if fit.classification == "polynomial" else ""
    print(f"{name:6s} theta={theta}: {fit.classification}{tail}")
