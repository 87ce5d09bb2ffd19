# %% [markdown]
# Simulated decay curves against the predicted exponents.
# ||v(t)|| is computed in Fourier space for Gaussian data and the tail of the
# log-log curve is fitted by least squares.

# %%
from fractions import Fraction as F

from fraclap.fit import CurveQuery, fit_loglog, generate_curve
from fraclap.rates import preset, preset_symbol
from fraclap.spectra import RadialProfile

G = RadialProfile.gaussian()

# %%
for name, theta, n in [("wave", F(0), 3), ("plate", F(1), 5), ("ibq", F(0), 3)]:
    curve = generate_curve(CurveQuery(preset_symbol(name, theta), n, G, G), 1e2, 1e4, 24)
    fit = fit_loglog(curve)
    want = preset(name, theta, n).row("||v||").prediction.exponent
    print(f"{name:6s} theta={str(theta):4s} n={n}  fitted {fit.exponent:.4f}  predicted {float(want):.4f}")
