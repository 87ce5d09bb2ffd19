# %% [markdown]
# Predicted decay exponents for the three model families.
# Each row gives the polynomial exponent of a norm together with the
# Sobolev orders s (for v0) and r (for v1) the initial data must have.

# %%
from fractions import Fraction as F

from fraclap.rates import preset, table_text

# %%
for name, theta, n in [("wave", F(0), 3), ("wave", F(3, 4), 3), ("plate", F(1), 5), ("ibq", F(1, 4), 3)]:
    print(f"== {name} theta={theta} n={n}")
    print(table_text(preset(name, theta, n).rows))
    print()
