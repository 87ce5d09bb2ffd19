# %% [markdown]
# Pointwise energy inequalities and the kernel oracle on random samples.
# Each record names a check, its worst sample and the size of the violation.

# %%
from fractions import Fraction as F

from fraclap.rates import preset_symbol
from fraclap.verify import run_suite

# %%
recs = run_suite(preset_symbol("plate", F(1, 2)), 3, samples=2000, seed=0, quick=True)
for r in recs:
    print(f"{r.check:22s} {'ok  ' if r.passed else 'FAIL'} {r.violation:.2e}")
