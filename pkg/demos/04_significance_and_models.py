# %% [markdown]
# # Under the hood: p-values and model fitting
#
# The p-value of a correlation comes from the regularized incomplete beta
# function; here it is compared with scipy for a few cases.

# %%
import numpy as np
from scipy import stats

from wordengage.models import fit_ols, fit_svr, raw_coefficients, standardize_fit
from wordengage.stats import p_two_tailed

for r, n in [(0.05, 1000), (0.195, 102), (0.5, 10)]:
    t = r * np.sqrt((n - 2) / (1 - r * r))
    print(f"r={r} n={n}: ours {p_two_tailed(r, n):.6g}  scipy {2 * stats.t.sf(t, n - 2):.6g}")

# %% [markdown]
# On a noiseless line the SVR slope lands next to least squares.

# %%
x = np.linspace(0, 1, 200)
y = 0.2 + 0.6 * x
fm = standardize_fit(x)
print("OLS slope", raw_coefficients(fit_ols(fm, y, lam=0))[0][0])
svr = fit_svr(fm, y, epsilon=0.0)
print("SVR slope", raw_coefficients(svr)[0][0])
print("objective first/last", svr.training_history[0], svr.training_history[-1])
