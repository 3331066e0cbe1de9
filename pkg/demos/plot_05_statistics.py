"""
Test statistics under the hood
==============================

Partial correlations, the Fisher-z test and its calibration, and the
two-sample Kolmogorov-Smirnov test used to compare CI-count distributions.
"""

import numpy as np

from icdlib import DataSet, fisher_z_test, ks_2sample, partial_correlation

rng = np.random.default_rng(0)

###############################################################################
# A common cause z makes x and y correlated; conditioning on z removes it.

z = rng.normal(size=2000)
x = z + rng.normal(size=2000)
y = z + rng.normal(size=2000)
d = DataSet(np.column_stack([x, y, z]))
print("rho(x, y)     =", round(partial_correlation(d, 0, 1), 3))
print("rho(x, y | z) =", round(partial_correlation(d, 0, 1, [2]), 3))
print("independent given z at alpha=0.01:", fisher_z_test(d, 0, 1, [2]))

###############################################################################
# Under independence the rejection rate sits near alpha.

rej = sum(not fisher_z_test(DataSet(rng.normal(size=(500, 2))), 0, 1) for _ in range(2000))
print("empirical type-I rate:", rej / 2000)

###############################################################################
# Small samples use the exact KS p-value; large ones the asymptotic form.

print(ks_2sample(rng.normal(size=6), rng.normal(1.0, 1, size=5)))
print(ks_2sample(rng.normal(size=400), rng.normal(0.1, 1, size=300)))
