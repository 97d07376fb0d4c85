"""
Uniform spacings and the exponential representation
===================================================

Two facts hold at every finite n, with no limit taken:

* the first two spacings of n uniforms have joint survival (1 - (v1+v2)/n)^n
  after scaling by n;
* for a standard exponential sample the normalized spacings
  (n-i+1)(X_{i:n} - X_{i-1:n}) are independent unit exponentials.
"""

import numpy as np

from spacings_lab import make_distribution
from spacings_lab.sampling import exponential_normalized_spacings, full_samples
from spacings_lab.stats_tests import independence_check, ks_one_sample

n, n_rep = 50, 100_000
u = full_samples(make_distribution("uniform"), n, n_rep, seed=1)
d1, d2 = n * u[:, 0], n * (u[:, 1] - u[:, 0])

for v1, v2 in [(0.5, 0.5), (1.0, 2.0), (0.1, 3.0)]:
    emp = np.mean((d1 > v1) & (d2 > v2))
    exact = (1 - (v1 + v2) / n) ** n
    print(f"P(n D1 > {v1}, n D2 > {v2}):  simulated {emp:.5f}   exact {exact:.5f}")

# The same sample viewed through the exponential quantile function
x = full_samples(make_distribution("exponential"), 10, 20_000, seed=2)
z = exponential_normalized_spacings(x)
print("\nnormalized exponential spacings, n = 10")
print("  column means:", np.round(z.mean(axis=0), 3))
print("  pooled KS vs Exp(1): p =", round(ks_one_sample(z, lambda t: -np.expm1(-t)).p_value, 3))
print("  corr(Z_1, Z_2) z-score:", round(independence_check(z[:, 0], z[:, 1]).statistic, 2))
