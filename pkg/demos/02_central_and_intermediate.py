"""
Spacings around a central and an intermediate order statistic
=============================================================

Around X_{k:n} with k/n -> p the spacings scaled by n f(x_p) behave like
independent unit exponentials, and the center is asymptotically normal and
independent of them.  Moving k towards n with n - k -> infinity keeps the
same picture once the density is evaluated at F^{-1}(k/n).
"""

import numpy as np

from spacings_lab import central_regime, make_distribution, norming_constants, normalize, sample_windows, spacings
from spacings_lab.limit_laws import LimitLaw, limit_cdf
from spacings_lab.stats_tests import independence_check, ks_one_sample

exp_cdf = lambda t: -np.expm1(-np.maximum(t, 0.0))
normal_cdf = lambda t: limit_cdf(LimitLaw("std-normal"), t)

n, p, r, s = 10_000, 0.5, 3, 3
for family in ("uniform", "standard-normal", "exponential"):
    dist = make_distribution(family)
    cr = central_regime(dist, p)
    nc = norming_constants(dist, n, round(n * p), "central", cr)
    w = sample_windows(dist, n, round(n * p), r, s, n_replicates=10_000, seed=3)
    nw = normalize(spacings(w), nc, "central", cr)
    ks = [ks_one_sample(c, exp_cdf).p_value for c in nw.all_spacings().T]
    print(f"{family:16s} x_p={cr.x_p:+.4f} f(x_p)={cr.f_xp:.4f}  "
          f"spacing KS p in [{min(ks):.2f}, {max(ks):.2f}]  center KS p={ks_one_sample(nw.center, normal_cdf).p_value:.2f}")

# A density that vanishes at the median: spacings are of order n^{-1/3} and the
# limit is the powered exponential Z^theta rather than Exp(1)
chanda = make_distribution("chanda", eta=2.0)
cr = central_regime(chanda, 0.5)
print(f"\nchanda(eta=2) at the median: theta={cr.theta:.4f}, M={cr.M:.4f}")

# Intermediate: exponential parent, n - k = sqrt(n)
k = n - int(np.sqrt(n))
dist = make_distribution("exponential")
nc = norming_constants(dist, n, k, "intermediate")
w = sample_windows(dist, n, k, r, s, n_replicates=10_000, seed=4)
nw = normalize(spacings(w), nc, "intermediate")
print(f"\nintermediate k = n - {n - k}: a_n={nc.a_n:.4f} c_n={nc.c_n:.4g}")
print("  spacing means:", np.round(nw.all_spacings().mean(axis=0), 3))
print("  center mean/sd:", round(float(nw.center.mean()), 3), round(float(nw.center.std()), 3))
# the center still shares one exponential with each left spacing, so the
# correlation decays only like 1/sqrt(n - k)
print("  corr z, center vs nearest left spacing:",
      round(independence_check(nw.center, nw.left[:, 0]).statistic, 1))
