"""
Top order statistics: the three extreme-value domains
=====================================================

Near the maximum, spacings scaled by b_n converge to spacings of a W-vector:
independent exponentials for bounded tails with alpha = 1, Z_j/j for the
Gumbel domain, and dependent heavy-tailed variables for the Frechet domain.
Counting neighbours within lambda b_n of X_{n-k:n} turns these statements into
binomial, negative-binomial and censored-Poisson laws.
"""

import numpy as np

from spacings_lab import CountLimitLaw, make_distribution, norming_constants, normalize, sample_windows, spacings
from spacings_lab.counts import histogram, window_counts
from spacings_lab.stats_tests import discrete_gof, independence_check

n, n_rep = 100_000, 50_000
k = n - 3  # window X_{n-6:n}, ..., X_{n:n} centred at X_{n-3:n}

for family, params in [("uniform", {}), ("exponential", {}), ("pareto", {"alpha": 1.0})]:
    dist = make_distribution(family, **params)
    nc = norming_constants(dist, n, k, "extreme")
    w = sample_windows(dist, n, k, 3, 3, n_replicates=n_rep, seed=5)
    right = normalize(spacings(w), nc, "extreme").right
    # right[:, j] is the spacing just above X_{n-3+j:n}; the top one is last
    medians = np.median(right, axis=0)[::-1]
    z = independence_check(right[:, 0], right[:, 1]).statistic
    print(f"{family:11s} domain={dist.domain.domain:8s} b_n={nc.b_n:.4g}  "
          f"medians of top spacings {np.round(medians, 3)}  adjacent corr z={z:+.1f}")

print("\nGumbel medians approach ln2 / j:", np.round(np.log(2) / np.arange(1, 4), 3))


def gof(values, law):
    return discrete_gof(histogram(values), law.pmf, support_max=law.support_max).p_value


lam, top = 1.0, 3
print(f"\ncounts within {lam} b_n of X_(n-{top}:n)")
expo = make_distribution("exponential")
b_n = norming_constants(expo, n, n, "extreme").b_n
wc = window_counts(sample_windows(expo, n, n - top, top, 40, n_replicates=20_000, seed=6), lam * b_n)
print("  exponential K+ vs binomial:      p =", round(gof(wc.k_plus, CountLimitLaw("binomial", lam, k=top)), 3))
print("  exponential K- vs neg-binomial:  p =", round(gof(wc.k_minus, CountLimitLaw("neg-binomial", lam, k=top)), 3))

uni = make_distribution("uniform")
b_n = norming_constants(uni, n, n, "extreme").b_n
wc = window_counts(sample_windows(uni, n, n - top, top, 30, n_replicates=20_000, seed=7), lam * b_n)
print("  uniform K+ vs censored Poisson:  p =", round(gof(wc.k_plus, CountLimitLaw("censored-poisson", lam, k=top)), 3))
print("  uniform K- vs Poisson:           p =", round(gof(wc.k_minus, CountLimitLaw("poisson", lam)), 3))
