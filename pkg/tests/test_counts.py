import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special, stats

from conftest import SEED
from spacings_lab.counts import (
    CountLimitLaw,
    CountRecord,
    count_limit_pmf,
    count_neighbors,
    duality_check,
    histogram,
    histogram_csv,
    histogram_json,
    window_counts,
)
from spacings_lab.distributions import make_distribution, norming_constants
from spacings_lab.errors import DomainError, UnsupportedError
from spacings_lab.sampling import full_samples, sample_windows
from spacings_lab.stats_tests import discrete_gof, independence_check

LAWS = [
    CountLimitLaw("poisson", lam=2.0),
    CountLimitLaw("poisson", lam=0.3),
    CountLimitLaw("binomial", lam=0.7, k=3),
    CountLimitLaw("neg-binomial", lam=0.7, k=3),
    CountLimitLaw("neg-binomial", lam=2.5, k=1),
    CountLimitLaw("censored-poisson", lam=1.0, k=3),
    CountLimitLaw("frechet-mixed", lam=0.5, k=3, alpha=1.0),
    CountLimitLaw("frechet-mixed", lam=2.0, k=2, alpha=3.0),
    CountLimitLaw("extreme-plus", lam=1.0, k=3, domain="weibull", alpha=2.0),
    CountLimitLaw("extreme-minus", lam=0.8, k=2, domain="weibull", alpha=1.5),
]


# -- counting ------------------------------------------------------------------

def test_direct_count_example():
    rec = count_neighbors([0.1, 0.2, 0.35, 0.8], 2, 0.2)
    assert (rec.k_minus, rec.k_plus) == (1, 1)
    assert (rec.k, rec.n, rec.d) == (2, 4, 0.2)


def test_small_d_gives_zero_counts():
    rec = count_neighbors([0.1, 0.2, 0.35, 0.8], 2, 0.01)
    assert (rec.k_minus, rec.k_plus) == (0, 0)


def test_intervals_are_open():
    # a neighbour at distance exactly d is not counted, ties with the center are not counted
    rec = count_neighbors([0.0, 0.5, 0.5, 1.0], 2, 0.5)
    assert (rec.k_minus, rec.k_plus) == (0, 0)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-100, 100), min_size=1, max_size=40),
    st.data(),
    st.floats(1e-3, 50),
)
def test_count_matches_brute_force(values, data, d):
    x = np.sort(values)
    k = data.draw(st.integers(1, x.size))
    c = x[k - 1]
    rec = count_neighbors(x, k, d)
    others = np.delete(x, k - 1)
    assert rec.k_minus == sum(1 for v in others if c - d < v < c)
    assert rec.k_plus == sum(1 for v in others if c < v < c + d)


def test_batch_counts_match_single():
    x = full_samples(make_distribution("uniform"), 50, 20, seed=SEED)
    km, kp = count_neighbors(x, 25, 0.05)
    for row, a, b in zip(x, km, kp):
        rec = count_neighbors(row, 25, 0.05)
        assert (rec.k_minus, rec.k_plus) == (a, b)


def test_window_counts_agree_with_full_sample_when_unsaturated():
    dist = make_distribution("uniform")
    n, k, d = 200, 100, 0.01
    x = full_samples(dist, n, 500, seed=SEED + 1)
    km, kp = count_neighbors(x, k, d)
    # reproduce the same samples as a window: the full-sort sampler sorts the same uniforms
    w = sample_windows(dist, n, k, 8, 8, "full-sort", 500, seed=SEED + 1)
    np.testing.assert_array_equal(w.values, x[:, k - 9: k + 8])
    wc = window_counts(w, d)
    ok = ~(wc.saturated_minus | wc.saturated_plus)
    assert ok.mean() > 0.99
    np.testing.assert_array_equal(wc.k_minus[ok], km[ok])
    np.testing.assert_array_equal(wc.k_plus[ok], kp[ok])


@pytest.mark.parametrize("bad", [dict(k=0, d=1.0), dict(k=5, d=1.0), dict(k=2, d=0.0)])
def test_count_errors(bad):
    with pytest.raises(DomainError):
        count_neighbors([1.0, 2.0, 3.0, 4.0], **bad)


def test_count_record_invariants():
    with pytest.raises(DomainError):
        CountRecord(k_minus=2, k_plus=0, d=1.0, k=2, n=5)
    with pytest.raises(DomainError):
        CountRecord(k_minus=0, k_plus=4, d=1.0, k=2, n=5)


# -- limit pmfs ----------------------------------------------------------------------

def test_binomial_example():
    law = CountLimitLaw("binomial", lam=math.log(2), k=2)
    assert count_limit_pmf(law, 2) == pytest.approx(0.25, rel=1e-14)


def test_censored_poisson_example():
    law = CountLimitLaw("censored-poisson", lam=1.0, k=3)
    assert count_limit_pmf(law, 3) == pytest.approx(1 - math.exp(-1) * 2.5, rel=1e-13)
    assert count_limit_pmf(law, 3) == pytest.approx(0.080301, abs=5e-7)


def test_poisson_example():
    assert count_limit_pmf(CountLimitLaw("poisson", lam=2.0), 0) == pytest.approx(math.exp(-2), rel=1e-15)


@pytest.mark.parametrize("law", LAWS, ids=lambda law: f"{law.kind}-{law.lam}-{law.k}")
def test_pmf_sums_to_one(law):
    top = law.support_max if law.support_max is not None else 2000
    total = float(np.sum(count_limit_pmf(law, np.arange(top + 1))))
    assert total == pytest.approx(1.0, abs=1e-9)


def test_pmf_is_zero_outside_support():
    law = CountLimitLaw("binomial", lam=1.0, k=3)
    assert count_limit_pmf(law, 4) == 0.0
    assert count_limit_pmf(law, -1) == 0.0
    assert count_limit_pmf(law, 1.5) == 0.0


def test_closed_forms_match_scipy():
    lam, k = 0.9, 4
    q = 1 - math.exp(-lam)
    j = np.arange(12)
    np.testing.assert_allclose(count_limit_pmf(CountLimitLaw("binomial", lam=lam, k=k), j),
                               stats.binom.pmf(j, k, q), rtol=1e-12, atol=1e-300)
    # successes before the (k+1)-th failure, failure probability e^{-lam}
    np.testing.assert_allclose(count_limit_pmf(CountLimitLaw("neg-binomial", lam=lam, k=k), j),
                               stats.nbinom.pmf(j, k + 1, math.exp(-lam)), rtol=1e-12)


@pytest.mark.parametrize("k, lam", [(3, 0.5), (3, 1.7), (1, 2.0)])
def test_negative_binomial_matches_binomial_sum_form(k, lam):
    # P(K- < j) = sum_{i<j} C(k+j, i) q^i e^{-lam (k+j-i)}
    q = 1 - math.exp(-lam)
    law = CountLimitLaw("neg-binomial", lam=lam, k=k)
    for j in range(1, 8):
        lhs = float(np.sum(count_limit_pmf(law, np.arange(j))))
        rhs = sum(math.comb(k + j, i) * q**i * math.exp(-lam * (k + j - i)) for i in range(j))
        assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("k, lam", [(3, 0.4), (2, 1.5)])
def test_quadrature_laws_reproduce_closed_forms(k, lam):
    j = np.arange(15)
    pairs = [
        (CountLimitLaw("extreme-plus", lam=lam, k=k, domain="gumbel"), CountLimitLaw("binomial", lam=lam, k=k)),
        (CountLimitLaw("extreme-minus", lam=lam, k=k, domain="gumbel"), CountLimitLaw("neg-binomial", lam=lam, k=k)),
        (CountLimitLaw("extreme-plus", lam=lam, k=k, domain="weibull", alpha=1.0),
         CountLimitLaw("censored-poisson", lam=lam, k=k)),
        (CountLimitLaw("extreme-minus", lam=lam, k=k, domain="weibull", alpha=1.0), CountLimitLaw("poisson", lam=lam)),
    ]
    for generic, closed in pairs:
        np.testing.assert_allclose(count_limit_pmf(generic, j), count_limit_pmf(closed, j), atol=1e-9)


def test_frechet_lower_count_has_no_proper_limit():
    with pytest.raises(UnsupportedError):
        CountLimitLaw("extreme-minus", lam=0.8, k=2, domain="frechet", alpha=1.5)


def test_frechet_mixed_is_the_frechet_plus_law():
    a = CountLimitLaw("frechet-mixed", lam=0.6, k=3, alpha=2.0)
    b = CountLimitLaw("extreme-plus", lam=0.6, k=3, domain="frechet", alpha=2.0)
    j = np.arange(4)
    np.testing.assert_array_equal(count_limit_pmf(a, j), count_limit_pmf(b, j))


@pytest.mark.parametrize(
    "kwargs",
    [dict(kind="poisson", lam=0.0), dict(kind="binomial"), dict(kind="frechet-mixed", k=2),
     dict(kind="extreme-plus", k=2), dict(kind="extreme-minus", k=2, domain="weibull"), dict(kind="geometric")],
)
def test_invalid_count_laws(kwargs):
    with pytest.raises(DomainError):
        CountLimitLaw(**kwargs)


# -- duality ----------------------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 30), st.floats(1e-4, 2.0), st.data())
def test_duality_on_single_samples(seed, n, d, data):
    x = np.sort(np.random.default_rng(seed).exponential(size=n))
    k = data.draw(st.integers(2, n - 1)) if n > 2 else 2
    i = data.draw(st.integers(1, k - 1))
    j = data.draw(st.integers(1, n - k)) if n - k >= 1 else None
    assert duality_check(x, k, d, i=i, j=j)


def test_duality_trivial_case():
    x = np.array([0.0, 1.0, 3.0, 6.0])
    # d below the adjacent gap: K- = 0 < 1 and the gap exceeds d
    assert duality_check(x, 3, 0.5, i=1)
    assert count_neighbors(x, 3, 0.5).k_minus == 0


def test_duality_on_100k_uniform_windows():
    dist = make_distribution("uniform")
    w = sample_windows(dist, 1000, 500, 5, 5, "beta-pivot", 100_000, seed=SEED + 2)
    for d in (0.5e-3, 2e-3, 7e-3):
        for i in (1, 3, 5):
            assert duality_check(w, None, d, i=i, j=6 - i)


def test_duality_can_fail_on_an_exact_tie():
    # a neighbour at distance exactly d is neither counted nor beyond d; this
    # probability-zero event is the only way the identity can break
    x = np.array([0.0, 0.5, 1.0])
    assert not duality_check(x, 2, 0.5, i=1)
    assert not duality_check(x, 2, 0.5, j=1)
    assert duality_check(x, 2, 0.4999, i=1, j=1)


def test_duality_index_errors():
    with pytest.raises(DomainError):
        duality_check(np.arange(5.0), 3, 0.5)
    with pytest.raises(DomainError):
        duality_check(np.arange(5.0), 3, 0.5, i=3)


# -- limit laws against simulation ---------------------------------------------------

def _gof(values, law):
    return discrete_gof(histogram(values), law.pmf, support_max=law.support_max)


def test_central_uniform_counts_are_poisson():
    dist = make_distribution("uniform")
    n, k, lam = 10_000, 5000, 2.0
    w = sample_windows(dist, n, k, 30, 30, "beta-pivot", 10_000, seed=SEED + 3)
    wc = window_counts(w, lam / n)
    assert not wc.any_saturated
    law = CountLimitLaw("poisson", lam=lam)
    assert _gof(wc.k_plus, law).p_value > 0.01
    assert _gof(wc.k_minus, law).p_value > 0.01


def test_gumbel_extreme_counts():
    dist = make_distribution("exponential")
    n, k, lam = 100_000, 3, 0.8
    nc = norming_constants(dist, n, n, "extreme")
    w = sample_windows(dist, n, n - k, k, 40, "beta-pivot", 20_000, seed=SEED + 4)
    wc = window_counts(w, lam * nc.b_n)
    assert not np.any(wc.saturated_minus)
    assert _gof(wc.k_plus, CountLimitLaw("binomial", lam=lam, k=k)).p_value > 0.01
    assert _gof(wc.k_minus, CountLimitLaw("neg-binomial", lam=lam, k=k)).p_value > 0.01


def test_weibull_unit_extreme_counts():
    dist = make_distribution("uniform")
    n, k, lam = 100_000, 3, 1.0
    nc = norming_constants(dist, n, n, "extreme")
    assert nc.b_n == pytest.approx(1 / n, rel=1e-12)
    w = sample_windows(dist, n, n - k, k, 30, "beta-pivot", 20_000, seed=SEED + 5)
    wc = window_counts(w, lam * nc.b_n)
    assert _gof(wc.k_plus, CountLimitLaw("censored-poisson", lam=lam, k=k)).p_value > 0.01
    assert _gof(wc.k_minus, CountLimitLaw("poisson", lam=lam)).p_value > 0.01
    assert independence_check(wc.k_minus, wc.k_plus).passed


def test_frechet_mixed_counts_match_pareto_simulation():
    dist = make_distribution("pareto", alpha=1.0)
    n, k, lam = 100_000, 3, 0.5
    nc = norming_constants(dist, n, n, "extreme")
    w = sample_windows(dist, n, n - k, k, 10, "beta-pivot", 20_000, seed=SEED + 6)
    wc = window_counts(w, lam * nc.b_n)
    assert _gof(wc.k_plus, CountLimitLaw("frechet-mixed", lam=lam, k=k, alpha=1.0)).p_value > 0.01


# -- histograms ----------------------------------------------------------------------------

def test_histogram_formats():
    h = histogram([0, 2, 2, 5])
    assert h == {0: 1, 2: 2, 5: 1}
    assert histogram_csv(h) == "value,frequency\n0,1\n2,2\n5,1\n"
    assert json.loads(histogram_json(h)) == {"0": 1, "2": 2, "5": 1}
    assert histogram([]) == {}
