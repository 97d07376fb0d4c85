import json
import math

import numpy as np
import pytest

from conftest import SEED
from spacings_lab.distributions import make_distribution
from spacings_lab.errors import DomainError, NumericalError
from spacings_lab.inference import (
    MIN_MC_SIZE,
    PivotTable,
    _build_pivot,
    QuantileCI,
    coverage_experiment,
    coverage_json,
    density_estimate,
    pivot_quantiles,
    quantile_ci,
    quantile_ci_arrays,
    validate_coverage_config,
)
from spacings_lab.sampling import WindowSample, sample_window, sample_windows


def _coverage(family, level=0.95, seed=SEED, n_rep=4000, **params):
    return coverage_experiment(dict(parent={"family": family, "params": params}, n=10_000, p=0.5, r=10, s=10,
                                    level=level, n_rep=n_rep, seed=seed))


# -- pivot table -------------------------------------------------------------------

def test_pivot_is_symmetric():
    t = pivot_quantiles(10, 10, 0.5, 0.95, seed=SEED)
    # MC error of a 2.5% quantile from 1e6 draws is well under 1%
    assert t.lower == pytest.approx(-t.upper, rel=0.01)


def test_pivot_matches_brute_force_oracle():
    t = pivot_quantiles(10, 10, 0.5, 0.95, seed=SEED + 1)
    # independent route: numpy's own normal and gamma generators, 1e7 draws
    rng = np.random.default_rng(SEED + 2)
    size = 10_000_000
    oracle = 0.5 * rng.standard_normal(size) / rng.standard_gamma(20, size)
    lo, hi = np.quantile(oracle, [0.025, 0.975])
    assert t.lower == pytest.approx(lo, rel=0.005)
    assert t.upper == pytest.approx(hi, rel=0.005)


def test_pivot_shrinks_to_zero_with_the_level():
    t = pivot_quantiles(3, 3, 0.5, 1e-4, seed=SEED)
    wide = pivot_quantiles(3, 3, 0.5, 0.95, seed=SEED)
    assert max(abs(t.lower), abs(t.upper)) < 1e-3 * wide.upper


def test_pivot_is_reproducible_and_cached():
    a = pivot_quantiles(4, 5, 0.3, 0.9, mc_size=MIN_MC_SIZE, seed=77)
    b = pivot_quantiles(5, 4, 0.3, 0.9, mc_size=MIN_MC_SIZE, seed=77)
    assert a is b
    fresh = _build_pivot(9, 0.3, 0.9, MIN_MC_SIZE, 77)
    assert abs(fresh.lower - a.lower) < 1e-6 and abs(fresh.upper - a.upper) < 1e-6


@pytest.mark.parametrize(
    "kwargs",
    [dict(r=1, s=0, p=0.5, level=0.9), dict(r=2, s=2, p=0.0, level=0.9), dict(r=2, s=2, p=0.5, level=1.0),
     dict(r=2, s=2, p=0.5, level=0.9, mc_size=MIN_MC_SIZE - 1)],
)
def test_pivot_errors(kwargs):
    with pytest.raises(DomainError):
        pivot_quantiles(**kwargs)


def test_pivot_table_ordering_invariant():
    with pytest.raises(NumericalError):
        PivotTable(4, 0.5, 0.9, 1.0, -1.0, MIN_MC_SIZE, 0)


# -- quantile interval ---------------------------------------------------------------

def test_interval_contains_point_and_has_the_pivot_form():
    dist = make_distribution("exponential")
    w = sample_window(dist, 10_000, 5000, 10, 10, seed=SEED)
    t = pivot_quantiles(10, 10, 0.5, 0.95, seed=SEED)
    ci = quantile_ci(w, 0.5, 0.95, t)
    assert ci.lower <= ci.point <= ci.upper
    big_r = w.values[-1] - w.values[0]
    assert ci.upper - ci.lower == pytest.approx((t.upper - t.lower) * math.sqrt(10_000) * big_r, rel=1e-12)
    assert (ci.r, ci.s, ci.level) == (10, 10, 0.95)


@pytest.mark.parametrize("family, params", [("uniform", {}), ("standard-normal", {})])
def test_coverage_band_at_95(family, params):
    rep = _coverage(family, seed=SEED + 3, **params)
    assert 0.935 <= rep["coverage"] <= 0.965


def test_coverage_band_at_50():
    rep = _coverage("uniform", level=0.5, seed=SEED + 4)
    assert 0.475 <= rep["coverage"] <= 0.525


def test_coverage_is_distribution_free():
    reps = [_coverage(f, seed=SEED + 10 + i) for i, f in enumerate(("uniform", "exponential", "standard-normal"))]
    covs = [r["coverage"] for r in reps]
    for a in range(3):
        for b in range(a + 1, 3):
            se = math.hypot(reps[a]["se"], reps[b]["se"])
            assert abs(covs[a] - covs[b]) < 3 * se


def test_intervals_are_nested_across_levels():
    dist = make_distribution("standard-normal")
    w = sample_windows(dist, 10_000, 5000, 10, 10, n_replicates=2000, seed=SEED + 5)
    _, lo95, hi95 = quantile_ci_arrays(w, pivot_quantiles(10, 10, 0.5, 0.95, seed=SEED))
    _, lo50, hi50 = quantile_ci_arrays(w, pivot_quantiles(10, 10, 0.5, 0.5, seed=SEED))
    assert np.all((lo95 < lo50) & (hi50 < hi95))


def test_width_shrinks_like_root_n():
    dist = make_distribution("uniform")
    t = pivot_quantiles(10, 10, 0.5, 0.95, seed=SEED)
    widths = []
    for n in (10_000, 40_000):
        w = sample_windows(dist, n, n // 2, 10, 10, n_replicates=4000, seed=SEED + 6)
        _, lo, hi = quantile_ci_arrays(w, t)
        widths.append(np.mean(hi - lo))
    assert widths[0] / widths[1] == pytest.approx(2.0, abs=0.1)


def test_quantile_ci_checks():
    dist = make_distribution("uniform")
    w = sample_window(dist, 10_000, 5000, 10, 10, seed=SEED)
    t = pivot_quantiles(10, 10, 0.5, 0.95, seed=SEED)
    with pytest.raises(DomainError):
        quantile_ci(w, 0.7, 0.95, t)
    with pytest.raises(DomainError):
        quantile_ci(w, 0.5, 0.9, t)
    with pytest.raises(DomainError):
        quantile_ci(w, 0.5, 0.95, pivot_quantiles(5, 5, 0.5, 0.95, seed=SEED))
    batch = sample_windows(dist, 10_000, 5000, 10, 10, n_replicates=3, seed=SEED)
    with pytest.raises(DomainError):
        quantile_ci(batch, 0.5, 0.95, t)


def test_degenerate_window_is_flagged():
    w = WindowSample(100, 50, 1, 1, np.array([0.5, 0.5, 0.5]), 0, "full-sort")
    with pytest.raises(NumericalError):
        density_estimate(w)
    with pytest.raises(NumericalError):
        quantile_ci_arrays(w, pivot_quantiles(1, 1, 0.5, 0.95))


def test_quantile_ci_invariant():
    with pytest.raises(NumericalError):
        QuantileCI(point=1.0, lower=1.5, upper=2.0, level=0.9, r=1, s=1)
    assert QuantileCI(1.0, 0.5, 2.0, 0.9, 1, 1).contains(0.5)


# -- density estimate -----------------------------------------------------------------

@pytest.mark.parametrize("family, truth, tol", [("uniform", 1.0, 0.02), ("exponential", 0.5, 0.01)])
def test_density_estimate_is_unbiased(family, truth, tol):
    w = sample_windows(make_distribution(family), 10_000, 5000, 10, 10, n_replicates=4000, seed=SEED + 7)
    est, _ = density_estimate(w)
    assert abs(np.mean(est) - truth) < tol


def test_density_identity_on_every_window():
    w = sample_windows(make_distribution("standard-normal"), 1000, 500, 3, 4, n_replicates=500, seed=SEED + 8)
    est, _ = density_estimate(w)
    ident = est * w.n * (w.values[:, -1] - w.values[:, 0])
    np.testing.assert_allclose(ident, 6.0, rtol=4 * np.finfo(float).eps)


def test_density_interval_brackets_the_estimate_and_covers():
    w = sample_windows(make_distribution("uniform"), 10_000, 5000, 10, 10, n_replicates=4000, seed=SEED + 9)
    est, (lo, hi) = density_estimate(w, level=0.9)
    assert np.all((lo < est) & (est < hi))
    cov = np.mean((lo <= 1.0) & (1.0 <= hi))
    assert abs(cov - 0.9) < 3 * math.sqrt(0.09 / 4000)


def test_minimal_window_estimate_is_finite():
    w = sample_windows(make_distribution("exponential"), 100, 50, 1, 1, n_replicates=1000, seed=SEED + 10)
    est, _ = density_estimate(w)
    assert np.all(np.isfinite(est) & (est > 0))
    single = sample_window(make_distribution("exponential"), 100, 50, 1, 1, seed=SEED)
    val, (lo, hi) = density_estimate(single)
    assert isinstance(val, float) and lo < val < hi


# -- coverage experiment ----------------------------------------------------------------

def test_coverage_report_shape():
    rep = _coverage("uniform", n_rep=200)
    assert set(rep) == {"parent", "n", "p", "r", "s", "level", "coverage", "se", "n_rep", "seed"}
    assert rep["se"] == pytest.approx(math.sqrt(rep["coverage"] * (1 - rep["coverage"]) / 200))
    assert json.loads(coverage_json(rep)) == rep
    assert rep == _coverage("uniform", n_rep=200)


@pytest.mark.parametrize(
    "patch",
    [dict(n_rep=0), dict(level=1.5), dict(r=1, s=0), dict(method="bogus")],
)
def test_coverage_validation(patch):
    cfg = dict(parent="uniform", n=1000, p=0.5, r=3, s=3, level=0.9, n_rep=10)
    cfg.update(patch)
    with pytest.raises(DomainError):
        validate_coverage_config(cfg)


def test_coverage_missing_field():
    with pytest.raises(DomainError, match="n_rep"):
        coverage_experiment(dict(parent="uniform", n=1000, p=0.5, r=3, s=3, level=0.9))


def test_coverage_window_must_fit():
    with pytest.raises(DomainError):
        coverage_experiment(dict(parent="uniform", n=20, p=0.1, r=3, s=3, level=0.9, n_rep=10))
