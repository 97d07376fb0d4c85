"""Simulation and verification of the limit theory of spacings around order statistics."""

__version__ = "0.1.0"

from .errors import DomainError, NumericalError, SpacingsError, UnsupportedError
from .distributions import (
    BoundedWeibullTail,
    Chanda,
    CentralRegime,
    DistributionSpec,
    DomainInfo,
    Exponential,
    NormingConstants,
    Pareto,
    StandardNormal,
    Uniform,
    UserQuantile,
    central_regime,
    density_cdf,
    from_config,
    load_quantile_table,
    make_distribution,
    mean_residual,
    norming_constants,
    quantile,
    von_mises_diagnostic,
)
from .sampling import (
    SpacingsVector,
    WindowSample,
    normalize,
    reconstruct,
    sample_window,
    sample_windows,
    spacings,
)
from .limit_laws import (
    EULER_GAMMA,
    LimitLaw,
    draw,
    hall_series_sample,
    limit_cdf,
    pair_survival,
    sample_limit,
)
from .stats_tests import TestReport, discrete_gof, independence_check, ks_one_sample, ks_two_sample
from .counts import CountLimitLaw, CountRecord, count_limit_pmf, count_neighbors, duality_check
from .inference import PivotTable, QuantileCI, coverage_experiment, density_estimate, pivot_quantiles, quantile_ci

__all__ = [name for name in dir() if not name.startswith("_")]
