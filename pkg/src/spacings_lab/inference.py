"""Distribution-free inference for a quantile ``x_p`` and the density ``f(x_p)``.

With ``R = X_{k+r:n} - X_{k-s:n}`` and ``k = round(n p)``,

    sqrt(n) f(x_p) (X_{k:n} - x_p) / sqrt(p(1-p))  ->  N(0, 1)
    n f(x_p) R                                      ->  Gamma(r + s)

independently, so the ratio ``(X_{k:n} - x_p) / (sqrt(n) R)`` converges to
``T = sqrt(p(1-p)) N / G``, a law free of ``f``.  Its quantiles
``q_lo < q_hi`` give the interval ``[X_{k:n} - q_hi sqrt(n) R, X_{k:n} - q_lo sqrt(n) R]``.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np
from scipy import special

from .distributions import DistributionSpec, from_config
from .errors import DomainError, NumericalError
from .rng import ReplicateStreams
from .sampling import METHODS, WindowSample, sample_windows

__all__ = [
    "QuantileCI",
    "PivotTable",
    "pivot_quantiles",
    "quantile_ci",
    "quantile_ci_arrays",
    "density_estimate",
    "coverage_experiment",
    "validate_coverage_config",
    "MIN_MC_SIZE",
]

MIN_MC_SIZE = 100_000
PIVOT_STREAM = 0x9140
# draws per chunk when building a pivot table
_PIVOT_CHUNK = 1 << 20


@dataclass(frozen=True)
class QuantileCI:
    point: float
    lower: float
    upper: float
    level: float
    r: int
    s: int

    def __post_init__(self):
        if not self.lower <= self.point <= self.upper:
            raise NumericalError("interval does not contain its point estimate")

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


@dataclass(frozen=True)
class PivotTable:
    r_plus_s: int
    p: float
    level: float
    lower: float
    upper: float
    mc_size: int
    seed: int

    def __post_init__(self):
        if not self.lower < self.upper:
            raise NumericalError("pivot quantiles are not ordered")


_cache: dict[tuple, PivotTable] = {}
_cache_lock = threading.Lock()


def _check_prob(name: str, v: float):
    if not 0.0 < v < 1.0:
        raise DomainError(f"{name} must lie in (0, 1)")


def _build_pivot(m: int, p: float, level: float, mc_size: int, seed: int) -> PivotTable:
    streams = ReplicateStreams(seed, 2, PIVOT_STREAM)
    scale = math.sqrt(p * (1.0 - p))
    parts = []
    for start in range(0, mc_size, _PIVOT_CHUNK):
        u = streams.block(start, min(_PIVOT_CHUNK, mc_size - start))
        g = special.gammaincinv(m, u[:, 1])
        parts.append(scale * special.ndtri(u[:, 0]) / g)
    t = np.concatenate(parts)
    lo, hi = np.quantile(t, [(1.0 - level) / 2.0, (1.0 + level) / 2.0])
    return PivotTable(m, p, level, float(lo), float(hi), mc_size, seed)


def pivot_quantiles(r: int, s: int, p: float, level: float, mc_size: int = 1_000_000,
                    seed: int = 0) -> PivotTable:
    """Monte Carlo quantiles of ``T = sqrt(p(1-p)) N / G``, ``G ~ Gamma(r+s)``.

    Tables are cached per ``(r+s, p, level, mc_size, seed)`` and are a pure
    function of those values.
    """
    m = int(r) + int(s)
    if m < 2:
        raise DomainError("pivot needs r + s >= 2")
    _check_prob("p", p)
    _check_prob("level", level)
    if mc_size < MIN_MC_SIZE:
        raise DomainError(f"mc_size must be at least {MIN_MC_SIZE}")
    key = (m, float(p), float(level), int(mc_size), int(seed))
    with _cache_lock:
        table = _cache.get(key)
        if table is None:
            table = _build_pivot(m, float(p), float(level), int(mc_size), int(seed))
            _cache[key] = table
    return table


def _window_range(w: WindowSample) -> np.ndarray:
    if w.r + w.s < 2:
        raise DomainError("need r + s >= 2")
    rng_ = np.asarray(w.values[..., -1] - w.values[..., 0], dtype=float)
    if np.any(~(rng_ > 0)):
        raise NumericalError("degenerate window: zero range")
    return rng_


def quantile_ci_arrays(w: WindowSample, table: PivotTable):
    """``(point, lower, upper)`` arrays for a single window or a batch."""
    if table.r_plus_s != w.r + w.s:
        raise DomainError("pivot table was built for a different r + s")
    big_r = _window_range(w)
    point = np.asarray(w.center, dtype=float)
    root_n = math.sqrt(w.n)
    lower = point - table.upper * root_n * big_r
    upper = point - table.lower * root_n * big_r
    return point, lower, upper


def quantile_ci(w: WindowSample, p: float, level: float, table: PivotTable) -> QuantileCI:
    """Pivot confidence interval for ``x_p`` from one window."""
    if w.values.ndim != 1:
        raise DomainError("quantile_ci takes a single window; use quantile_ci_arrays for batches")
    if not math.isclose(table.p, p) or not math.isclose(table.level, level):
        raise DomainError("pivot table does not match p and level")
    if abs(w.k / w.n - p) > 1.0 / math.sqrt(w.n):
        raise DomainError("k/n is too far from p")
    point, lower, upper = quantile_ci_arrays(w, table)
    return QuantileCI(float(point), float(lower), float(upper), level, w.r, w.s)


def density_estimate(w: WindowSample, level: float = 0.95):
    """``f_hat = (r+s-1)/(n R)`` and a Gamma(r+s) interval for ``f(x_p)``.

    Works on one window (floats) or a batch (arrays).
    """
    _check_prob("level", level)
    big_r = _window_range(w)
    m = w.r + w.s
    nr = w.n * big_r
    est = (m - 1) / nr
    g_lo, g_hi = special.gammaincinv(m, [(1.0 - level) / 2.0, (1.0 + level) / 2.0])
    lo, hi = g_lo / nr, g_hi / nr
    if np.ndim(est) == 0:
        return float(est), (float(lo), float(hi))
    return est, (lo, hi)


_COVERAGE_REQUIRED = ("parent", "n", "p", "r", "s", "level", "n_rep")


def validate_coverage_config(config: Mapping[str, Any]) -> dict[str, Any]:
    missing = [f for f in _COVERAGE_REQUIRED if f not in config]
    if missing:
        raise DomainError(f"missing config field {missing[0]!r}")
    cfg = dict(config)
    if int(cfg["n_rep"]) < 1:
        raise DomainError("field 'n_rep' must be >= 1")
    if int(cfg["n"]) < 2:
        raise DomainError("field 'n' must be >= 2")
    if int(cfg["r"]) < 0 or int(cfg["s"]) < 0 or int(cfg["r"]) + int(cfg["s"]) < 2:
        raise DomainError("fields 'r', 's' must be >= 0 with r + s >= 2")
    _check_prob("p", float(cfg["p"]))
    _check_prob("level", float(cfg["level"]))
    cfg.setdefault("seed", 0)
    cfg.setdefault("mc_size", 1_000_000)
    cfg.setdefault("method", "beta-pivot")
    if cfg["method"] not in METHODS:
        raise DomainError(f"field 'method' must be one of {METHODS}")
    return cfg


def _parent(spec) -> DistributionSpec:
    if isinstance(spec, DistributionSpec):
        return spec
    if isinstance(spec, str):
        return from_config({"family": spec})
    return from_config(spec)


def coverage_experiment(config: Mapping[str, Any], *, threads: int | None = None) -> dict[str, Any]:
    """Hit rate of the pivot interval over ``n_rep`` independent windows.

    ``config`` keys: parent ({family, params} or a family name), n, p, r, s,
    level, n_rep, and optionally seed, mc_size, method.  Returns the report
    ``{parent, n, p, r, s, level, coverage, se, n_rep, seed}``.
    """
    cfg = validate_coverage_config(config)
    dist = _parent(cfg["parent"])
    n, p, r, s = int(cfg["n"]), float(cfg["p"]), int(cfg["r"]), int(cfg["s"])
    level, n_rep, seed = float(cfg["level"]), int(cfg["n_rep"]), int(cfg["seed"])
    k = int(round(n * p))
    if not (1 <= k - s and k + r <= n):
        raise DomainError("window does not fit: need s < round(n p) <= n - r")
    table = pivot_quantiles(r, s, p, level, int(cfg["mc_size"]), seed)
    w = sample_windows(dist, n, k, r, s, cfg["method"], n_rep, seed=seed, threads=threads)
    _, lower, upper = quantile_ci_arrays(w, table)
    x_p = float(dist.quantile(p))
    cov = float(np.mean((lower <= x_p) & (x_p <= upper)))
    return {
        "parent": dist.to_config(),
        "n": n,
        "p": p,
        "r": r,
        "s": s,
        "level": level,
        "coverage": cov,
        "se": math.sqrt(cov * (1.0 - cov) / n_rep),
        "n_rep": n_rep,
        "seed": seed,
    }


def coverage_json(report: Mapping[str, Any]) -> str:
    return json.dumps(report, indent=2) + "\n"
