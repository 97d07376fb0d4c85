"""Neighbour counts ``K-`` and ``K+`` around ``X_{k:n}`` and their limit laws.

``K-(n, k, d)`` counts observations in the open interval ``(X_{k:n} - d, X_{k:n})``
and ``K+(n, k, d)`` those in ``(X_{k:n}, X_{k:n} + d)``.  Counting is done on
differences ``X_{k:n} - X_j`` rather than on the shifted endpoints, so the
event identities

    K- < i  <=>  X_{k:n} - X_{k-i:n} > d
    K+ < j  <=>  X_{k+j:n} - X_{k:n} > d

hold realization by realization (up to exact ties with ``d``, which have
probability zero).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy import special

from .errors import DomainError, UnsupportedError
from .limit_laws import pair_survival
from .sampling import WindowSample

__all__ = [
    "CountRecord",
    "CountLimitLaw",
    "count_neighbors",
    "window_counts",
    "count_limit_pmf",
    "duality_check",
    "histogram",
    "histogram_csv",
    "histogram_json",
]


@dataclass(frozen=True)
class CountRecord:
    k_minus: int
    k_plus: int
    d: float
    k: int
    n: int

    def __post_init__(self):
        if not (0 <= self.k_minus <= self.k - 1 and 0 <= self.k_plus <= self.n - self.k):
            raise DomainError("count outside its admissible range")


def count_neighbors(sample, k: int, d: float):
    """Counts for a full sorted sample (1-D) or a batch of them (2-D, one per row).

    Returns a :class:`CountRecord` for 1-D input and ``(k_minus, k_plus)``
    integer arrays for batches.
    """
    x = np.asarray(sample, dtype=float)
    n = x.shape[-1]
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    if not d > 0:
        raise DomainError("d must be positive")
    center = x[..., k - 1: k]
    below = center - x[..., : k - 1]
    above = x[..., k:] - center
    k_minus = np.sum((below > 0) & (below < d), axis=-1)
    k_plus = np.sum((above > 0) & (above < d), axis=-1)
    if x.ndim == 1:
        return CountRecord(int(k_minus), int(k_plus), float(d), k, n)
    return k_minus, k_plus


@dataclass(frozen=True)
class WindowCounts:
    k_minus: np.ndarray
    k_plus: np.ndarray
    saturated_minus: np.ndarray
    saturated_plus: np.ndarray

    @property
    def any_saturated(self) -> bool:
        return bool(np.any(self.saturated_minus) or np.any(self.saturated_plus))


def window_counts(w: WindowSample, d: float) -> WindowCounts:
    """Counts restricted to a simulated window.

    A side is *saturated* when its outermost window point is still within
    ``d`` of the center and the window does not reach the sample boundary;
    only then can the true count exceed the window count.
    """
    if not d > 0:
        raise DomainError("d must be positive")
    v = np.asarray(w.values, dtype=float)
    c = v[..., w.s: w.s + 1]
    below = c - v[..., : w.s]
    above = v[..., w.s + 1:] - c
    k_minus = np.sum((below > 0) & (below < d), axis=-1)
    k_plus = np.sum((above > 0) & (above < d), axis=-1)
    sat_minus = np.zeros(k_minus.shape, dtype=bool)
    sat_plus = np.zeros(k_plus.shape, dtype=bool)
    if w.k - w.s > 1:
        sat_minus = below[..., 0] < d if w.s else np.ones(k_minus.shape, dtype=bool)
    if w.k + w.r < w.n:
        sat_plus = above[..., -1] < d if w.r else np.ones(k_plus.shape, dtype=bool)
    return WindowCounts(k_minus, k_plus, sat_minus, sat_plus)


_COUNT_KINDS = ("poisson", "binomial", "neg-binomial", "censored-poisson", "frechet-mixed",
                "extreme-plus", "extreme-minus")


@dataclass(frozen=True)
class CountLimitLaw:
    """Limit law of a neighbour count.

    poisson(lam)
        central and intermediate counts with ``d = lam c_n``.
    binomial(k, lam)
        ``K+(n, n-k, lam b_n)`` in the Gumbel domain; success ``1 - e^{-lam}``.
    neg-binomial(k, lam)
        ``K-(n, n-k, lam b_n)`` in the Gumbel domain:
        ``P(K- = j) = C(j+k, j) (1-e^{-lam})^j e^{-lam(k+1)}``.
    censored-poisson(lam, k)
        ``min(Poi(lam), k)``: ``K+`` in the Weibull domain with alpha = 1.
    frechet-mixed(alpha, k, lam)
        ``K+(n, n-k, lam b_n)`` in the Fréchet domain, by quadrature over the
        Gamma mixing variable.
    extreme-plus / extreme-minus(domain, alpha, k, lam)
        the same quadrature construction for any domain and either side
        (except Fréchet ``K-``, whose limit puts mass at infinity).
    """

    kind: str
    lam: float = 1.0
    k: int | None = None
    alpha: float | None = None
    domain: str | None = None

    def __post_init__(self):
        if self.kind not in _COUNT_KINDS:
            raise DomainError(f"unknown count law {self.kind!r}")
        if not self.lam > 0:
            raise DomainError("lambda must be positive")
        if self.kind != "poisson" and (self.k is None or self.k < 1):
            raise DomainError(f"{self.kind} needs k >= 1")
        if self.kind == "frechet-mixed" and self.alpha is None:
            raise DomainError("frechet-mixed needs alpha")
        if self.kind.startswith("extreme-"):
            if self.domain not in ("frechet", "weibull", "gumbel"):
                raise DomainError("extreme count law needs a domain")
            if self.domain != "gumbel" and self.alpha is None:
                raise DomainError("extreme count law needs alpha")
            if self.kind == "extreme-minus" and self.domain == "frechet":
                # W_{k+1} - W_{k+1+j} <= W_{k+1}, so K- diverges with probability
                # P(W_{k+1} <= lam) > 0: no proper limit law
                raise UnsupportedError("K- has a defective limit in the Fréchet domain")

    @property
    def support_max(self) -> int | None:
        if self.kind in ("binomial", "censored-poisson", "frechet-mixed", "extreme-plus"):
            return self.k
        return None

    @property
    def success_probability(self) -> float:
        return -math.expm1(-self.lam)

    def pmf(self, j):
        return count_limit_pmf(self, j)


def _cdf_below(law: CountLimitLaw, j: int) -> float:
    """``P(K < j)`` for the quadrature-based extreme laws."""
    if j <= 0:
        return 0.0
    k = law.k
    if law.kind in ("frechet-mixed", "extreme-plus"):
        if j > k:
            return 1.0
        dom = "frechet" if law.kind == "frechet-mixed" else law.domain
        return pair_survival(dom, law.alpha, k + 1 - j, k + 1, law.lam)
    return pair_survival(law.domain, law.alpha, k + 1, k + 1 + j, law.lam)


def count_limit_pmf(law: CountLimitLaw, j):
    """``P(K = j)``; zero outside the support."""
    j_arr = np.asarray(j)
    flat = np.array([_pmf_scalar(law, int(v)) if float(v).is_integer() else 0.0
                     for v in j_arr.ravel()])
    return flat.reshape(j_arr.shape)[()]


def _pmf_scalar(law: CountLimitLaw, j: int) -> float:
    if j < 0:
        return 0.0
    lam = law.lam
    kind = law.kind
    if kind == "poisson":
        return float(math.exp(-lam + j * math.log(lam) - math.lgamma(j + 1)))
    if kind == "binomial":
        if j > law.k:
            return 0.0
        q = law.success_probability
        return float(math.comb(law.k, j) * q**j * math.exp(-lam * (law.k - j)))
    if kind == "neg-binomial":
        q = law.success_probability
        return float(math.exp(math.lgamma(j + law.k + 1) - math.lgamma(j + 1) - math.lgamma(law.k + 1)
                              + (j * math.log(q) if j else 0.0) - lam * (law.k + 1)))
    if kind == "censored-poisson":
        if j > law.k:
            return 0.0
        if j == law.k:
            # upper tail P(Poi(lam) >= k)
            return float(special.gammainc(law.k, lam))
        return float(math.exp(-lam + j * math.log(lam) - math.lgamma(j + 1)))
    # quadrature-based extreme laws
    if law.support_max is not None and j > law.support_max:
        return 0.0
    return max(0.0, _cdf_below(law, j + 1) - _cdf_below(law, j))


def duality_check(sample, k: int | None, d: float, *, i: int | None = None, j: int | None = None) -> bool:
    """Verify ``[K- < i] == [X_{k:n} - X_{k-i:n} > d]`` and the ``K+`` analogue on every realization.

    ``sample`` is a :class:`WindowSample` (``k`` taken from it, ``i <= s``,
    ``j <= r``) or full sorted samples (1-D or one per row) with explicit ``k``.
    Returns the conjunction over all realizations.
    """
    if i is None and j is None:
        raise DomainError("give i, j or both")
    if isinstance(sample, WindowSample):
        w = sample
        if (i is not None and not 1 <= i <= w.s) or (j is not None and not 1 <= j <= w.r):
            raise DomainError("i must be <= s and j <= r for a window")
        cnt = window_counts(w, d)
        k_minus, k_plus = cnt.k_minus, cnt.k_plus
        center = w.center
        left_at = (lambda m: w.values[..., w.s - m])
        right_at = (lambda m: w.values[..., w.s + m])
    else:
        x = np.asarray(sample, dtype=float)
        n = x.shape[-1]
        if k is None or not 1 <= k <= n:
            raise DomainError("need 1 <= k <= n")
        if (i is not None and not 1 <= i <= k - 1) or (j is not None and not 1 <= j <= n - k):
            raise DomainError("index outside the sample")
        res = count_neighbors(x, k, d)
        k_minus, k_plus = (res.k_minus, res.k_plus) if isinstance(res, CountRecord) else res
        center = x[..., k - 1]
        left_at = (lambda m: x[..., k - 1 - m])
        right_at = (lambda m: x[..., k - 1 + m])
    ok = True
    if i is not None:
        ok &= bool(np.all((np.asarray(k_minus) < i) == (center - left_at(i) > d)))
    if j is not None:
        ok &= bool(np.all((np.asarray(k_plus) < j) == (right_at(j) - center > d)))
    return ok


def histogram(values) -> dict[int, int]:
    v = np.asarray(values, dtype=np.int64).ravel()
    if v.size == 0:
        return {}
    freq = np.bincount(v)
    return {int(k): int(f) for k, f in enumerate(freq) if f}


def histogram_csv(hist: Mapping[int, int]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["value", "frequency"])
    for k in sorted(hist):
        wr.writerow([k, hist[k]])
    return buf.getvalue()


def histogram_json(hist: Mapping[int, int]) -> str:
    return json.dumps({str(k): hist[k] for k in sorted(hist)})
