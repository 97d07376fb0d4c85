"""Parent distributions, tail diagnostics and norming constants.

A :class:`DistributionSpec` bundles the quantile function, cdf, survival
function and density of a continuous parent ``F`` together with its support
``(x0, x1)`` and its (upper-tail) domain of attraction.  Upper-tail
evaluations go through :meth:`DistributionSpec.isf` so that order statistics
near the top of large samples keep full relative precision.

Infinite endpoints are stored as ``math.inf`` and every formula that
subtracts an endpoint checks :attr:`DistributionSpec.upper_finite` first.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np
from scipy import integrate, interpolate, special

from .errors import DomainError, NumericalError, UnsupportedError

__all__ = [
    "DomainInfo",
    "DistributionSpec",
    "Uniform",
    "Exponential",
    "StandardNormal",
    "Pareto",
    "BoundedWeibullTail",
    "Chanda",
    "UserQuantile",
    "CentralRegime",
    "NormingConstants",
    "make_distribution",
    "from_config",
    "load_quantile_table",
    "quantile",
    "density_cdf",
    "mean_residual",
    "von_mises_diagnostic",
    "central_regime",
    "holder_ratios",
    "norming_constants",
    "tail_success_probability",
]

_DOMAINS = ("frechet", "weibull", "gumbel", "none")


@dataclass(frozen=True)
class DomainInfo:
    """Domain of maximal attraction of the upper tail."""

    domain: str
    alpha: float | None = None

    def __post_init__(self):
        if self.domain not in _DOMAINS:
            raise DomainError(f"unknown domain {self.domain!r}")
        needs_alpha = self.domain in ("frechet", "weibull")
        if needs_alpha != (self.alpha is not None):
            raise DomainError("alpha is required exactly for frechet and weibull domains")
        if self.alpha is not None and not self.alpha > 0:
            raise DomainError("alpha must be positive")


class DistributionSpec:
    """Base class for continuous parents.

    Subclasses implement ``_ppf``, ``_isf``, ``_cdf``, ``_sf`` and ``_pdf`` on
    arrays already known to lie in the valid range.
    """

    family: str = "abstract"
    x0: float = -math.inf
    x1: float = math.inf

    def __init__(self, params: Mapping[str, float] | None = None, domain: DomainInfo | None = None):
        self.params = dict(params or {})
        self.domain = domain if domain is not None else DomainInfo("none")

    # -- public evaluation -------------------------------------------------
    @property
    def support(self) -> tuple[float, float]:
        return (self.x0, self.x1)

    @property
    def upper_finite(self) -> bool:
        return math.isfinite(self.x1)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(~((u >= 0.0) & (u <= 1.0))):
            raise DomainError("quantile argument must lie in [0, 1]")
        with np.errstate(divide="ignore"):
            return self._ppf(u)[()]

    def isf(self, q):
        """``F^{-1}(1 - q)`` evaluated without forming ``1 - q``."""
        q = np.asarray(q, dtype=float)
        if np.any(~((q >= 0.0) & (q <= 1.0))):
            raise DomainError("isf argument must lie in [0, 1]")
        with np.errstate(divide="ignore"):
            return self._isf(q)[()]

    def quantile_pair(self, u, uc):
        """Quantile from a uniform ``u`` and its accurately known complement ``uc``."""
        u = np.asarray(u, dtype=float)
        uc = np.asarray(uc, dtype=float)
        upper = u > 0.5
        out = np.empty(np.broadcast(u, uc).shape)
        out[...] = np.where(upper, self._isf(np.where(upper, uc, 0.5)), self._ppf(np.where(upper, 0.5, u)))
        return out[()]

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        below, above = x <= self.x0, x >= self.x1
        inside = ~(below | above)
        out = np.where(above, 1.0, 0.0)
        if np.any(inside):
            out = np.where(inside, self._cdf(np.where(inside, x, self._interior())), out)
        return out[()]

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        below, above = x <= self.x0, x >= self.x1
        inside = ~(below | above)
        out = np.where(below, 1.0, 0.0)
        if np.any(inside):
            out = np.where(inside, self._sf(np.where(inside, x, self._interior())), out)
        return out[()]

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > self.x0) & (x < self.x1)
        out = np.zeros(x.shape)
        if np.any(inside):
            out = np.where(inside, self._pdf(np.where(inside, x, self._interior())), 0.0)
        return out[()]

    def _interior(self) -> float:
        return float(self._ppf(np.asarray(0.5)))

    # -- closed forms that subclasses may provide --------------------------
    def _mean_residual(self, x: float) -> float | None:
        return None

    def _upper_gap(self, q: float) -> float | None:
        """``x1 - F^{-1}(1 - q)`` without cancellation, when a closed form exists."""
        return None

    def _central(self, p: float) -> tuple[float, float] | None:
        """``(theta, M)`` where the quantile function is Hölder-singular at ``p``."""
        return None

    def satisfies_local_ratio_condition(self, p: float) -> bool:
        """A-priori annotation of the quantile-increment ratio condition at ``p``.

        The condition is a double limit and is not checked numerically.
        """
        f = float(self.pdf(self.quantile(p)))
        return math.isfinite(f) and f > 0

    def to_config(self) -> dict[str, Any]:
        return {"family": self.family, "params": dict(self.params)}

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"

    def __eq__(self, other):
        return type(self) is type(other) and self.params == other.params

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.params.items()))))


class Uniform(DistributionSpec):
    family = "uniform"
    x0, x1 = 0.0, 1.0

    def __init__(self):
        super().__init__({}, DomainInfo("weibull", 1.0))

    def _ppf(self, u):
        return u.astype(float)

    def _isf(self, q):
        return 1.0 - q

    def _cdf(self, x):
        return x

    def _sf(self, x):
        return 1.0 - x

    def _pdf(self, x):
        return np.ones_like(x)

    def _upper_gap(self, q):
        return float(q)

    def _mean_residual(self, x):
        return (1.0 - max(x, 0.0)) / 2.0 + max(0.0, -x)


class Exponential(DistributionSpec):
    family = "exponential"
    x0 = 0.0

    def __init__(self, rate: float = 1.0):
        if not rate > 0:
            raise DomainError("exponential rate must be positive")
        super().__init__({"rate": float(rate)}, DomainInfo("gumbel"))
        self.rate = float(rate)

    def _ppf(self, u):
        return -np.log1p(-u) / self.rate

    def _isf(self, q):
        return -np.log(q) / self.rate

    def _cdf(self, x):
        return -np.expm1(-self.rate * x)

    def _sf(self, x):
        return np.exp(-self.rate * x)

    def _pdf(self, x):
        return self.rate * np.exp(-self.rate * x)

    def _mean_residual(self, x):
        return 1.0 / self.rate + max(0.0, -x)


class StandardNormal(DistributionSpec):
    family = "standard-normal"

    def __init__(self):
        super().__init__({}, DomainInfo("gumbel"))

    def _ppf(self, u):
        return special.ndtri(u)

    def _isf(self, q):
        return -special.ndtri(q)

    def _cdf(self, x):
        return special.ndtr(x)

    def _sf(self, x):
        return special.ndtr(-x)

    def _pdf(self, x):
        return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)

    def _mean_residual(self, x):
        # hazard minus x; log form keeps the hazard accurate deep in the tail
        log_pdf = -0.5 * x * x - 0.5 * math.log(2.0 * math.pi)
        return math.exp(log_pdf - float(special.log_ndtr(-x))) - x


class Pareto(DistributionSpec):
    """Pareto with unit scale: ``F(x) = 1 - x^{-alpha}``, ``x >= 1``."""

    family = "pareto"
    x0 = 1.0

    def __init__(self, alpha: float):
        if not alpha > 0:
            raise DomainError("pareto alpha must be positive")
        super().__init__({"alpha": float(alpha)}, DomainInfo("frechet", float(alpha)))
        self.alpha = float(alpha)

    def _ppf(self, u):
        return np.power(1.0 - u, -1.0 / self.alpha)

    def _isf(self, q):
        return np.power(q, -1.0 / self.alpha)

    def _cdf(self, x):
        return -np.expm1(-self.alpha * np.log(x))

    def _sf(self, x):
        return np.power(x, -self.alpha)

    def _pdf(self, x):
        return self.alpha * np.power(x, -self.alpha - 1.0)

    def _mean_residual(self, x):
        if self.alpha <= 1.0:
            raise NumericalError("pareto tail mean diverges for alpha <= 1")
        if x >= 1.0:
            return x / (self.alpha - 1.0)
        return self.alpha / (self.alpha - 1.0) - x


class BoundedWeibullTail(DistributionSpec):
    """``F(x) = 1 - (x1 - x)^alpha`` on ``[x1 - 1, x1]``; Weibull domain with index alpha."""

    family = "bounded-weibull-tail"

    def __init__(self, alpha: float, x1: float = 1.0):
        if not alpha > 0:
            raise DomainError("alpha must be positive")
        super().__init__({"alpha": float(alpha), "x1": float(x1)}, DomainInfo("weibull", float(alpha)))
        self.alpha = float(alpha)
        self.x1 = float(x1)
        self.x0 = self.x1 - 1.0

    def _ppf(self, u):
        return self.x1 - np.power(1.0 - u, 1.0 / self.alpha)

    def _isf(self, q):
        return self.x1 - np.power(q, 1.0 / self.alpha)

    def _cdf(self, x):
        return 1.0 - np.power(self.x1 - x, self.alpha)

    def _sf(self, x):
        return np.power(self.x1 - x, self.alpha)

    def _pdf(self, x):
        return self.alpha * np.power(self.x1 - x, self.alpha - 1.0)

    def _upper_gap(self, q):
        return float(q) ** (1.0 / self.alpha)

    def _mean_residual(self, x):
        if x <= self.x0:
            return self.x1 - self.alpha / (self.alpha + 1.0) - x
        return (self.x1 - x) / (self.alpha + 1.0)


class Chanda(DistributionSpec):
    """Density ``(eta+1)|x|^eta / 2`` on ``[-1, 1]``, ``eta > -1``.

    At the median the density is 0 (``eta > 0``) or infinite (``eta < 0``),
    while the quantile function increments behave like ``(2h)^{1/(eta+1)}``.
    """

    family = "chanda"
    x0, x1 = -1.0, 1.0

    def __init__(self, eta: float):
        if not eta > -1:
            raise DomainError("chanda eta must exceed -1")
        super().__init__({"eta": float(eta)}, DomainInfo("weibull", 1.0))
        self.eta = float(eta)

    def _ppf(self, u):
        t = 2.0 * u - 1.0
        return np.sign(t) * np.power(np.abs(t), 1.0 / (self.eta + 1.0))

    def _isf(self, q):
        t = 1.0 - 2.0 * q
        return np.sign(t) * np.power(np.abs(t), 1.0 / (self.eta + 1.0))

    def _cdf(self, x):
        return 0.5 * (1.0 + np.sign(x) * np.power(np.abs(x), self.eta + 1.0))

    def _sf(self, x):
        return 0.5 * (1.0 - np.sign(x) * np.power(np.abs(x), self.eta + 1.0))

    def _pdf(self, x):
        with np.errstate(divide="ignore"):
            return 0.5 * (self.eta + 1.0) * np.power(np.abs(x), self.eta)

    def _upper_gap(self, q):
        if q > 0.5:
            return None
        return -math.expm1(math.log1p(-2.0 * q) / (self.eta + 1.0))

    def _central(self, p):
        if p == 0.5 and self.eta != 0.0:
            theta = 1.0 / (self.eta + 1.0)
            return theta, 2.0**theta
        return None

    def satisfies_local_ratio_condition(self, p):
        if p == 0.5:
            return self.eta == 0.0
        return True


class UserQuantile(DistributionSpec):
    """A parent given only through its quantile function.

    The cdf is recovered by bracketed bisection (absolute tolerance 1e-12 in
    probability) and the density by a central difference of that cdf.
    """

    family = "user-defined-via-quantile"

    def __init__(
        self,
        qf: Callable[[np.ndarray], np.ndarray],
        domain: DomainInfo | None = None,
        name: str = "user",
        params: Mapping[str, Any] | None = None,
    ):
        super().__init__(dict(params or {"name": name}), domain)
        self._qf = qf
        self.x0 = float(qf(np.asarray(0.0)))
        self.x1 = float(qf(np.asarray(1.0)))

    def _ppf(self, u):
        return np.asarray(self._qf(u), dtype=float)

    def _isf(self, q):
        return np.asarray(self._qf(1.0 - q), dtype=float)

    def _cdf(self, x):
        x = np.asarray(x, dtype=float)
        lo = np.zeros(x.shape)
        hi = np.ones(x.shape)
        while np.max(hi - lo, initial=0.0) > 1e-12:
            mid = 0.5 * (lo + hi)
            below = self._ppf(mid) < x
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def _sf(self, x):
        return 1.0 - self._cdf(x)

    def _pdf(self, x):
        x = np.asarray(x, dtype=float)
        h = np.maximum(1e-6, 1e-6 * np.abs(x))
        return np.maximum((self.cdf(x + h) - self.cdf(x - h)) / (2.0 * h), 0.0)


def load_quantile_table(path: str | Path, domain: DomainInfo | None = None) -> UserQuantile:
    """Build a :class:`UserQuantile` from a two-column CSV ``(u, F^{-1}(u))``.

    Rows may carry a header; ``u`` must start at 0, end at 1, and both
    columns must be nondecreasing.  Interpolation is monotone cubic (PCHIP).
    """
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].startswith("#"):
                continue
            try:
                rows.append((float(rec[0]), float(rec[1])))
            except ValueError:
                if rows:
                    raise
    if len(rows) < 2:
        raise DomainError("quantile table needs at least two rows")
    u, x = np.array(rows).T
    if u[0] != 0.0 or u[-1] != 1.0:
        raise DomainError("quantile table must span u = 0 to u = 1")
    if np.any(np.diff(u) <= 0) or np.any(np.diff(x) < 0):
        raise DomainError("quantile table must be increasing in u and nondecreasing in x")
    if not np.all(np.isfinite(x)):
        raise DomainError("quantile table values must be finite")
    pchip = interpolate.PchipInterpolator(u, x)
    return UserQuantile(lambda v: pchip(np.clip(v, 0.0, 1.0)), domain=domain,
                        params={"table": str(path)})


_FAMILIES: dict[str, Callable[..., DistributionSpec]] = {
    "uniform": Uniform,
    "exponential": Exponential,
    "standard-normal": StandardNormal,
    "pareto": Pareto,
    "bounded-weibull-tail": BoundedWeibullTail,
    "chanda": Chanda,
}


def make_distribution(family: str, **params) -> DistributionSpec:
    try:
        ctor = _FAMILIES[family]
    except KeyError:
        raise DomainError(f"unknown family {family!r}") from None
    try:
        return ctor(**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {family}: {exc}") from None


def from_config(cfg: Mapping[str, Any]) -> DistributionSpec:
    """``{"family": ..., "params": {...}}``; user tables use ``params.table``."""
    if "family" not in cfg:
        raise DomainError("distribution config needs 'family'")
    family = cfg["family"]
    params = dict(cfg.get("params") or {})
    if family == "user-defined-via-quantile":
        dom = params.pop("domain", None)
        domain = DomainInfo(dom["domain"], dom.get("alpha")) if dom else None
        if "table" not in params:
            raise DomainError("user-defined-via-quantile needs params.table")
        return load_quantile_table(params["table"], domain)
    return make_distribution(family, **params)


# -- distribution-level operations -------------------------------------------

def quantile(dist: DistributionSpec, u):
    return dist.quantile(u)


def density_cdf(dist: DistributionSpec, x):
    return dist.pdf(x), dist.cdf(x)


def mean_residual(dist: DistributionSpec, x: float) -> float:
    """Mean residual life ``E(X - x | X > x)``.

    Closed form when the family has one, otherwise adaptive Gauss-Kronrod
    quadrature of the survival function up to ``F^{-1}(1 - 1e-12)``.
    """
    x = float(x)
    if x >= dist.x1 or float(dist.sf(x)) <= 0.0:
        raise DomainError("mean residual life needs F(x) < 1")
    closed = dist._mean_residual(x)
    if closed is not None:
        return float(closed)
    lo = max(x, dist.x0)
    hi = float(dist.isf(1e-12))
    if hi <= lo:
        return 0.0
    val, _ = integrate.quad(lambda t: float(dist.sf(t)), lo, hi, epsrel=1e-8, epsabs=0.0, limit=200)
    if not math.isfinite(val):
        raise NumericalError("tail mean diverges")
    return (val + (lo - x)) / float(dist.sf(x))


def von_mises_diagnostic(dist: DistributionSpec, domain: DomainInfo, x: float) -> float:
    """Ratio whose limit at the upper endpoint identifies the domain of attraction.

    ``x f/(1-F)`` for Fréchet, ``(x1-x) f/(1-F)`` for Weibull and
    ``f m/(1-F)`` for Gumbel; the limits are alpha, alpha and 1.
    """
    tail = float(dist.sf(x))
    if tail <= 0:
        raise DomainError("diagnostic needs F(x) < 1")
    f = float(dist.pdf(x))
    if domain.domain == "frechet":
        return x * f / tail
    if domain.domain == "weibull":
        if not dist.upper_finite:
            raise UnsupportedError("weibull diagnostic needs a finite upper endpoint")
        return (dist.x1 - x) * f / tail
    if domain.domain == "gumbel":
        return f * mean_residual(dist, x) / tail
    raise UnsupportedError("no von Mises ratio for domain 'none'")


@dataclass(frozen=True)
class CentralRegime:
    """Local behaviour of ``F^{-1}`` at ``p``: ``|F^{-1}(p+h) - x_p| ~ M |h|^theta``."""

    p: float
    x_p: float
    f_xp: float
    theta: float
    M: float

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise DomainError("p must lie in (0, 1)")
        if not (self.theta > 0 and self.M > 0):
            raise DomainError("theta and M must be positive")


def central_regime(dist: DistributionSpec, p: float) -> CentralRegime:
    if not 0 < p < 1:
        raise DomainError("p must lie in (0, 1)")
    x_p = float(dist.quantile(p))
    f = float(dist.pdf(x_p))
    special_case = dist._central(p)
    if special_case is not None:
        theta, M = special_case
        return CentralRegime(p, x_p, f, theta, M)
    if not (math.isfinite(f) and f > 0):
        raise NumericalError(f"f(x_p) = {f} at p = {p}; supply theta and M explicitly")
    return CentralRegime(p, x_p, f, 1.0, 1.0 / f)


def holder_ratios(dist: DistributionSpec, p: float, theta: float, hs) -> np.ndarray:
    """``|F^{-1}(p+h) - F^{-1}(p)| / h^theta`` for each step ``h``."""
    hs = np.asarray(hs, dtype=float)
    return np.abs(dist.quantile(p + hs) - dist.quantile(p)) / hs**theta


@dataclass(frozen=True)
class NormingConstants:
    """Centering ``a_n``, center scale ``b_n``, spacing scale ``c_n`` and ``t_n``."""

    regime: str
    a_n: float
    b_n: float
    c_n: float
    t_n: float | None = None
    theta: float = 1.0
    meta: dict = field(default_factory=dict, compare=False)


_REGIMES = ("central", "intermediate", "extreme")


def norming_constants(
    dist: DistributionSpec,
    n: int,
    k: int,
    regime: str,
    central: CentralRegime | None = None,
    *,
    intermediate_scale: str = "density",
) -> NormingConstants:
    """Regime-specific constants for ``X_{k:n}`` and its adjacent spacings.

    central
        ``c_n = 1/(n f(x_p))`` and ``t_n = sqrt(p(1-p)/n)``; the center scale is
        ``b_n = t_n / f(x_p)``.  When the density is degenerate at ``x_p``
        (``theta != 1``) the spacing scale becomes ``M n^{-theta}`` and
        ``b_n = M t_n^theta`` so that ``|(X - x_p)/b_n|^{1/theta}`` is the
        normalized center.
    intermediate
        ``a_n = F^{-1}(k/n)``, ``c_n = 1/(n f(a_n))``, ``b_n = c_n sqrt(n-k)``.
        ``intermediate_scale="domain"`` swaps in the tail-index based spacing
        scale (``a_n/(alpha(n-k))``, ``(x1-a_n)/(alpha(n-k))`` or
        ``m(a_n)/(n-k)``).
    extreme
        Fréchet ``(0, F^{-1}(1-1/n))``, Weibull ``(x1, x1 - F^{-1}(1-1/n))``,
        Gumbel ``(F^{-1}(1-1/n), m(a_n))``.  Spacings share ``b_n``.
    """
    if regime not in _REGIMES:
        raise DomainError(f"unknown regime {regime!r}")
    if not (1 <= k <= n):
        raise DomainError("need 1 <= k <= n")

    if regime == "central":
        if central is None:
            central = central_regime(dist, k / n)
        p = central.p
        t_n = math.sqrt(p * (1.0 - p) / n)
        if central.theta == 1.0:
            f = central.f_xp
            if not (math.isfinite(f) and f > 0):
                raise NumericalError("central regime needs finite positive f(x_p)")
            return NormingConstants("central", central.x_p, t_n / f, 1.0 / (n * f), t_n, 1.0)
        th, M = central.theta, central.M
        return NormingConstants("central", central.x_p, M * t_n**th, M * n**-th, t_n, th)

    if regime == "intermediate":
        if k == n:
            raise DomainError("intermediate regime needs n - k >= 1")
        a_n = float(dist.quantile(k / n))
        if intermediate_scale == "density":
            f = float(dist.pdf(a_n))
            if not (math.isfinite(f) and f > 0):
                raise NumericalError(f"f(a_n) = {f} is not finite and positive")
            c_n = 1.0 / (n * f)
        elif intermediate_scale == "domain":
            c_n = _domain_intermediate_scale(dist, a_n, n - k)
        else:
            raise DomainError(f"unknown intermediate_scale {intermediate_scale!r}")
        return NormingConstants("intermediate", a_n, c_n * math.sqrt(n - k), c_n)

    dom = dist.domain
    top = float(dist.isf(1.0 / n))
    if dom.domain == "frechet":
        a_n, b_n = 0.0, top
    elif dom.domain == "weibull":
        gap = dist._upper_gap(1.0 / n)
        a_n, b_n = dist.x1, dist.x1 - top if gap is None else gap
    elif dom.domain == "gumbel":
        a_n, b_n = top, mean_residual(dist, top)
    else:
        raise UnsupportedError("extreme norming needs a declared domain of attraction")
    if not (math.isfinite(b_n) and b_n > 0):
        raise NumericalError(f"b_n = {b_n} is not finite and positive")
    return NormingConstants("extreme", a_n, b_n, b_n, meta={"domain": dom.domain})


def _domain_intermediate_scale(dist: DistributionSpec, a_n: float, m: int) -> float:
    dom = dist.domain
    if dom.domain == "frechet":
        return a_n / (dom.alpha * m)
    if dom.domain == "weibull":
        return (dist.x1 - a_n) / (dom.alpha * m)
    if dom.domain == "gumbel":
        return mean_residual(dist, a_n) / m
    raise UnsupportedError("domain-based scale needs a declared domain")


def tail_success_probability(dist: DistributionSpec, d: float) -> float | None:
    """``lim_{x -> x1} (1-F(x+d))/(1-F(x))`` when it lies strictly in (0, 1), else ``None``."""
    if isinstance(dist, Exponential):
        return math.exp(-dist.rate * d)
    return None
