"""Reference limit laws: samplers and scalar cdfs.

These are the oracle side of the convergence checks.  Every sampler is an
inversion from a fixed number of uniforms per draw (``LimitLaw.width``) so it
composes with :class:`~spacings_lab.rng.ReplicateStreams`.

The extreme-value W-vectors use the unit-exponential partial sums
``S_i = Z_1 + ... + Z_i``:

* Fréchet(alpha): ``W_i = S_i^{-1/alpha}``
* Weibull(alpha): ``W_i = -S_i^{1/alpha}``
* Gumbel:         ``W_i = -log S_i``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import DomainError, UnsupportedError
from .rng import ReplicateStreams

EULER_GAMMA = 0.5772156649015329

KINDS = (
    "exp-iid",
    "std-normal",
    "half-normal",
    "gamma",
    "powered-exp",
    "weibull",
    "gumbel-W-vector",
    "frechet-W-vector",
    "weibull-W-vector",
    "exp-max",
    "extreme-spacing-pair",
    "frechet-G",
    "weibull-G",
    "gumbel-G",
)

_VECTOR_KINDS = {"exp-iid", "gumbel-W-vector", "frechet-W-vector", "weibull-W-vector"}


@dataclass(frozen=True)
class LimitLaw:
    kind: str
    m: int | None = None
    theta: float | None = None
    delta: float | None = None
    alpha: float | None = None
    i: int | None = None
    j: int | None = None
    domain: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown limit law {self.kind!r}")
        for name in ("m", "i", "j"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise DomainError(f"{name} must be >= 1")
        for name in ("theta", "delta", "alpha"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise DomainError(f"{name} must be positive")
        required = {
            "exp-iid": ("m",),
            "gamma": ("m",),
            "powered-exp": ("theta",),
            "weibull": ("delta",),
            "gumbel-W-vector": ("j",),
            "frechet-W-vector": ("alpha", "j"),
            "weibull-W-vector": ("alpha", "j"),
            "exp-max": ("j",),
            "extreme-spacing-pair": ("domain", "i", "j"),
            "frechet-G": ("alpha",),
            "weibull-G": ("alpha",),
        }.get(self.kind, ())
        missing = [f for f in required if getattr(self, f) is None]
        if missing:
            raise DomainError(f"{self.kind} needs {', '.join(missing)}")
        if self.kind == "extreme-spacing-pair":
            if self.domain not in ("frechet", "weibull", "gumbel"):
                raise DomainError("pair domain must be frechet, weibull or gumbel")
            if self.domain != "gumbel" and self.alpha is None:
                raise DomainError("frechet/weibull pair needs alpha")
            if not self.i < self.j:
                raise DomainError("pair needs i < j")

    @property
    def is_vector(self) -> bool:
        return self.kind in _VECTOR_KINDS

    @property
    def dim(self) -> int:
        if self.kind == "exp-iid":
            return self.m
        if self.kind.endswith("W-vector"):
            return self.j
        return 1

    @property
    def width(self) -> int:
        """Uniforms consumed per draw."""
        if self.kind == "exp-iid":
            return self.m
        if self.kind.endswith("W-vector") or self.kind in ("exp-max", "extreme-spacing-pair"):
            return self.j
        return 1

    @classmethod
    def parse(cls, tag: str) -> "LimitLaw":
        """``"kind"`` or ``"kind:key=value,key=value"``, e.g. ``"exp-max:j=3"``."""
        kind, _, rest = tag.partition(":")
        kw = {}
        for item in filter(None, rest.split(",")):
            key, _, val = item.partition("=")
            key = key.strip()
            if key in ("m", "i", "j"):
                kw[key] = int(val)
            elif key == "domain":
                kw[key] = val.strip()
            elif key in ("theta", "delta", "alpha"):
                kw[key] = float(val)
            else:
                raise DomainError(f"unknown limit-law parameter {key!r}")
        return cls(kind.strip(), **kw)


def _exp(u):
    return -np.log(u)


def sample_limit(law: LimitLaw, u: np.ndarray) -> np.ndarray:
    """Draws of ``law`` from uniforms of shape ``(..., law.width)``.

    Returns shape ``(..., law.dim)`` for vector laws and ``(...)`` for scalar laws.
    """
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != law.width:
        raise DomainError(f"{law.kind} consumes {law.width} uniforms per draw")
    kind = law.kind
    if kind == "exp-iid":
        return _exp(u)
    if kind == "std-normal":
        return special.ndtri(u[..., 0])
    if kind == "half-normal":
        return special.ndtri(0.5 + 0.5 * u[..., 0])
    if kind == "gamma":
        return special.gammainccinv(law.m, u[..., 0])
    if kind == "powered-exp":
        return _exp(u[..., 0]) ** law.theta
    if kind == "weibull":
        return _exp(u[..., 0]) ** (1.0 / law.delta)
    if kind == "exp-max":
        z = _exp(u)
        return z @ (1.0 / np.arange(1, law.j + 1))
    if kind.endswith("W-vector"):
        return _w_vector(kind.split("-")[0], law.alpha, np.cumsum(_exp(u), axis=-1))
    if kind == "extreme-spacing-pair":
        s = np.cumsum(_exp(u), axis=-1)
        w = _w_vector(law.domain, law.alpha, s[..., [law.i - 1, law.j - 1]])
        return w[..., 0] - w[..., 1]
    if kind == "frechet-G":
        return _exp(u[..., 0]) ** (-1.0 / law.alpha)
    if kind == "weibull-G":
        return -(_exp(u[..., 0]) ** (1.0 / law.alpha))
    if kind == "gumbel-G":
        return -np.log(_exp(u[..., 0]))
    raise UnsupportedError(kind)  # pragma: no cover


def _w_vector(domain: str, alpha: float | None, partial_sums: np.ndarray) -> np.ndarray:
    if domain == "frechet":
        return partial_sums ** (-1.0 / alpha)
    if domain == "weibull":
        return -(partial_sums ** (1.0 / alpha))
    return -np.log(partial_sums)


def draw(law: LimitLaw, size: int, *, seed: int = 0, stream_id: int = 0, start: int = 0) -> np.ndarray:
    """``size`` counter-based draws of ``law`` (replicates ``start..start+size-1``)."""
    streams = ReplicateStreams(seed, law.width, stream_id)
    return sample_limit(law, streams.block(start, size))


def limit_cdf(law: LimitLaw, x):
    """Closed-form cdf of a scalar law.

    ``extreme-spacing-pair`` is evaluated by a one-dimensional integral over the
    Gamma mixing variable (see :func:`pair_survival`).
    """
    if law.is_vector:
        raise UnsupportedError(f"{law.kind} is a vector law; no scalar cdf")
    x = np.asarray(x, dtype=float)
    kind = law.kind
    pos = np.maximum(x, 0.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        if kind == "std-normal":
            out = special.ndtr(x)
        elif kind == "half-normal":
            out = np.where(x > 0, special.erf(pos / math.sqrt(2.0)), 0.0)
        elif kind == "gamma":
            out = special.gammainc(law.m, pos)
        elif kind == "powered-exp":
            out = -np.expm1(-(pos ** (1.0 / law.theta)))
        elif kind == "weibull":
            out = -np.expm1(-(pos ** law.delta))
        elif kind == "exp-max":
            out = (-np.expm1(-pos)) ** law.j
        elif kind == "frechet-G":
            out = np.where(x > 0, np.exp(-(pos ** -law.alpha)), 0.0)
        elif kind == "weibull-G":
            out = np.where(x <= 0, np.exp(-((-np.minimum(x, 0.0)) ** law.alpha)), 1.0)
        elif kind == "gumbel-G":
            out = np.exp(-np.exp(-x))
        elif kind == "extreme-spacing-pair":
            flat = [1.0 - pair_survival(law.domain, law.alpha, law.i, law.j, float(v)) for v in x.ravel()]
            out = np.array(flat).reshape(x.shape)
        else:  # pragma: no cover
            raise UnsupportedError(kind)
    return out[()]


def pair_survival(domain: str, alpha: float | None, i: int, j: int, x: float) -> float:
    """``P(W_i - W_j > x)`` for the extreme-value W-vector of ``domain``.

    With ``A = S_i ~ Gam(i)`` and ``B = S_j - S_i ~ Gam(j-i)`` independent, the
    event is ``B > t(A)`` for a domain-specific threshold, so the probability is
    ``int g_i(a) Q(j-i, t(a)) da`` with ``Q`` the regularized upper incomplete
    gamma function (a Poisson cdf for integer shapes).
    """
    if not 1 <= i < j:
        raise DomainError("need 1 <= i < j")
    if x <= 0:
        return 1.0
    m = j - i
    if domain == "gumbel":
        # B > A (e^x - 1): closed form through the beta distribution of A/(A+B)
        return float(special.betainc(i, m, math.exp(-x)))
    if domain == "weibull":
        if alpha is None:
            raise DomainError("weibull pair needs alpha")

        def threshold(a):
            return (x + a ** (1.0 / alpha)) ** alpha - a

        upper = math.inf
    elif domain == "frechet":
        if alpha is None:
            raise DomainError("frechet pair needs alpha")

        def threshold(a):
            return (a ** (-1.0 / alpha) - x) ** (-alpha) - a

        upper = x ** (-alpha)
    else:
        raise UnsupportedError(f"no pair law for domain {domain!r}")

    def integrand(a):
        if a <= 0.0:
            return 0.0
        log_g = (i - 1) * math.log(a) - a - math.lgamma(i)
        return math.exp(log_g) * float(special.gammaincc(m, threshold(a)))

    return _integrate_gamma_weight(integrand, i, upper)


def _integrate_gamma_weight(integrand, shape: int, upper: float) -> float:
    # split at the bulk of the Gam(shape) weight so QUADPACK sees the mass
    mid = float(special.gammaincinv(shape, 0.5))
    hi = float(special.gammaincinv(shape, 1.0 - 1e-16))
    cuts = [0.0, min(mid, upper), min(hi, upper)]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b > a:
            val, _ = integrate.quad(integrand, a, b, epsabs=1e-12, epsrel=1e-10, limit=200)
            total += val
    return min(max(total, 0.0), 1.0)


# -- Hall's series for the Gumbel W-vector -----------------------------------

HALL_TAIL_VARIANCE = 1e-6


@lru_cache(maxsize=None)
def hall_truncation_index(tail_variance: float = HALL_TAIL_VARIANCE) -> int:
    """Smallest ``I`` with ``sum_{i>I} 1/i^2 < tail_variance``."""
    lo, hi = 1, 1
    while float(special.polygamma(1, hi + 1)) >= tail_variance:
        lo, hi = hi, hi * 2
    while lo < hi:
        mid = (lo + hi) // 2
        if float(special.polygamma(1, mid + 1)) < tail_variance:
            hi = mid
        else:
            lo = mid + 1
    return hi


def hall_width(k: int, explicit_terms: int = 512) -> int:
    return max(0, explicit_terms - k + 1) + 1


def hall_series_sample(k: int, u: np.ndarray, *, explicit_terms: int = 512,
                       tail_variance: float = HALL_TAIL_VARIANCE) -> np.ndarray:
    """Truncated series ``sum_{i=k}^{I} (Z_i - 1)/i + gamma - H_{k-1}``.

    Terms ``i = k..explicit_terms`` are summed one exponential at a time.  The
    remaining block ``sum_{i=L}^{I} Z_i/i`` (``L = max(k, explicit_terms+1)``)
    equals in law the ``(I-L+1)``-th order statistic of ``I`` unit
    exponentials, i.e. ``-log B`` with ``B ~ Beta(L, I-L+1)``, and is drawn
    from a single uniform by inversion.  ``u`` has shape ``(..., hall_width(k))``.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != hall_width(k, explicit_terms):
        raise DomainError("wrong number of uniforms for hall_series_sample")
    big_i = hall_truncation_index(tail_variance)
    n_explicit = max(0, explicit_terms - k + 1)
    total = np.zeros(u.shape[:-1])
    if n_explicit:
        idx = np.arange(k, k + n_explicit)
        total = total + _exp(u[..., :n_explicit]) @ (1.0 / idx)
    lo = max(k, explicit_terms + 1)
    block = -np.log(special.betaincinv(lo, big_i - lo + 1, u[..., -1]))
    # sum_{i=k}^{I} 1/i and H_{k-1} via digamma
    harmonic_k_to_i = float(special.digamma(big_i + 1) - special.digamma(k))
    harmonic_below_k = float(special.digamma(k) + EULER_GAMMA)
    return total + block - harmonic_k_to_i + EULER_GAMMA - harmonic_below_k


def draw_hall(k: int, size: int, *, seed: int = 0, stream_id: int = 0,
              explicit_terms: int = 512, chunk: int = 4096) -> np.ndarray:
    streams = ReplicateStreams(seed, hall_width(k, explicit_terms), stream_id)
    parts = [
        hall_series_sample(k, streams.block(s, min(chunk, size - s)), explicit_terms=explicit_terms)
        for s in range(0, size, chunk)
    ]
    return np.concatenate(parts)
