"""Exact simulation of order-statistic windows and their adjacent spacings.

A window is ``X_{k-s:n}, ..., X_{k:n}, ..., X_{k+r:n}``.  Three exact samplers
are available:

``full-sort``
    sort ``n`` uniforms and keep the window (the brute-force reference).
``top-down``
    for windows touching the sample maximum: ``U_{n:n} = V^{1/n}`` and
    ``U_{n-j:n} = U_{n-j+1:n} V_j^{1/(n-j)}``.  Costs ``O(r+s)``.
``beta-pivot``
    draw ``U_{k-s:n}`` from its Beta marginal by inversion, then the next
    ``r+s`` values as the lowest order statistics of the ``n-k+s`` uniforms
    above it (the mirrored top-down recursion).  Costs ``O(r+s)``.

Uniform order statistics are carried together with their complements
``1 - U`` so that parents with heavy or long upper tails are evaluated through
the inverse survival function without cancellation.

All samplers take their randomness from :class:`~spacings_lab.rng.ReplicateStreams`
and are vectorized over replicates (leading axes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .distributions import CentralRegime, DistributionSpec, NormingConstants
from .errors import DomainError, UnsupportedError
from .rng import ReplicateStreams, map_chunks

METHODS = ("full-sort", "top-down", "beta-pivot")

# uniforms per chunk when running many replicates
_CHUNK_UNIFORMS = 1 << 21


@dataclass(frozen=True)
class WindowSample:
    """Window values at positions ``k-s, ..., k+r`` (last axis).

    ``values`` is 1-D for a single replicate or ``(n_replicates, r+s+1)``.
    """

    n: int
    k: int
    r: int
    s: int
    values: np.ndarray
    seed: int
    method: str

    def __post_init__(self):
        if self.values.shape[-1] != self.r + self.s + 1:
            raise DomainError("window length must be r + s + 1")

    @property
    def center(self) -> np.ndarray:
        return self.values[..., self.s]

    def at(self, position: int) -> np.ndarray:
        """``X_{position:n}`` for ``k-s <= position <= k+r``."""
        idx = position - (self.k - self.s)
        if not 0 <= idx <= self.r + self.s:
            raise DomainError(f"position {position} outside the window")
        return self.values[..., idx]

    def __len__(self):
        return 1 if self.values.ndim == 1 else self.values.shape[0]


@dataclass(frozen=True)
class SpacingsVector:
    """Center ``X_{k:n}`` and adjacent spacings, nearest first on both sides."""

    center: np.ndarray
    right: np.ndarray
    left: np.ndarray
    n: int | None = None
    k: int | None = None


def _check_window(n: int, k: int, r: int, s: int):
    if r < 0 or s < 0:
        raise DomainError("r and s must be non-negative")
    if not (1 <= k - s and k + r <= n):
        raise DomainError(f"window k-s={k - s}, k+r={k + r} must lie within 1..{n}")


def stream_width(method: str, n: int, r: int, s: int) -> int:
    """Uniforms consumed per replicate by ``method``."""
    if method == "full-sort":
        return n
    if method in ("top-down", "beta-pivot"):
        return r + s + 1
    raise DomainError(f"unknown method {method!r}")


# -- uniform order statistics --------------------------------------------------

def _full_sort(u: np.ndarray, n: int, k: int, r: int, s: int):
    lo, hi = k - s - 1, k + r  # 0-based slice of the sorted sample
    part = np.partition(u, list(range(lo, hi)), axis=-1)[..., lo:hi]
    return part, 1.0 - part


def _top_down(u: np.ndarray, n: int, k: int, r: int, s: int):
    if k + r != n:
        raise UnsupportedError("top-down needs a window that reaches X_{n:n} (k + r = n)")
    m = r + s + 1
    # log U_{n-j:n} = sum_{i<=j} log V_i / (n - i)
    logs = np.cumsum(np.log(u) / (n - np.arange(m)), axis=-1)[..., ::-1]
    return np.exp(logs), -np.expm1(logs)


def _beta_pivot(u: np.ndarray, n: int, k: int, r: int, s: int):
    i0 = k - s
    a, b = i0, n - i0 + 1
    v0 = u[..., 0]
    if a <= b:
        piv = special.betaincinv(a, b, v0)
        piv_c = 1.0 - piv
    else:
        piv_c = special.betaincinv(b, a, 1.0 - v0)
        piv = 1.0 - piv_c
    m = n - i0  # uniforms above the pivot
    w = r + s
    log_c = np.cumsum(np.log(u[..., 1:]) / (m - np.arange(w)), axis=-1)
    frac = -np.expm1(log_c)
    vals = np.concatenate([piv[..., None], piv[..., None] + piv_c[..., None] * frac], axis=-1)
    comp = np.concatenate([piv_c[..., None], piv_c[..., None] * np.exp(log_c)], axis=-1)
    return vals, comp


_SAMPLERS = {"full-sort": _full_sort, "top-down": _top_down, "beta-pivot": _beta_pivot}


def uniform_window(u: np.ndarray, n: int, k: int, r: int, s: int, method: str):
    """Uniform order statistics ``U_{k-s:n}..U_{k+r:n}`` and complements from raw uniforms."""
    _check_window(n, k, r, s)
    try:
        sampler = _SAMPLERS[method]
    except KeyError:
        raise DomainError(f"unknown method {method!r}") from None
    return sampler(u, n, k, r, s)


def window_from_uniforms(dist: DistributionSpec, u: np.ndarray, n: int, k: int, r: int, s: int,
                         method: str) -> np.ndarray:
    vals, comp = uniform_window(u, n, k, r, s, method)
    return dist.quantile_pair(vals, comp)


def sample_window(
    dist: DistributionSpec,
    n: int,
    k: int,
    r: int,
    s: int,
    method: str = "beta-pivot",
    *,
    seed: int = 0,
    replicate: int = 0,
    stream_id: int = 0,
) -> WindowSample:
    """One replicate of the window; identical to row ``replicate`` of :func:`sample_windows`."""
    _check_window(n, k, r, s)
    if method == "top-down" and k + r != n:
        raise UnsupportedError("top-down needs a window that reaches X_{n:n} (k + r = n)")
    streams = ReplicateStreams(seed, stream_width(method, n, r, s), stream_id)
    values = window_from_uniforms(dist, streams.replicate(replicate), n, k, r, s, method)
    return WindowSample(n, k, r, s, np.asarray(values), seed, method)


def sample_windows(
    dist: DistributionSpec,
    n: int,
    k: int,
    r: int,
    s: int,
    method: str = "beta-pivot",
    n_replicates: int = 1,
    *,
    seed: int = 0,
    stream_id: int = 0,
    threads: int | None = None,
) -> WindowSample:
    """``n_replicates`` independent windows, shape ``(n_replicates, r+s+1)``."""
    _check_window(n, k, r, s)
    if n_replicates < 1:
        raise DomainError("n_replicates must be >= 1")
    if method == "top-down" and k + r != n:
        raise UnsupportedError("top-down needs a window that reaches X_{n:n} (k + r = n)")
    width = stream_width(method, n, r, s)
    streams = ReplicateStreams(seed, width, stream_id)
    chunk = max(1, _CHUNK_UNIFORMS // width)

    def work(start, count):
        return window_from_uniforms(dist, streams.block(start, count), n, k, r, s, method)

    values = np.concatenate(map_chunks(work, n_replicates, chunk, threads), axis=0)
    return WindowSample(n, k, r, s, values, seed, method)


def full_samples(dist: DistributionSpec, n: int, n_replicates: int, *, seed: int = 0,
                 stream_id: int = 0) -> np.ndarray:
    """Complete sorted samples, shape ``(n_replicates, n)``."""
    streams = ReplicateStreams(seed, n, stream_id)
    u = np.sort(streams.block(0, n_replicates), axis=-1)
    return dist.quantile_pair(u, 1.0 - u)


# -- spacings ------------------------------------------------------------------

def _exact_steps(start: np.ndarray, targets: np.ndarray, sign: float) -> np.ndarray:
    """Steps ``d_j >= 0`` with ``x_{j-1} + sign*d_j == x_j`` exactly in floating point.

    The rounded difference already satisfies this except occasionally when the
    window straddles zero; those entries are moved by one or two ulps.
    """
    out = np.empty_like(targets)
    prev = start
    for j in range(targets.shape[-1]):
        t = targets[..., j]
        d = sign * (t - prev)
        for _ in range(2):
            miss = prev + sign * d != t
            if not np.any(miss):
                break
            toward = np.where((prev + sign * d < t) == (sign > 0), np.inf, -np.inf)
            d = np.where(miss, np.nextafter(d, toward), d)
        out[..., j] = d
        prev = prev + sign * d
    return out


def spacings(w: WindowSample) -> SpacingsVector:
    """Split a window into its center and adjacent spacings (nearest first).

    Spacings are the floating-point differences, adjusted where needed so that
    :func:`reconstruct` returns the window bit for bit.
    """
    v = np.asarray(w.values, dtype=float)
    s = w.s
    center = v[..., s].copy()
    right = _exact_steps(center, v[..., s + 1:], 1.0)
    # left[j-1] = X_{k-j+1} - X_{k-j}
    left = _exact_steps(center, v[..., :s][..., ::-1], -1.0)
    return SpacingsVector(center, right, left, w.n, w.k)


def reconstruct(sv: SpacingsVector) -> np.ndarray:
    """Window values rebuilt from the center outwards, left to right in each direction."""
    c = np.asarray(sv.center)
    right = [c]
    for j in range(sv.right.shape[-1]):
        right.append(right[-1] + sv.right[..., j])
    left = [c]
    for j in range(sv.left.shape[-1]):
        left.append(left[-1] - sv.left[..., j])
    return np.stack(left[:0:-1] + right, axis=-1)


@dataclass(frozen=True)
class NormalizedWindow:
    center: np.ndarray
    right: np.ndarray
    left: np.ndarray

    def all_spacings(self) -> np.ndarray:
        """Left (outermost first) then right spacings, in window order."""
        return np.concatenate([self.left[..., ::-1], self.right], axis=-1)


def normalize(
    sv: SpacingsVector,
    nc: NormingConstants,
    regime: str,
    central: CentralRegime | None = None,
    *,
    per_rank: bool = False,
) -> NormalizedWindow:
    """Scale center and spacings by the regime's norming constants.

    Central (``theta = 1``): spacings ``* n f(x_p)``, center
    ``(X - x_p) sqrt(n) f(x_p) / sqrt(p(1-p))``.  Central with ``theta != 1``:
    spacings ``* n^theta / M`` and center
    ``sqrt(n/(p(1-p))) |(X - x_p)/M|^{1/theta}``.  Intermediate: spacings
    ``/ c_n`` and center ``(X - a_n)/(c_n sqrt(n-k))``.  Extreme: everything
    ``/ b_n``; ``per_rank`` multiplies the spacing ``X_{m:n} - X_{m-1:n}`` by
    ``n - m + 1``, its rank counted from the top.
    """
    if nc.regime != regime:
        raise DomainError(f"norming constants are for {nc.regime!r}, not {regime!r}")
    if central is not None and regime != "central":
        raise DomainError("central regime info given for a non-central regime")
    if per_rank and regime != "extreme":
        raise DomainError("per-rank scaling applies to the extreme regime only")
    if central is not None and central.theta != nc.theta:
        raise DomainError("central regime and norming constants disagree on theta")

    z = (np.asarray(sv.center) - nc.a_n) / nc.b_n
    if regime == "central" and nc.theta != 1.0:
        center = np.abs(z) ** (1.0 / nc.theta)
    else:
        center = z
    right = sv.right / nc.c_n
    left = sv.left / nc.c_n
    if per_rank:
        if sv.n is None or sv.k is None:
            raise DomainError("per-rank scaling needs n and k on the spacings")
        r, s = sv.right.shape[-1], sv.left.shape[-1]
        right = right * (sv.n - sv.k - np.arange(1, r + 1) + 1)
        left = left * (sv.n - sv.k + np.arange(1, s + 1))
    return NormalizedWindow(center, right, left)


def exponential_normalized_spacings(x: np.ndarray) -> np.ndarray:
    """``(n-i+1)(X_{i:n} - X_{i-1:n})`` for a full sorted sample (``X_{0:n} = 0``)."""
    n = x.shape[-1]
    prev = np.concatenate([np.zeros(x.shape[:-1] + (1,)), x[..., :-1]], axis=-1)
    return (n - np.arange(n)) * (x - prev)


def exponential_partial_sums(z: np.ndarray) -> np.ndarray:
    """``Z_1/n + ... + Z_i/(n-i+1)`` for ``i = 1..n``."""
    n = z.shape[-1]
    return np.cumsum(z / (n - np.arange(n)), axis=-1)
