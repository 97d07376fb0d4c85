"""Counter-based replicate streams.

Every replicate ``i`` of an experiment owns a fixed block of Philox counters,
so its uniforms depend only on ``(seed, stream_id, i)``.  Replicates can be
generated in any order, in any chunking, on any number of workers, and still
come out identical.

All variates in the package are produced by inversion from these uniforms,
which keeps the number of uniforms consumed per replicate fixed and known in
advance (the stream ``width``).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

_TWO_POW_M53 = 2.0**-53
_MASK64 = (1 << 64) - 1


def _to_uniform(raw: np.ndarray) -> np.ndarray:
    # midpoint of a 53-bit grid cell: strictly inside (0, 1)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_POW_M53


class ReplicateStreams:
    """Uniform variates for replicate ``i`` of width ``width``.

    Parameters
    ----------
    seed : int
        Master seed (any non-negative integer; 64-bit in practice).
    width : int
        Number of uniforms each replicate consumes.
    stream_id : int
        Separates independent purposes under one master seed, e.g. the
        simulated side and the oracle side of a two-sample test.
    """

    def __init__(self, seed: int, width: int, stream_id: int = 0):
        if width < 1:
            raise ValueError("width must be >= 1")
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = int(seed)
        self.width = int(width)
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self._key = ss.generate_state(2, np.uint64)
        # Philox4x64 emits 4 words per counter increment
        self._blocks = -(-self.width // 4)

    def _bitgen(self, start: int) -> np.random.Philox:
        c = start * self._blocks
        counter = np.array([c & _MASK64, (c >> 64) & _MASK64, 0, 0], dtype=np.uint64)
        return np.random.Philox(key=self._key, counter=counter)

    def block(self, start: int, count: int) -> np.ndarray:
        """Uniforms for replicates ``start, ..., start+count-1``, shape (count, width)."""
        if count <= 0:
            return np.empty((0, self.width))
        raw = self._bitgen(start).random_raw(count * self._blocks * 4)
        raw = raw.reshape(count, self._blocks * 4)[:, : self.width]
        return _to_uniform(raw)

    def replicate(self, index: int) -> np.ndarray:
        """Uniforms for a single replicate, shape (width,)."""
        return self.block(index, 1)[0]


def default_threads() -> int:
    return os.cpu_count() or 1


def map_chunks(
    func: Callable[[int, int], np.ndarray],
    n_total: int,
    chunk: int,
    threads: int | None = None,
) -> list[np.ndarray]:
    """Apply ``func(start, count)`` over consecutive chunks, preserving order."""
    starts = list(range(0, n_total, chunk))
    counts = [min(chunk, n_total - s) for s in starts]
    threads = threads or 1
    if threads <= 1 or len(starts) == 1:
        return [func(s, c) for s, c in zip(starts, counts)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, starts, counts))
