"""Counter-based random streams keyed by (seed, stream id)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """A Philox4x64 stream; the 128-bit key is (seed, stream_id).

    Draw sequences depend only on the key, never on thread scheduling, so a
    chain indexed by ``stream_id`` is reproducible on its own.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed & _MASK64, self.stream_id & _MASK64], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))
