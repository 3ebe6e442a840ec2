"""Reproducible random streams.

Every stochastic routine in the package draws from counter-based Philox
streams keyed by (master seed, purpose tag, block index).  Work is split
into fixed-size blocks of replications; block b always consumes stream
(seed, tag, b) from the start, so results are independent of how blocks
are scheduled across workers.
"""

from __future__ import annotations

import numpy as np

# Replications per substream block.  Fixed: changing it changes which
# stream serves which replication and therefore the sampled values.
BLOCK = 4096

# Purpose tags keep streams of different experiment stages disjoint even
# under a shared master seed.
TAG_ONG = 1
TAG_NN = 2
TAG_INCREMENT = 3
TAG_RDE = 4
TAG_DIAGNOSTIC = 5
TAG_SPACINGS = 6


def substream(master_seed: int, tag: int, block: int) -> np.random.Generator:
    """Independent generator for one block of one experiment stage."""
    ss = np.random.SeedSequence(entropy=(int(master_seed), int(tag), int(block)))
    return np.random.Generator(np.random.Philox(seed=ss))


def block_ranges(replications: int, block_size: int = BLOCK):
    """Yield (block_index, count) covering `replications` items."""
    full, rem = divmod(replications, block_size)
    for b in range(full):
        yield b, block_size
    if rem:
        yield full, rem


class ReplayStream:
    """Deterministic stand-in for a Generator, serving preset uniforms.

    Used by unit tests to inject exact point configurations through the
    same code path as random sampling.
    """

    def __init__(self, values):
        self._values = np.asarray(values, dtype=np.float64).ravel()
        self._pos = 0

    def random(self, size=None):
        if size is None:
            return float(self._take(1)[0])
        shape = (size,) if np.isscalar(size) else tuple(size)
        n = int(np.prod(shape))
        return self._take(n).reshape(shape).copy()

    def _take(self, n: int) -> np.ndarray:
        if self._pos + n > self._values.size:
            raise ValueError("replay stream exhausted")
        out = self._values[self._pos:self._pos + n]
        self._pos += n
        return out
