"""Reproducible Haar-random sampling.

Unitaries are drawn from the Haar measure by QR-decomposing a complex
Ginibre matrix and absorbing the phases of R's diagonal into Q.  Without
that phase fix the QR convention biases the distribution; with it, the
first moment of Tr U vanishes and E|Tr U|^2 = 1 in every dimension, which
the test suite checks statistically.

Randomness flows through :class:`SeededRng`, a thin wrapper around
numpy's Philox counter-based generator.  Philox is seeded through
``SeedSequence``, so a 64-bit seed fully determines the stream, and
``child`` derives statistically independent substreams from (seed, key)
tuples.  Identical seeds give bit-identical output on any platform, which
is what makes experiment records replayable row by row.
"""

from __future__ import annotations

import numpy as np

from .qcore import UnitaryOperator

# Schmidt weights below this floor are rejected and redrawn so that every
# declared rank is numerically unambiguous.
MIN_SCHMIDT_WEIGHT = 1e-6
_MAX_WEIGHT_REDRAWS = 1000


class SeededRng:
    """Philox stream keyed by a non-negative integer seed.

    The underlying :class:`numpy.random.Generator` is exposed as
    ``generator``; ``child`` splits off derived streams, either keyed
    explicitly or by an internal spawn counter.
    """

    def __init__(self, seed: int):
        seed = int(seed)
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = seed
        self._spawned = 0
        self._generator = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(seed))
        )

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def child(self, *keys: int) -> "SeededRng":
        """Derived stream; without explicit keys a spawn counter is used."""
        if not keys:
            keys = (self._spawned,)
            self._spawned += 1
        return SeededRng(derive_seed(self.seed, *keys))

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed})"


def derive_seed(*keys: int) -> int:
    """Collapse an integer key tuple into a single 64-bit seed."""
    ss = np.random.SeedSequence(tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0])


def haar_unitary(dim: int, rng: SeededRng) -> UnitaryOperator:
    """Haar-distributed unitary on a ``dim``-dimensional space."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    g = rng.generator
    z = (g.standard_normal((dim, dim)) + 1j * g.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    # Phase fix: without it QR's sign convention skews the measure.
    q = q * (diag / np.abs(diag))[None, :]
    return UnitaryOperator(q)


def random_schmidt_coeffs(rank: int, rng: SeededRng) -> np.ndarray:
    """Random Schmidt coefficients for a state of the given rank.

    Weights c_k are drawn uniformly on (0, 1] and renormalized to sum to
    one; draws leaving any weight below ``MIN_SCHMIDT_WEIGHT`` are
    rejected.  Returns sqrt(c_k) in descending order, so the squares of
    the result sum to one.
    """
    if rank < 1:
        raise ValueError("rank must be positive")
    g = rng.generator
    for _ in range(_MAX_WEIGHT_REDRAWS):
        w = 1.0 - g.random(rank)  # uniform on (0, 1]
        w /= w.sum()
        if w.min() >= MIN_SCHMIDT_WEIGHT:
            return np.sort(np.sqrt(w))[::-1]
    raise RuntimeError("could not draw Schmidt weights above the floor")
