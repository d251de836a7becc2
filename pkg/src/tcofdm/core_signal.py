"""Seeded random streams and the power-of-two DFT used by the OFDM chain."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class SizingError(ValueError):
    """Raised when a frame length is not a power of two."""


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def dft(frame, inverse: bool = False) -> np.ndarray:
    """Discrete Fourier transform along the last axis.

    The forward transform is unscaled and the inverse divides by the
    frame length, so ``dft(dft(x), inverse=True) == x``.

    Parameters
    ----------
    frame : array_like of complex
        One frame, or a stack of frames along the leading axes.
    inverse : bool
        Compute the inverse transform.

    Raises
    ------
    SizingError
        If the frame length is not a power of two of at least 2.
    """
    x = np.asarray(frame, dtype=np.complex128)
    n = x.shape[-1] if x.ndim else 0
    if n < 2 or not is_power_of_two(n):
        raise SizingError(f"transform length must be a power of two >= 2, got {n}")
    if inverse:
        return np.fft.ifft(x, axis=-1)
    return np.fft.fft(x, axis=-1)


@dataclass(frozen=True)
class RngStream:
    """An independent, reproducible random stream.

    A stream is identified by ``(seed, stream_id)``; ``spawn`` derives
    child streams keyed by further integers, e.g. one per Eb/N0 point and
    one per block batch inside that point. Each key path maps to a
    distinct ``numpy.random.SeedSequence`` spawn key, so streams never
    overlap.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = ()
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(
            self.seed & 0xFFFFFFFFFFFFFFFF,
            spawn_key=(self.stream_id, *self.path),
        )
        object.__setattr__(self, "_gen", np.random.Generator(np.random.PCG64(ss)))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def spawn(self, *keys: int) -> "RngStream":
        return RngStream(self.seed, self.stream_id, self.path + tuple(int(k) for k in keys))

    def normal(self, size=None) -> np.ndarray:
        return self._gen.standard_normal(size)

    def complex_normal(self, size, variance: float = 1.0) -> np.ndarray:
        """Circular complex Gaussian samples with the given total variance."""
        s = np.sqrt(variance / 2.0)
        return s * (self._gen.standard_normal(size) + 1j * self._gen.standard_normal(size))

    def bits(self, n: int) -> np.ndarray:
        return self._gen.integers(0, 2, size=n, dtype=np.int8)


def gaussian_pair(rng: RngStream) -> tuple[float, float]:
    """Two independent standard normal variates drawn from ``rng``."""
    a, b = rng.normal(2)
    return float(a), float(b)
