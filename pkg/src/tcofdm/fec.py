"""Recursive systematic convolutional encoder and the three-branch PCCC.

The constituent code is the memory-2 RSC with feedback polynomial 7 and
feedforward polynomial 5 (octal). Three copies run in parallel: one on
the natural-order block and one on each of two interleaved versions, so
every information bit yields four coded bits ``[sys, p1, p2, p3]``.
None of the constituents is terminated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from tcofdm.core_signal import RngStream


def _octal_taps(poly: int, memory: int) -> list[int]:
    # coefficient of D^0 first
    bits = [int(c) for c in format(int(str(poly), 8), f"0{memory + 1}b")]
    return bits


@dataclass(frozen=True)
class Trellis:
    """State-transition table of an RSC constituent encoder.

    States are integers whose bits hold the shift register, most recent
    feedback bit in the high position. ``next_state[s, u]`` and
    ``parity[s, u]`` give the transition for input bit ``u``.
    """

    memory: int = 2
    feedback: int = 7
    feedforward: int = 5

    def __post_init__(self):
        m = self.memory
        fb = _octal_taps(self.feedback, m)
        ff = _octal_taps(self.feedforward, m)
        if fb[0] != 1:
            raise ValueError("feedback polynomial must have a unit D^0 term")
        ns = 1 << m
        next_state = np.zeros((ns, 2), dtype=np.int64)
        parity = np.zeros((ns, 2), dtype=np.int64)
        for s in range(ns):
            reg = [(s >> (m - 1 - j)) & 1 for j in range(m)]  # reg[0] = D^1
            for u in range(2):
                a = u
                for j in range(m):
                    a ^= fb[j + 1] & reg[j]
                p = ff[0] & a
                for j in range(m):
                    p ^= ff[j + 1] & reg[j]
                new = [a] + reg[:-1]
                next_state[s, u] = sum(b << (m - 1 - j) for j, b in enumerate(new))
                parity[s, u] = p
        next_state.setflags(write=False)
        parity.setflags(write=False)
        object.__setattr__(self, "next_state", next_state)
        object.__setattr__(self, "parity", parity)

    @property
    def constraint_length(self) -> int:
        return self.memory + 1

    @property
    def num_states(self) -> int:
        return 1 << self.memory


DEFAULT_TRELLIS = Trellis()


@numba.njit(cache=True)
def _rsc_kernel(bits, next_state, parity_table):
    n = bits.shape[0]
    out = np.empty(n, dtype=np.int8)
    s = 0
    for k in range(n):
        u = bits[k]
        out[k] = parity_table[s, u]
        s = next_state[s, u]
    return out, s


def _as_bits(bits) -> np.ndarray:
    b = np.asarray(bits)
    if b.ndim != 1 or b.size == 0:
        raise ValueError("expected a non-empty 1-D bit block")
    if np.any((b != 0) & (b != 1)):
        raise ValueError("bit block must contain only 0 and 1")
    return b.astype(np.int8)


def rsc_encode(bits, trellis: Trellis = DEFAULT_TRELLIS) -> tuple[np.ndarray, np.ndarray]:
    """Encode one block with the RSC constituent, starting from state 0.

    Returns the systematic stream (the input itself) and the parity
    stream. No tail bits are appended.
    """
    b = _as_bits(bits)
    parity, _ = _rsc_kernel(b, trellis.next_state, trellis.parity)
    return b.copy(), parity


@dataclass(frozen=True)
class Interleaver:
    """A fixed permutation; ``interleave(x)[k] == x[permutation[k]]``."""

    permutation: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.permutation, dtype=np.int64)
        if p.ndim != 1 or not np.array_equal(np.sort(p), np.arange(p.size)):
            raise ValueError("permutation must be a bijection on range(length)")
        p = p.copy()
        p.setflags(write=False)
        inv = np.empty_like(p)
        inv[p] = np.arange(p.size)
        inv.setflags(write=False)
        object.__setattr__(self, "permutation", p)
        object.__setattr__(self, "inverse", inv)

    def __len__(self) -> int:
        return self.permutation.size

    def interleave(self, x):
        return np.asarray(x)[..., self.permutation]

    def deinterleave(self, y):
        return np.asarray(y)[..., self.inverse]

    def __eq__(self, other):
        return isinstance(other, Interleaver) and np.array_equal(self.permutation, other.permutation)

    def __hash__(self):
        return hash(self.permutation.tobytes())


def make_interleaver(length: int, rng: RngStream) -> Interleaver:
    """Uniformly random permutation of ``range(length)`` drawn from ``rng``."""
    if length < 2:
        raise ValueError("interleaver length must be at least 2")
    # Generator.permutation is a Fisher-Yates shuffle
    return Interleaver(rng.generator.permutation(length))


def make_interleaver_pair(length: int, rng: RngStream) -> tuple[Interleaver, Interleaver]:
    """Two distinct random interleavers for the second and third branches."""
    il1 = make_interleaver(length, rng.spawn(1))
    k = 2
    while True:
        il2 = make_interleaver(length, rng.spawn(k))
        if il2 != il1:
            return il1, il2
        k += 1


@dataclass(frozen=True)
class PcccCodeword:
    systematic: np.ndarray
    parity1: np.ndarray
    parity2: np.ndarray
    parity3: np.ndarray

    @property
    def multiplexed(self) -> np.ndarray:
        """Per-bit grouping ``[s0, p1_0, p2_0, p3_0, s1, ...]``."""
        return np.stack(
            [self.systematic, self.parity1, self.parity2, self.parity3], axis=-1
        ).reshape(-1)

    def __len__(self) -> int:
        return 4 * self.systematic.size


def demultiplex(stream) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split a multiplexed coded stream (bits or soft values) into its four lanes."""
    s = np.asarray(stream)
    if s.size % 4:
        raise ValueError("coded stream length must be a multiple of 4")
    lanes = s.reshape(-1, 4)
    return lanes[:, 0], lanes[:, 1], lanes[:, 2], lanes[:, 3]


def pccc_encode(
    bits,
    trellis: Trellis = DEFAULT_TRELLIS,
    il1: Interleaver | None = None,
    il2: Interleaver | None = None,
) -> PcccCodeword:
    """Rate-1/4 parallel concatenation of three RSC encoders."""
    b = _as_bits(bits)
    if il1 is None or il2 is None:
        raise ValueError("both interleavers are required")
    if len(il1) != b.size or len(il2) != b.size:
        raise ValueError(
            f"interleaver lengths ({len(il1)}, {len(il2)}) do not match block size {b.size}"
        )
    if il1 == il2:
        raise ValueError("the two interleavers must be distinct permutations")
    _, p1 = rsc_encode(b, trellis)
    _, p2 = rsc_encode(il1.interleave(b), trellis)
    _, p3 = rsc_encode(il2.interleave(b), trellis)
    return PcccCodeword(b.copy(), p1, p2, p3)
