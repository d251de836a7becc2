"""Gray-coded QPSK with a pi/4 phase offset, and unipolar/bipolar conversion.

Bit pairs are read high bit first. Going counter-clockwise from pi/4 the
labels are 00, 01, 11, 10, which makes the in-phase sign carry the low
bit and the quadrature sign carry the high bit.
"""

import numpy as np

_ANGLES = np.pi / 4 + np.pi / 2 * np.arange(4)
# label (b1 b0) -> constellation index
_GRAY_INDEX = np.array([0, 1, 3, 2])
CONSTELLATION = np.exp(1j * _ANGLES[_GRAY_INDEX])  # indexed by label


def qpsk_modulate(bits) -> np.ndarray:
    """Map an even-length bit sequence to unit-energy QPSK symbols."""
    b = np.asarray(bits).astype(np.int64).ravel()
    if b.size % 2:
        raise ValueError("QPSK needs an even number of bits")
    labels = 2 * b[0::2] + b[1::2]
    return CONSTELLATION[labels]


def qpsk_demodulate_hard(symbols) -> np.ndarray:
    """Nearest-point decisions; a sample on a boundary takes the smaller label."""
    z = np.asarray(symbols, dtype=np.complex128).ravel()
    out = np.empty(2 * z.size, dtype=np.int8)
    out[0::2] = z.imag < 0
    out[1::2] = z.real < 0
    return out


def to_bipolar(bits) -> np.ndarray:
    """0 -> -1, 1 -> +1."""
    return 2.0 * np.asarray(bits, dtype=np.float64) - 1.0
