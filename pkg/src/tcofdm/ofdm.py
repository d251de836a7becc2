"""OFDM framing: centre zero padding, IFFT, cyclic prefix and their inverses.

A frame of ``fft_length`` bins carries ``0.75 * fft_length`` data symbols.
The quarter of unused bins sits in the middle of the frame (around the
Nyquist bin), with the first half of the data below it and the second
half above it. A cyclic prefix of a quarter frame is prepended after the
inverse transform.

All functions accept a single frame or a stack of frames along the
leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tcofdm.core_signal import SizingError, dft, is_power_of_two


@dataclass(frozen=True)
class OfdmGeometry:
    fft_length: int = 2048

    def __post_init__(self):
        if self.fft_length < 8 or not is_power_of_two(self.fft_length):
            raise SizingError(f"fft_length must be a power of two >= 8, got {self.fft_length}")

    @property
    def data_carriers(self) -> int:
        return 3 * self.fft_length // 4

    @property
    def pad_carriers(self) -> int:
        return self.fft_length // 4

    @property
    def cp_length(self) -> int:
        return self.fft_length // 4

    @property
    def symbol_length(self) -> int:
        """Time samples per OFDM symbol, prefix included."""
        return self.fft_length + self.cp_length


def _check_last(x: np.ndarray, n: int, what: str):
    if x.shape[-1] != n:
        raise ValueError(f"{what}: expected last dimension {n}, got {x.shape[-1]}")


def frame_transform(data, geometry: OfdmGeometry) -> np.ndarray:
    x = np.asarray(data, dtype=np.complex128)
    d, p = geometry.data_carriers, geometry.pad_carriers
    _check_last(x, d, "frame_transform")
    h = d // 2
    out = np.zeros(x.shape[:-1] + (geometry.fft_length,), dtype=np.complex128)
    out[..., :h] = x[..., :h]
    out[..., h + p :] = x[..., h:]
    return out


def inverse_frame_transform(frame, geometry: OfdmGeometry) -> np.ndarray:
    x = np.asarray(frame, dtype=np.complex128)
    d, p = geometry.data_carriers, geometry.pad_carriers
    _check_last(x, geometry.fft_length, "inverse_frame_transform")
    h = d // 2
    return np.concatenate([x[..., :h], x[..., h + p :]], axis=-1)


def add_cyclic_prefix(time, geometry: OfdmGeometry) -> np.ndarray:
    x = np.asarray(time, dtype=np.complex128)
    _check_last(x, geometry.fft_length, "add_cyclic_prefix")
    return np.concatenate([x[..., -geometry.cp_length :], x], axis=-1)


def remove_cyclic_prefix(time, geometry: OfdmGeometry) -> np.ndarray:
    x = np.asarray(time, dtype=np.complex128)
    _check_last(x, geometry.symbol_length, "remove_cyclic_prefix")
    return x[..., geometry.cp_length :]


def ofdm_modulate(data, geometry: OfdmGeometry) -> np.ndarray:
    """Data symbols -> time samples with cyclic prefix (inverse DFT scaled by 1/N)."""
    return add_cyclic_prefix(dft(frame_transform(data, geometry), inverse=True), geometry)


def ofdm_demodulate(time, geometry: OfdmGeometry) -> np.ndarray:
    """Time samples with cyclic prefix -> data symbols (unscaled forward DFT)."""
    return inverse_frame_transform(dft(remove_cyclic_prefix(time, geometry)), geometry)


def symbols_to_frames(symbols, geometry: OfdmGeometry) -> np.ndarray:
    """Fill consecutive OFDM frames from a continuous symbol stream."""
    s = np.asarray(symbols, dtype=np.complex128).ravel()
    d = geometry.data_carriers
    if s.size % d:
        raise ValueError(f"symbol count {s.size} is not a multiple of {d} data carriers")
    return s.reshape(-1, d)
