import numpy as np
import pytest

from tcofdm import OfdmGeometry, ofdm_demodulate, ofdm_modulate, qpsk_modulate
from tcofdm.core_signal import SizingError
from tcofdm.ofdm import (
    add_cyclic_prefix,
    frame_transform,
    inverse_frame_transform,
    remove_cyclic_prefix,
    symbols_to_frames,
)


def test_default_geometry():
    g = OfdmGeometry()
    assert (g.fft_length, g.data_carriers, g.pad_carriers, g.cp_length) == (2048, 1536, 512, 512)
    assert g.data_carriers + g.pad_carriers == g.fft_length
    assert g.symbol_length == 2560


def test_geometry_rejects_bad_length():
    with pytest.raises(SizingError):
        OfdmGeometry(1000)


def test_frame_transform_small():
    g = OfdmGeometry(8)
    d = np.arange(1, 7)
    assert frame_transform(d, g).real.tolist() == [1, 2, 3, 0, 0, 4, 5, 6]
    assert np.array_equal(inverse_frame_transform(frame_transform(d, g), g), d)
    assert not frame_transform(np.zeros(6), g).any()
    with pytest.raises(ValueError):
        frame_transform(np.ones(5), g)


def test_zero_block_location(rng):
    g = OfdmGeometry(256)
    f = frame_transform(rng.complex_normal((3, g.data_carriers)), g)
    h = g.data_carriers // 2
    assert not f[:, h : h + g.pad_carriers].any()


def test_cyclic_prefix():
    g = OfdmGeometry(8)
    t = np.arange(8)
    assert add_cyclic_prefix(t, g).real.tolist() == [6, 7, 0, 1, 2, 3, 4, 5, 6, 7]
    assert np.array_equal(remove_cyclic_prefix(add_cyclic_prefix(t, g), g), t)
    assert add_cyclic_prefix(np.zeros(2048), OfdmGeometry()).size == 2560
    with pytest.raises(ValueError):
        add_cyclic_prefix(np.zeros(7), g)


def test_roundtrip(rng):
    g = OfdmGeometry()
    x = rng.complex_normal((2, g.data_carriers))
    assert np.max(np.abs(ofdm_demodulate(ofdm_modulate(x, g), g) - x)) < 1e-12
    assert not ofdm_modulate(np.zeros(g.data_carriers), g).any()
    with pytest.raises(ValueError):
        ofdm_demodulate(np.zeros(2048), g)


def test_output_power_scaling(rng):
    g = OfdmGeometry()
    x = qpsk_modulate(rng.bits(2 * g.data_carriers))
    t = ofdm_modulate(x, g)[g.cp_length :]
    # Parseval with a 1/N inverse: sum|t|^2 = sum|X|^2 / N = D / N
    assert np.mean(np.abs(t) ** 2) == pytest.approx(g.data_carriers / g.fft_length**2, rel=1e-12)


def test_subcarrier_orthogonality():
    g = OfdmGeometry(64)
    a = np.zeros(g.data_carriers, complex)
    b = np.zeros(g.data_carriers, complex)
    a[3], b[40] = 1, 1
    ta = ofdm_modulate(a, g)[g.cp_length :]
    tb = ofdm_modulate(b, g)[g.cp_length :]
    assert abs(np.vdot(ta, tb)) < 1e-12


def test_symbols_to_frames():
    g = OfdmGeometry(16)
    assert symbols_to_frames(np.arange(24), g).shape == (2, 12)
    with pytest.raises(ValueError):
        symbols_to_frames(np.arange(10), g)
