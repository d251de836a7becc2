import itertools

import numpy as np
import pytest

from tcofdm import qpsk_demodulate_hard, qpsk_modulate, to_bipolar
from tcofdm.modem import CONSTELLATION

PAIRS = [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_zero_pair_maps_to_pi_over_4():
    s = qpsk_modulate([0, 0])[0]
    assert s == pytest.approx(0.70710678 + 0.70710678j, abs=1e-8)


def test_bijection_unit_magnitude():
    syms = [qpsk_modulate(p)[0] for p in PAIRS]
    assert len({np.round(s, 12) for s in syms}) == 4
    np.testing.assert_allclose(np.abs(syms), 1.0, rtol=0, atol=1e-15)
    angles = sorted(np.mod(np.angle(syms), 2 * np.pi))
    np.testing.assert_allclose(angles, np.pi / 4 + np.pi / 2 * np.arange(4))


def test_mean_energy(rng):
    s = qpsk_modulate(rng.bits(2000))
    assert np.mean(np.abs(s) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_gray_adjacency():
    order = np.argsort(np.mod(np.angle(CONSTELLATION), 2 * np.pi))
    for a, b in zip(order, np.roll(order, -1)):
        assert bin(int(a) ^ int(b)).count("1") == 1


def test_roundtrip_all_four_bit_patterns():
    for bits in itertools.product((0, 1), repeat=4):
        assert qpsk_demodulate_hard(qpsk_modulate(bits)).tolist() == list(bits)


def test_perturbed_symbol_stays():
    assert qpsk_demodulate_hard([0.70711 + 0.70711j + (0.1 - 0.05j)]).tolist() == [0, 0]


def test_boundary_takes_smaller_label():
    # 1+0j sits between labels 00 and 10
    assert qpsk_demodulate_hard([1 + 0j]).tolist() == [0, 0]
    # -1+0j sits between 01 and 11
    assert qpsk_demodulate_hard([-1 + 0j]).tolist() == [0, 1]
    assert qpsk_demodulate_hard([0j]).tolist() == [0, 0]


def test_rotation_below_quarter_pi(rng):
    bits = rng.bits(400)
    s = qpsk_modulate(bits)
    for ang in (-0.7, -0.2, 0.3, 0.78):
        assert np.array_equal(qpsk_demodulate_hard(s * np.exp(1j * ang)), bits)


def test_odd_length_rejected():
    with pytest.raises(ValueError):
        qpsk_modulate([1, 0, 1])


def test_bipolar():
    assert to_bipolar([0, 1, 1, 0]).tolist() == [-1, 1, 1, -1]
    assert np.all(to_bipolar(np.zeros(5)) == -1)
    bits = np.array([1, 0, 0, 1, 1])
    assert np.array_equal((to_bipolar(bits) > 0).astype(int), bits)
