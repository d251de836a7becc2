from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from tcofdm import OfdmGeometry, RngStream, ofdm_demodulate, ofdm_modulate, qpsk_modulate
from tcofdm.channel import (
    PEDESTRIAN_A,
    AwgnConfig,
    ChannelModel,
    ChannelState,
    FadingConfig,
    PhaseNoiseConfig,
    add_awgn,
    apply_phase_noise,
    coherence_time,
    doppler_spread,
    estimate_phase_psd,
    flat_doppler_process,
    flat_rayleigh,
    generate_tap_gains,
    multipath_apply,
    noise_variance,
    perfect_phase_recovery,
    phase_noise_sequence,
    static_phase_rayleigh,
)

# white-ish fading: Doppler just below Nyquist gives nearly independent samples
FAST = dict(max_doppler_hz=499.0, sample_rate_hz=1000.0)


def test_noise_variance_examples():
    assert noise_variance(AwgnConfig(0.0, 2, Fraction(1, 3), 1.0)) == pytest.approx(0.75)
    assert noise_variance(AwgnConfig(0.0, 2, Fraction(1, 4), 1.0)) == pytest.approx(1.0)
    assert noise_variance(AwgnConfig(np.inf)) == 0.0
    assert noise_variance(AwgnConfig(300.0)) < 1e-29


def test_awgn_zero_variance_is_identity(rng):
    x = rng.complex_normal(100)
    assert np.array_equal(add_awgn(x, 0.0, rng), x)


def test_awgn_moments():
    x = np.zeros(10**6, complex)
    n = add_awgn(x, 0.3, RngStream(2)) - x
    for part in (n.real, n.imag):
        assert part.var() == pytest.approx(0.3, rel=0.01)
        assert abs(part.mean()) < 3 * np.sqrt(0.3 / 1e6)


def test_awgn_rejects_negative(rng):
    with pytest.raises(ValueError):
        add_awgn(np.zeros(3), -1.0, rng)


def test_phase_noise_level_and_slope():
    cfg = PhaseNoiseConfig(sample_rate_hz=1e4)
    ph = np.stack([phase_noise_sequence(8192, cfg, RngStream(3, i)) for i in range(100)])
    p100, p1k = 10 * np.log10(estimate_phase_psd(ph, cfg.sample_rate_hz, [100.0, 1000.0]))
    assert p100 == pytest.approx(-50, abs=2)
    assert p1k - p100 == pytest.approx(-10, abs=1.5)


def test_phase_noise_determinism_and_validation():
    cfg = PhaseNoiseConfig(sample_rate_hz=1e4)
    a = phase_noise_sequence(100, cfg, RngStream(1))
    assert np.array_equal(a, phase_noise_sequence(100, cfg, RngStream(1)))
    with pytest.raises(ValueError):
        phase_noise_sequence(1, cfg, RngStream(1))
    with pytest.raises(ValueError):
        PhaseNoiseConfig(offset_hz=600.0, sample_rate_hz=1000.0)


def test_apply_phase_noise(rng):
    x = rng.complex_normal(50)
    assert np.allclose(apply_phase_noise(x, np.zeros(50)), x)
    y = apply_phase_noise(x, rng.normal(60))
    np.testing.assert_allclose(np.abs(y), np.abs(x), rtol=1e-14)
    np.testing.assert_allclose(apply_phase_noise(x, np.full(50, np.pi)), -x, atol=1e-14)
    with pytest.raises(ValueError):
        apply_phase_noise(x, np.zeros(49))


def test_doppler_and_coherence():
    assert doppler_spread(2e9, 3) == pytest.approx(5.556, abs=0.001)
    assert doppler_spread(2e9, 0) == 0
    assert doppler_spread(1.08e9, 1) == pytest.approx(1.0)
    assert coherence_time(5.55) == pytest.approx(0.180, abs=5e-4)
    assert coherence_time(1.0) == 1.0
    fd = doppler_spread(900e6, 50)
    assert coherence_time(fd) * fd == pytest.approx(1.0)
    with pytest.raises(ValueError):
        coherence_time(0.0)


def test_fading_config_normalises_profile():
    cfg = FadingConfig()
    assert cfg.tap_powers.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(
        10 * np.log10(cfg.tap_powers / cfg.tap_powers[0]), [0, -9.7, -19.2, -22.8]
    )
    assert cfg.tap_delays.tolist() == [0, 0, 1, 2]
    with pytest.raises(ValueError):
        FadingConfig(max_doppler_hz=600.0, sample_rate_hz=1000.0)


def test_rayleigh_ks():
    st = generate_tap_gains(flat_rayleigh(**FAST), 10**5, RngStream(1))
    assert not st.los_gains.any()
    amp = np.abs(st.tap_gains[0])
    assert stats.kstest(amp, stats.rayleigh(scale=np.sqrt(0.5)).cdf).pvalue > 0.01


def test_large_k_is_nearly_constant():
    st = generate_tap_gains(FadingConfig(100.0, profile=((0, 0),), **FAST), 10**5, RngStream(2))
    amp = np.abs(st.tap_gains[0])
    assert amp.std() / amp.mean() < 0.1


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_k_factor_energy_split(k):
    st = generate_tap_gains(FadingConfig(k, profile=((0, 0),), **FAST), 10**6, RngStream(5))
    ratio = np.mean(np.abs(st.los_gains[0]) ** 2) / np.mean(np.abs(st.diffuse_gains[0]) ** 2)
    assert ratio == pytest.approx(k, rel=0.05)


def test_tap_powers_match_profile():
    cfg = FadingConfig(0.0, profile=PEDESTRIAN_A, **FAST)
    st = generate_tap_gains(cfg, 10**6, RngStream(6))
    measured = 10 * np.log10(np.mean(np.abs(st.tap_gains) ** 2, axis=1))
    np.testing.assert_allclose(measured, 10 * np.log10(cfg.tap_powers), atol=0.3)


def test_flat_doppler_autocorrelation():
    fd, fs, n = 5.55, 200.0, 4000
    lags = np.arange(int(0.5 / fd * fs) + 1)
    acc = np.zeros(lags.size)
    for r in range(50):
        g = flat_doppler_process(n, fd, fs, RngStream(9, r))
        acc += [np.mean(g[l:] * np.conj(g[: n - l])).real for l in lags]
    acc /= 50
    assert np.max(np.abs(acc / acc[0] - np.sinc(2 * fd * lags / fs))) < 0.05


def test_static_doppler_is_constant():
    g = flat_doppler_process(10, 0.0, 100.0, RngStream(1))
    assert np.all(g == g[0])


def _static_state(gains, delays):
    gains = np.asarray(gains, complex)[:, None] * np.ones((1, 16))
    return ChannelState(gains, np.zeros_like(gains), np.asarray(delays), RngStream(0))


def test_multipath_identity_and_two_tap_impulse(rng):
    x = rng.complex_normal(16)
    assert np.allclose(multipath_apply(x, _static_state([1.0], [0])), x)
    imp = np.zeros(16)
    imp[0] = 1
    y = multipath_apply(imp, _static_state([1.0, 10 ** (-9.7 / 20)], [0, 1]))
    assert y[0] == pytest.approx(1.0)
    assert abs(y[1]) == pytest.approx(0.327, abs=5e-4)
    assert not y[2:].any()


def test_perfect_phase_recovery(rng):
    x = rng.complex_normal(20)
    assert np.allclose(perfect_phase_recovery(x, x), x)
    assert np.allclose(perfect_phase_recovery(2 * x, x), 2 * x)
    y = perfect_phase_recovery(np.array([3 - 4j]), np.array([0j]))
    assert y[0] == 5.0
    with pytest.raises(ValueError):
        perfect_phase_recovery(x, x[:-1])


def test_static_phase_rayleigh(rng):
    x = rng.complex_normal(16)
    unit = _static_state([1.0], [0])
    assert np.allclose(static_phase_rayleigh(x, 0.0, unit), x)
    assert np.allclose(static_phase_rayleigh(x, np.pi, unit), -x)
    st = generate_tap_gains(flat_rayleigh(**FAST), 10**5, RngStream(3))
    s = np.ones(10**5)
    a0 = np.abs(static_phase_rayleigh(s, 0.0, st))
    a1 = np.abs(static_phase_rayleigh(s, np.radians(40), st))
    assert stats.ks_2samp(a0, a1).statistic < 0.01
    with pytest.raises(ValueError):
        static_phase_rayleigh(x, 0.1, _static_state([1.0, 0.5], [0, 1]))


def test_channel_model_order(rng):
    x = rng.complex_normal(64)
    assert np.array_equal(ChannelModel().apply(x, 0.0, rng), x)
    model = ChannelModel(flat_rayleigh(**FAST), rotation_rad=0.5)
    y = model.apply(x, 0.0, RngStream(4))
    st = generate_tap_gains(model.fading, x.size, RngStream(4).spawn(0))
    # amplitude from the fading, angle from the input, then the fixed rotation
    np.testing.assert_allclose(np.abs(y), np.abs(st.tap_gains[0] * x))
    np.testing.assert_allclose(np.angle(y * np.exp(-0.5j) / x), 0, atol=1e-12)


def test_awgn_calibration_of_uncoded_chain():
    g = OfdmGeometry()
    r = RngStream(21)
    ebn0_db = 4.0
    x = qpsk_modulate(r.bits(2 * g.data_carriers * 40)).reshape(40, -1)
    tx = ofdm_modulate(x, g)
    sigma2 = noise_variance(AwgnConfig(ebn0_db, 2, 1, 1.0 / g.fft_length))
    rx = ofdm_demodulate(add_awgn(tx, sigma2, r), g)
    n = rx - x
    per_dim = 0.5 * np.mean(np.abs(n) ** 2)
    measured = 10 * np.log10(1.0 / (2 * 2 * per_dim))
    assert measured == pytest.approx(ebn0_db, abs=0.1)
