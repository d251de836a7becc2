"""Composite channel: multipath Rician/Rayleigh fading, phase noise and AWGN.

Signals are complex baseband sample arrays at ``sample_rate_hz``. The
full model, in order, is

    fading -> amplitude/angle recombination with the original angle
    -> optional fixed rotation -> phase noise -> AWGN

(see :class:`ChannelModel`). Everything random draws from an owned
:class:`~tcofdm.core_signal.RngStream`, so a pipeline run is a pure
function of its inputs and seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from tcofdm.core_signal import RngStream

# ITU Pedestrian-A: (relative delay in ns, relative power in dB)
PEDESTRIAN_A = ((0.0, 0.0), (110.0, -9.7), (190.0, -19.2), (410.0, -22.8))
DEFAULT_SAMPLE_RATE_HZ = 3.84e6
# c / (1 km/h) expressed in Hz: 3e8 m/s * 3.6 (km/h per m/s)
_DOPPLER_CONSTANT_HZ = 1.08e9


# --------------------------------------------------------------------- AWGN


@dataclass(frozen=True)
class AwgnConfig:
    ebn0_db: float
    bits_per_symbol: int = 2
    code_rate: Fraction | float = Fraction(1, 4)
    symbol_energy: float = 1.0


def noise_variance(config: AwgnConfig) -> float:
    """Per-dimension noise variance ``Es / (2 Rm Rc Eb/N0)``."""
    if np.isnan(config.ebn0_db):
        raise ValueError("ebn0_db must not be NaN")
    if config.ebn0_db == np.inf:
        return 0.0
    ebn0 = 10.0 ** (config.ebn0_db / 10.0)
    rc = float(config.code_rate)
    return config.symbol_energy / (2.0 * config.bits_per_symbol * rc * ebn0)


def add_awgn(signal, sigma2: float, rng: RngStream) -> np.ndarray:
    """Add complex white Gaussian noise with variance ``sigma2`` per real dimension."""
    if sigma2 < 0:
        raise ValueError("sigma2 must be non-negative")
    x = np.asarray(signal, dtype=np.complex128)
    if sigma2 == 0:
        return x.copy()
    s = np.sqrt(sigma2)
    g = rng.generator
    return x + s * (g.standard_normal(x.shape) + 1j * g.standard_normal(x.shape))


# -------------------------------------------------------------- phase noise


@dataclass(frozen=True)
class PhaseNoiseConfig:
    """1/f oscillator phase noise anchored at one (offset, level) point.

    A carrier ``V0 sin(2 pi f t)`` disturbed by a phase process ``q(t)``
    becomes ``V0 sin(2 pi f t + q(t))``; amplitude fluctuations are not
    modelled. ``level_dbc_hz`` is the single-sideband noise-to-carrier
    ratio in a 1 Hz band at ``offset_hz``, which for small phase
    excursions equals the two-sided PSD of ``q`` in rad^2/Hz.
    """

    level_dbc_hz: float = -50.0
    offset_hz: float = 100.0
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ

    def __post_init__(self):
        if not 0 < self.offset_hz < self.sample_rate_hz / 2:
            raise ValueError("offset_hz must lie in (0, sample_rate_hz / 2)")


def _kasdin_response(n: int, alpha: float) -> np.ndarray:
    k = np.arange(1, n, dtype=np.float64)
    h = np.empty(n)
    h[0] = 1.0
    h[1:] = np.cumprod((k - 1.0 + alpha / 2.0) / k)
    return h


def _fft_filter(h: np.ndarray, w: np.ndarray) -> np.ndarray:
    n = w.size
    m = 1 << int(np.ceil(np.log2(2 * n)))
    return np.fft.irfft(np.fft.rfft(h, m) * np.fft.rfft(w, m), m)[:n]


def phase_noise_sequence(n: int, config: PhaseNoiseConfig, rng: RngStream) -> np.ndarray:
    """A 1/f phase trajectory in radians, ``n`` samples long.

    White Gaussian noise is shaped by the fractional-integration filter
    ``h_k = h_{k-1} (k - 1 + a/2) / k`` with ``a = 1``. The discrete
    process then has two-sided PSD ``Q dt / (2 sin(pi f dt))``, and the
    white-noise variance ``Q`` is chosen so that this equals the
    configured level at the configured offset. A warm-up segment as
    long as the output is discarded so the filter starts with full
    memory.
    """
    if n < 2:
        raise ValueError("phase noise length must be >= 2")
    fs = config.sample_rate_hz
    target = 10.0 ** (config.level_dbc_hz / 10.0)
    q = target * fs * 2.0 * np.sin(np.pi * config.offset_hz / fs)
    total = 2 * n
    w = np.sqrt(q) * rng.normal(total)
    return _fft_filter(_kasdin_response(total, 1.0), w)[n:]


def estimate_phase_psd(phases, sample_rate_hz: float, freqs) -> np.ndarray:
    """Average Hann-windowed two-sided periodogram of real phase records.

    ``phases`` is one record or a stack of equal-length records; the
    result is interpolated at ``freqs`` (Hz) and returned in rad^2/Hz.
    """
    x = np.atleast_2d(np.asarray(phases, dtype=np.float64))
    x = x - x.mean(axis=1, keepdims=True)
    n = x.shape[1]
    win = np.hanning(n)
    spec = np.abs(np.fft.rfft(x * win, axis=1)) ** 2 / (sample_rate_hz * np.sum(win**2))
    f = np.fft.rfftfreq(n, 1.0 / sample_rate_hz)
    return np.interp(freqs, f, spec.mean(axis=0))


def apply_phase_noise(signal, phase) -> np.ndarray:
    """Rotate each sample by the matching phase-noise value."""
    x = np.asarray(signal, dtype=np.complex128)
    ph = np.asarray(phase, dtype=np.float64)
    if ph.shape[-1] < x.shape[-1]:
        raise ValueError("phase sequence is shorter than the signal")
    return x * np.exp(1j * ph[..., : x.shape[-1]])


# ------------------------------------------------------------ Doppler / time


def doppler_spread(carrier_hz: float, speed_kmh: float) -> float:
    """Maximum Doppler frequency ``f0 u / c`` with ``u`` in km/h.

    A source at frequency ``f0`` seen by a receiver moving at relative
    speed ``v`` is shifted by ``+/- v f0 / c``; the spread is the
    largest such shift. With ``c`` expressed as ``1080 MHz * km/h``
    this is ``carrier_hz / 1.08e9 * speed_kmh``.
    """
    if carrier_hz < 0 or speed_kmh < 0:
        raise ValueError("carrier and speed must be non-negative")
    return carrier_hz / _DOPPLER_CONSTANT_HZ * speed_kmh


def coherence_time(doppler_hz: float) -> float:
    if doppler_hz <= 0:
        raise ValueError("coherence time is unbounded for zero Doppler spread")
    return 1.0 / doppler_hz


# ------------------------------------------------------------------ fading


@dataclass(frozen=True)
class FadingConfig:
    """Tapped-delay-line fading channel.

    ``k_factor`` is the Rician ratio of line-of-sight power to diffuse
    power on the first tap (0 gives Rayleigh on every tap). Tap powers
    are taken relative to each other and renormalised to a total mean
    gain of 0 dB; delays are rounded to whole samples at
    ``sample_rate_hz``.
    """

    k_factor: float = 0.0
    max_doppler_hz: float = doppler_spread(2e9, 3.0)
    profile: tuple[tuple[float, float], ...] = PEDESTRIAN_A
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ
    static_phase_rad: float = 0.0
    los_phase_rad: float = 0.0

    def __post_init__(self):
        if self.k_factor < 0:
            raise ValueError("k_factor must be non-negative")
        if not self.profile:
            raise ValueError("profile needs at least one tap")
        if self.max_doppler_hz < 0:
            raise ValueError("max_doppler_hz must be non-negative")
        if self.max_doppler_hz >= self.sample_rate_hz / 2:
            raise ValueError("max Doppler must be below the Nyquist frequency")

    @property
    def tap_powers(self) -> np.ndarray:
        p = 10.0 ** (np.array([db for _, db in self.profile]) / 10.0)
        return p / p.sum()

    @property
    def tap_delays(self) -> np.ndarray:
        ns = np.array([d for d, _ in self.profile])
        return np.rint(ns * 1e-9 * self.sample_rate_hz).astype(np.int64)


def flat_rayleigh(**kwargs) -> FadingConfig:
    """Single-tap Rayleigh fading."""
    return FadingConfig(k_factor=0.0, profile=((0.0, 0.0),), **kwargs)


@dataclass
class ChannelState:
    """Per-tap complex gain series (LOS included) and the optional phase trajectory."""

    tap_gains: np.ndarray
    los_gains: np.ndarray
    delays: np.ndarray
    rng: RngStream
    phase_trajectory: np.ndarray | None = None

    @property
    def diffuse_gains(self) -> np.ndarray:
        return self.tap_gains - self.los_gains


def flat_doppler_process(n: int, max_doppler_hz: float, sample_rate_hz: float, rng: RngStream):
    """Unit-power complex Gaussian process with a flat Doppler spectrum.

    Independent complex Gaussian coefficients fill every frequency bin
    with ``|f| <= max_doppler_hz`` on a coarse grid (at least 32 samples
    per Doppler period, at least 20 Doppler periods long), the grid is
    inverse transformed and the result is linearly interpolated to
    ``sample_rate_hz``. The autocorrelation is then close to
    ``sinc(2 f_d tau)``.
    """
    if max_doppler_hz == 0:
        return np.full(n, rng.complex_normal(1)[0])
    fs_low = min(sample_rate_hz, 32.0 * max_doppler_hz)
    duration = max(n / sample_rate_hz, 20.0 / max_doppler_hz)
    m = 1 << int(np.ceil(np.log2(duration * fs_low + 2)))
    f = np.fft.fftfreq(m, 1.0 / fs_low)
    band = np.abs(f) <= max_doppler_hz
    nb = int(band.sum())
    spec = np.zeros(m, dtype=np.complex128)
    spec[band] = rng.complex_normal(nb)
    low = np.fft.ifft(spec) * (m / np.sqrt(nb))
    if fs_low == sample_rate_hz:
        return low[:n]
    t = np.arange(n) / sample_rate_hz * fs_low
    return np.interp(t, np.arange(m), low.real) + 1j * np.interp(t, np.arange(m), low.imag)


def generate_tap_gains(config: FadingConfig, n: int, rng: RngStream) -> ChannelState:
    """Draw ``n`` samples of every tap's complex gain."""
    if n < 2:
        raise ValueError("need at least 2 samples")
    powers = config.tap_powers
    k = config.k_factor
    gains = np.empty((powers.size, n), dtype=np.complex128)
    los = np.zeros_like(gains)
    for p, g in enumerate(powers):
        diffuse_power = g / (k + 1.0) if p == 0 else g
        proc = flat_doppler_process(n, config.max_doppler_hz, config.sample_rate_hz, rng.spawn(p))
        gains[p] = np.sqrt(diffuse_power) * proc
    if k > 0:
        los[0] = np.sqrt(powers[0] * k / (k + 1.0)) * np.exp(1j * config.los_phase_rad)
        gains[0] += los[0]
    return ChannelState(gains, los, config.tap_delays, rng)


def multipath_apply(signal, state: ChannelState, config: FadingConfig | None = None) -> np.ndarray:
    """Time-varying tapped delay line ``y_k = sum_p g_p[k] x[k - d_p]``."""
    x = np.asarray(signal, dtype=np.complex128)
    n = x.size
    if state.tap_gains.shape[1] < n:
        raise ValueError("channel state is shorter than the signal")
    delays = state.delays if config is None else config.tap_delays
    y = np.zeros(n, dtype=np.complex128)
    for g, d in zip(state.tap_gains, delays):
        if d >= n:
            continue
        y[d:] += g[d:n] * x[: n - d]
    return y


def perfect_phase_recovery(faded, original) -> np.ndarray:
    """Magnitude of the faded signal with the angle of the original one."""
    f = np.asarray(faded, dtype=np.complex128)
    o = np.asarray(original, dtype=np.complex128)
    if f.shape != o.shape:
        raise ValueError("faded and original signals must have equal length")
    return np.abs(f) * np.exp(1j * np.angle(o))


def static_phase_rayleigh(signal, angle_rad: float, state: ChannelState) -> np.ndarray:
    """Flat fading by the single tap of ``state`` followed by a fixed rotation."""
    x = np.asarray(signal, dtype=np.complex128)
    if state.tap_gains.shape[0] != 1:
        raise ValueError("static_phase_rayleigh needs a single-tap channel state")
    return state.tap_gains[0, : x.size] * x * np.exp(1j * angle_rad)


# ------------------------------------------------------------- composition


@dataclass(frozen=True)
class ChannelModel:
    """One scenario's impairments, applied in a fixed order.

    ``fading`` selects the tapped-delay-line channel; its output keeps
    only the magnitude, recombined with the transmitted angle. A
    non-zero ``rotation_rad`` then turns the whole constellation (the
    flat Rayleigh "shift" scenarios). Phase noise and AWGN follow.
    """

    fading: FadingConfig | None = None
    rotation_rad: float = 0.0
    phase_noise: PhaseNoiseConfig | None = None

    def apply(self, signal, sigma2: float, rng: RngStream) -> np.ndarray:
        x = np.asarray(signal, dtype=np.complex128)
        y = x
        if self.fading is not None:
            state = generate_tap_gains(self.fading, x.size, rng.spawn(0))
            if len(self.fading.profile) == 1 and self.fading.k_factor == 0:
                faded = static_phase_rayleigh(x, 0.0, state)
            else:
                faded = multipath_apply(x, state, self.fading)
            y = perfect_phase_recovery(faded, x)
        if self.rotation_rad:
            y = y * np.exp(1j * self.rotation_rad)
        if self.phase_noise is not None:
            y = apply_phase_noise(y, phase_noise_sequence(x.size, self.phase_noise, rng.spawn(1)))
        return add_awgn(y, sigma2, rng.spawn(2))
