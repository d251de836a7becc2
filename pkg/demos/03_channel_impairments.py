"""Look at the fading and phase-noise generators on their own."""
# %%
import numpy as np

from tcofdm import RngStream
from tcofdm.channel import (
    FadingConfig,
    PhaseNoiseConfig,
    doppler_spread,
    estimate_phase_psd,
    flat_doppler_process,
    generate_tap_gains,
    phase_noise_sequence,
)

fd = doppler_spread(2e9, 3.0)
print(f"pedestrian Doppler at 2 GHz, 3 km/h: {fd:.3f} Hz, coherence ~{0.423 / fd * 1e3:.0f} ms")

# %%
# Autocorrelation of the flat-spectrum process follows sinc(2 f_d tau).
fs, n = 200.0, 4000
lags = np.arange(0, 20, 4)
acf = np.zeros(lags.size)
for r in range(30):
    g = flat_doppler_process(n, fd, fs, RngStream(3, r))
    acf += [np.mean(g[l:] * np.conj(g[: n - l])).real for l in lags]
for l, a in zip(lags, acf / acf[0]):
    print(f"lag {l / fs * 1e3:5.1f} ms  acf {a:+.3f}  sinc {np.sinc(2 * fd * l / fs):+.3f}")

# %%
# Rician taps: LOS to diffuse energy ratio on the first tap.
st = generate_tap_gains(FadingConfig(2.0, max_doppler_hz=400.0, sample_rate_hz=1000.0), 200_000, RngStream(4))
ratio = np.mean(np.abs(st.los_gains[0]) ** 2) / np.mean(np.abs(st.diffuse_gains[0]) ** 2)
print(f"K=2 measured LOS/diffuse ratio {ratio:.3f}")

# %%
cfg = PhaseNoiseConfig(sample_rate_hz=1e4)
ph = np.stack([phase_noise_sequence(2**16, cfg, RngStream(5, i)) for i in range(40)])
freqs = [10.0, 100.0, 1000.0]
for f, s in zip(freqs, estimate_phase_psd(ph, cfg.sample_rate_hz, freqs)):
    print(f"phase-noise PSD at {f:6.0f} Hz: {10 * np.log10(s):6.1f} dBc/Hz")
