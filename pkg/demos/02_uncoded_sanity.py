"""Uncoded QPSK over the OFDM chain against the closed-form AWGN curve."""
# %%
import math

from scipy.special import erfc

from tcofdm.sim import ScenarioConfig, run_point

config = ScenarioConfig("awgn", uncoded=True, min_errors=500, max_bits=400_000, seed=2)
for ebn0 in (0.0, 2.0, 4.0, 6.0):
    rec = run_point(config, ebn0)
    theory = 0.5 * erfc(math.sqrt(10 ** (ebn0 / 10)))
    print(f"{ebn0:4.1f} dB  measured {rec.ber:.3e}  theory {theory:.3e}  ({rec.bits} bits)")
