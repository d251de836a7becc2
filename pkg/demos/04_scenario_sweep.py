"""A small BER sweep over two scenarios, written out as CSV plus plot scripts.

Reduced block and FFT sizes keep this under a minute; use the command-line
tool for full-size runs.
"""
# %%
import tempfile
from pathlib import Path

from tcofdm.sim import ScenarioConfig, emit_results, run_sweep, sort_records

common = dict(block_size=256, fft_length=512, iterations=4, min_errors=50,
              max_bits=100_000, ebn0_points_db=(2.0, 4.0, 6.0), seed=7)
records = []
for kind in ("awgn", "awgn+rician_pa3+pn"):
    records += run_sweep(ScenarioConfig(kind, **common))

for r in sort_records(records):
    if r.iterations == common["iterations"]:
        print(f"{r.scenario:28s} {r.ebn0_db:4.1f} dB  BER {r.ber:.3e}")

# %%
out = Path(tempfile.mkdtemp()) / "sweep.csv"
written = emit_results(records, out)
print("wrote", *written, sep="\n  ")
