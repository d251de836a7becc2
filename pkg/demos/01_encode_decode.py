"""Encode a block with the three-branch turbo code and decode it.

Walks through the rate-1/4 encoder, a noisy bipolar channel and the
iterative decoder, printing the bit errors after each iteration.
"""
# %%
import numpy as np

from tcofdm import DecoderInput, RngStream, pccc_encode, scale_received
from tcofdm.fec import make_interleaver_pair
from tcofdm.turbo import turbo_decode_trace

rng = RngStream(seed=11)
k = 512
il1, il2 = make_interleaver_pair(k, rng.spawn(0))
bits = rng.spawn(1).bits(k)
cw = pccc_encode(bits, il1=il1, il2=il2)
print("codeword length", cw.multiplexed.size, "for", k, "info bits")

# %%
# Soft channel: bipolar symbols plus Gaussian noise at Eb/N0 = 1 dB, rate 1/4.
ebn0 = 10 ** (1.0 / 10)
sigma2 = 1 / (2 * 0.25 * ebn0)
tx = 1.0 - 2.0 * cw.multiplexed
rx = tx + np.sqrt(sigma2) * rng.spawn(2).normal(tx.size)
llrs = scale_received(-rx, sigma2)  # LLR = log P(1)/P(0)

inp = DecoderInput.from_stream(llrs, il1, il2)
for it, decided in enumerate(turbo_decode_trace(inp, 8, schedule="full"), start=1):
    print(f"iteration {it}: {int(np.sum(decided != bits))} errors")
