"""Turbo-coded OFDM link simulator.

Three-branch PCCC turbo code, QPSK/OFDM baseband chain and a composite
channel (AWGN, 1/f phase noise, Rayleigh/Rician multipath with a flat
Doppler spectrum), driven by seeded Monte Carlo BER sweeps.
"""

from tcofdm.core_signal import RngStream, dft, gaussian_pair
from tcofdm.fec import (
    Interleaver,
    PcccCodeword,
    Trellis,
    make_interleaver,
    pccc_encode,
    rsc_encode,
)
from tcofdm.turbo import (
    DecoderInput,
    app_decode,
    max_star,
    scale_received,
    turbo_decode,
)
from tcofdm.modem import qpsk_demodulate_hard, qpsk_modulate, to_bipolar
from tcofdm.ofdm import OfdmGeometry, ofdm_demodulate, ofdm_modulate

__version__ = "0.1.0"

__all__ = [
    "RngStream",
    "dft",
    "gaussian_pair",
    "Interleaver",
    "PcccCodeword",
    "Trellis",
    "make_interleaver",
    "pccc_encode",
    "rsc_encode",
    "DecoderInput",
    "app_decode",
    "max_star",
    "scale_received",
    "turbo_decode",
    "qpsk_demodulate_hard",
    "qpsk_modulate",
    "to_bipolar",
    "OfdmGeometry",
    "ofdm_demodulate",
    "ofdm_modulate",
]
