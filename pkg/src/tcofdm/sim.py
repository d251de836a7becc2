"""Seeded Monte Carlo BER sweeps over the full turbo-coded OFDM chain.

Per batch of blocks the chain is

    source bits -> PCCC encoder -> QPSK -> OFDM (pad, IFFT, CP)
    -> channel -> OFDM receiver -> hard QPSK decisions -> bipolar
    -> 2/VAR scaling -> turbo decoder -> compare with source

A batch holds just enough blocks to fill a whole number of OFDM frames
from the continuous symbol stream, so codewords straddle frame
boundaries exactly as in a buffered transmitter.
"""

from __future__ import annotations

import csv
import io
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from tcofdm.channel import (
    PEDESTRIAN_A,
    AwgnConfig,
    ChannelModel,
    FadingConfig,
    PhaseNoiseConfig,
    doppler_spread,
    flat_rayleigh,
    noise_variance,
)
from tcofdm.core_signal import RngStream
from tcofdm.fec import DEFAULT_TRELLIS, make_interleaver_pair, pccc_encode
from tcofdm.modem import qpsk_demodulate_hard, qpsk_modulate, to_bipolar
from tcofdm.ofdm import OfdmGeometry, ofdm_demodulate, ofdm_modulate, symbols_to_frames
from tcofdm.turbo import SCHEDULES, DecoderInput, scale_received, turbo_decode_trace

SCENARIO_KINDS = (
    "awgn",
    "awgn+pn",
    "awgn+rayleigh_shift",
    "awgn+rayleigh_pa3",
    "awgn+rician_pa3",
    "awgn+rician_pa3+pn",
)

CSV_HEADER = ("scenario", "ebn0_db", "iterations", "block_size", "bits", "errors", "ber")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_kind: str = "awgn"
    k_factor: float = 1.0
    phase_angle_deg: float = 30.0
    block_size: int = 512
    iterations: int = 5
    fft_length: int = 2048
    ebn0_points_db: tuple[float, ...] = (0.0,)
    seed: int = 0
    min_errors: int = 100
    max_bits: int = 10_000_000
    sample_rate_hz: float = 3.84e6
    carrier_hz: float = 2e9
    speed_kmh: float = 3.0
    uncoded: bool = False
    # code rate used to calibrate the noise; None means the actual rate
    noise_code_rate: Fraction | None = None
    phase_noise_dbc_hz: float = -50.0
    phase_noise_offset_hz: float = 100.0
    noiseless: bool = False
    decoder_schedule: str = "ring"

    def __post_init__(self):
        object.__setattr__(self, "ebn0_points_db", tuple(float(e) for e in self.ebn0_points_db))
        self.validate()

    def validate(self):
        if self.scenario_kind not in SCENARIO_KINDS:
            raise ValueError(f"unknown scenario {self.scenario_kind!r}; choose from {SCENARIO_KINDS}")
        if not 1 <= self.iterations <= 5:
            raise ValueError("iterations must be between 1 and 5")
        if self.block_size < 2 or self.block_size % 2:
            raise ValueError("block_size must be an even number >= 2")
        OfdmGeometry(self.fft_length)
        if self.min_errors < 1 or self.max_bits < 1:
            raise ValueError("stop rule needs min_errors >= 1 and max_bits >= 1")
        if self.decoder_schedule not in SCHEDULES:
            raise ValueError(f"decoder_schedule must be one of {SCHEDULES}")
        if self.k_factor < 0:
            raise ValueError("k_factor must be non-negative")
        if self.sample_rate_hz <= 0 or self.carrier_hz < 0 or self.speed_kmh < 0:
            raise ValueError("sample rate must be positive, carrier and speed non-negative")
        if self.uses_fading and self.max_doppler_hz >= self.sample_rate_hz / 2:
            raise ValueError("Doppler spread must be below half the sample rate")
        if self.uses_phase_noise and self.phase_noise_offset_hz >= self.sample_rate_hz / 2:
            raise ValueError("phase-noise offset must be below half the sample rate")

    @property
    def uses_fading(self) -> bool:
        return "rayleigh" in self.scenario_kind or "rician" in self.scenario_kind

    @property
    def uses_phase_noise(self) -> bool:
        return self.scenario_kind.endswith("+pn")

    @property
    def label(self) -> str:
        kind = self.scenario_kind
        if kind == "awgn+rayleigh_shift":
            kind = f"awgn+rayleigh_shift({self.phase_angle_deg:g})"
        elif kind.startswith("awgn+rician_pa3"):
            kind = kind.replace("rician_pa3", f"rician_pa3(K={self.k_factor:g})")
        if self.uncoded:
            kind += "+uncoded"
        return kind

    @property
    def code_rate(self) -> Fraction:
        return Fraction(1) if self.uncoded else Fraction(1, 4)

    @property
    def max_doppler_hz(self) -> float:
        return doppler_spread(self.carrier_hz, self.speed_kmh)

    def channel_model(self) -> ChannelModel:
        if self.noiseless:
            return ChannelModel()
        kind = self.scenario_kind
        fd = self.max_doppler_hz
        fs = self.sample_rate_hz
        fading = None
        rotation = 0.0
        if kind == "awgn+rayleigh_shift":
            fading = flat_rayleigh(max_doppler_hz=fd, sample_rate_hz=fs)
            rotation = math.radians(self.phase_angle_deg)
        elif kind == "awgn+rayleigh_pa3":
            fading = FadingConfig(0.0, fd, PEDESTRIAN_A, fs)
        elif kind.startswith("awgn+rician_pa3"):
            fading = FadingConfig(self.k_factor, fd, PEDESTRIAN_A, fs)
        pn = None
        if self.uses_phase_noise:
            pn = PhaseNoiseConfig(self.phase_noise_dbc_hz, self.phase_noise_offset_hz, fs)
        return ChannelModel(fading, rotation, pn)


@dataclass(frozen=True)
class BerRecord:
    scenario: str
    ebn0_db: float
    iterations: int
    block_size: int
    bits: int
    errors: int

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits else 0.0


def ber_count(reference, decoded, delay: int = 0) -> tuple[int, int]:
    """Errors and compared bits after delaying the reference by ``delay`` samples.

    ``decoded[k]`` is compared with ``reference[k - delay]``.
    """
    if delay < 0:
        raise ValueError("delay must be non-negative")
    ref = np.asarray(reference)
    dec = np.asarray(decoded)
    n = min(ref.size, dec.size - delay)
    if n <= 0:
        raise ValueError("no overlap between reference and delayed decoded sequence")
    return int(np.count_nonzero(ref[:n] != dec[delay : delay + n])), int(n)


def pipeline_delay(config: ScenarioConfig) -> int:
    """Latency in bits between source and decoder output.

    The frame loop hands each batch to the receiver whole, so no
    buffering delay accumulates and the aligned offset is zero for every
    geometry.
    """
    return 0


def blocks_per_batch(config: ScenarioConfig) -> int:
    coded = config.block_size if config.uncoded else 4 * config.block_size
    sym_per_block = coded // 2
    d = OfdmGeometry(config.fft_length).data_carriers
    base = math.lcm(sym_per_block, d) // sym_per_block
    if config.uncoded:
        # uncoded blocks are cheap; batch at least 16 frames
        frames = base * sym_per_block // d
        base *= max(1, math.ceil(16 / frames))
    return base


def _point_key(ebn0_db: float) -> int:
    k = int(round(ebn0_db * 1000))
    return 2 * k if k >= 0 else -2 * k - 1


def _noise_levels(config: ScenarioConfig, ebn0_db: float) -> tuple[float, float]:
    """(time-domain variance per dimension, demodulator-input variance)."""
    n = config.fft_length
    rate = config.noise_code_rate or config.code_rate
    if config.noiseless:
        ebn0_db = math.inf
    var_f = noise_variance(AwgnConfig(ebn0_db, 2, rate, 1.0))
    # each unit-energy data symbol carries 1/N energy after the 1/N IFFT
    return var_f / n, var_f


def simulate_batch(config: ScenarioConfig, ebn0_db: float, rng: RngStream, interleavers=None):
    """Run one batch; return the source bits and per-iteration decisions."""
    geom = OfdmGeometry(config.fft_length)
    nblk = blocks_per_batch(config)
    L = config.block_size
    src = rng.spawn(0).bits(nblk * L).reshape(nblk, L)
    if config.uncoded:
        coded = src
    else:
        il1, il2 = interleavers
        coded = np.stack([pccc_encode(b, DEFAULT_TRELLIS, il1, il2).multiplexed for b in src])
    frames = symbols_to_frames(qpsk_modulate(coded.ravel()), geom)
    tx = ofdm_modulate(frames, geom).ravel()
    sigma2_t, var_f = _noise_levels(config, ebn0_db)
    rx = config.channel_model().apply(tx, sigma2_t, rng.spawn(1))
    sym = ofdm_demodulate(rx.reshape(-1, geom.symbol_length), geom).ravel()
    hard = qpsk_demodulate_hard(sym).reshape(nblk, -1)
    if config.uncoded:
        return src, [hard]
    llr = scale_received(to_bipolar(hard), var_f if var_f > 0 else 1e-12)
    traces = [
        turbo_decode_trace(
            DecoderInput.from_stream(row, il1, il2),
            config.iterations,
            schedule=config.decoder_schedule,
        )
        for row in llr
    ]
    per_iter = [np.stack([t[i] for t in traces]) for i in range(config.iterations)]
    return src, per_iter


def interleavers_for(config: ScenarioConfig):
    return make_interleaver_pair(config.block_size, RngStream(config.seed, stream_id=0))


def run_point_all(config: ScenarioConfig, ebn0_db: float) -> list[BerRecord]:
    """Records for iteration counts 1..config.iterations at one Eb/N0 point.

    All counts share the same decoded blocks (hard decisions are taken
    after every pass); the stop rule is judged on the final count.
    """
    config.validate()
    ils = None if config.uncoded else interleavers_for(config)
    stream = RngStream(config.seed, stream_id=1).spawn(_point_key(ebn0_db))
    n_iter = 1 if config.uncoded else config.iterations
    errors = [0] * n_iter
    bits = 0
    delay = pipeline_delay(config)
    batch = 0
    while errors[-1] < config.min_errors and bits < config.max_bits:
        src, decisions = simulate_batch(config, ebn0_db, stream.spawn(batch), ils)
        ref = src.ravel()
        for i, dec in enumerate(decisions):
            e, b = ber_count(ref, dec.ravel(), delay)
            errors[i] += e
        bits += b
        batch += 1
    iters = [config.iterations] if config.uncoded else range(1, n_iter + 1)
    return [
        BerRecord(config.label, float(ebn0_db), it, config.block_size, bits, err)
        for it, err in zip(iters, errors)
    ]


def run_point(config: ScenarioConfig, ebn0_db: float) -> BerRecord:
    return run_point_all(config, ebn0_db)[-1]


def run_sweep(config: ScenarioConfig, workers: int = 1) -> list[BerRecord]:
    """One record per (Eb/N0 point, iteration count 1..iterations)."""
    if not config.ebn0_points_db:
        raise ValueError("ebn0_points_db is empty")
    pts = list(config.ebn0_points_db)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            chunks = list(ex.map(run_point_all, [config] * len(pts), pts))
    else:
        chunks = [run_point_all(config, e) for e in pts]
    return sort_records([r for c in chunks for r in c])


def sort_records(records) -> list[BerRecord]:
    return sorted(records, key=lambda r: (r.scenario, r.iterations, r.ebn0_db))


# ------------------------------------------------------------------ output


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in sort_records(records):
        w.writerow([r.scenario, f"{r.ebn0_db:g}", r.iterations, r.block_size,
                    r.bits, r.errors, f"{r.ber:.6g}"])
    return buf.getvalue()


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_")


_PLOT_TEMPLATE = '''"""BER vs Eb/N0 for scenario {label}, one curve per iteration count."""
import matplotlib.pyplot as plt

CURVES = {curves!r}

fig, ax = plt.subplots()
for iters, (ebn0, ber) in sorted(CURVES.items()):
    pts = [(e, b) for e, b in zip(ebn0, ber) if b > 0]
    if pts:
        ax.semilogy(*zip(*pts), marker="o", label=f"{{iters}} iteration(s)")
ax.set_xlabel("Eb/N0 (dB)")
ax.set_ylabel("BER")
ax.set_title({label!r})
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.savefig({out!r})
'''


def plot_script(records, label: str, image_name: str) -> str:
    curves: dict[int, tuple[list, list]] = {}
    for r in sort_records(records):
        if r.scenario != label:
            continue
        e, b = curves.setdefault(r.iterations, ([], []))
        e.append(r.ebn0_db)
        b.append(float(f"{r.ber:.6g}"))
    return _PLOT_TEMPLATE.format(label=label, curves=curves, out=image_name)


def emit_results(records, path) -> list[Path]:
    """Write the CSV to ``path`` and one plot script per scenario next to it."""
    records = list(records)
    if not records:
        raise ValueError("no records to emit")
    path = Path(path)
    written = []
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(records_to_csv(records))
        written.append(path)
        for label in sorted({r.scenario for r in records}):
            stem = f"{path.stem}_{_slug(label)}"
            script = path.with_name(stem + "_plot.py")
            script.write_text(plot_script(records, label, stem + ".png"))
            written.append(script)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return written


def config_dict(config: ScenarioConfig) -> dict:
    d = asdict(config)
    d["noise_code_rate"] = None if config.noise_code_rate is None else str(config.noise_code_rate)
    return d
